#include "uclso/dataset.hpp"

#include "uclso/error.hpp"

#include <algorithm>
#include <unordered_set>

namespace uclso {

std::vector<std::uint8_t> LabelMatrix::column(std::size_t c) const {
    std::vector<std::uint8_t> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        out[r] = (*this)(r, c);
    }
    return out;
}

std::size_t LabelMatrix::positives(std::size_t c) const noexcept {
    std::size_t count = 0;
    for (std::size_t r = 0; r < rows_; ++r) {
        count += (*this)(r, c);
    }
    return count;
}

namespace {

void require_unique(const std::vector<std::string> &names, const char *what) {
    std::unordered_set<std::string> seen;
    for (const auto &name : names) {
        if (!seen.insert(name).second) {
            throw invalid_argument_error(std::string("duplicate ") + what + " name '" + name + "'");
        }
    }
}

}  // namespace

MultiLabelDataset::MultiLabelDataset(Matrix features, LabelMatrix labels, std::vector<std::string> feature_names,
                                     std::vector<std::string> label_names)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      feature_names_(std::move(feature_names)),
      label_names_(std::move(label_names)),
      input_attributes_(features_.cols()) {
    if (features_.rows() == 0 || features_.cols() == 0 || labels_.cols() == 0) {
        throw invalid_argument_error("dataset needs n >= 1, d >= 1 and q >= 1");
    }
    if (features_.rows() != labels_.rows()) {
        throw invalid_argument_error("feature and label row counts differ (" + std::to_string(features_.rows()) + " vs " +
                                     std::to_string(labels_.rows()) + ")");
    }
    if (feature_names_.size() != features_.cols() || label_names_.size() != labels_.cols()) {
        throw invalid_argument_error("name lists do not match matrix widths");
    }
    for (std::size_t r = 0; r < labels_.rows(); ++r) {
        for (const auto v : labels_.row(r)) {
            if (v > 1) {
                throw invalid_argument_error("label matrix holds a value other than 0/1 in row " + std::to_string(r));
            }
        }
    }
    require_unique(feature_names_, "feature");
    require_unique(label_names_, "label");
}

MultiLabelDataset MultiLabelDataset::subset(std::span<const std::size_t> rows) const {
    Matrix x(rows.size(), num_features());
    LabelMatrix y(rows.size(), num_labels());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t src = rows[i];
        if (src >= num_instances()) {
            throw invalid_argument_error("subset row index " + std::to_string(src) + " out of range");
        }
        std::ranges::copy(features_.row(src), x.row(i).begin());
        for (std::size_t l = 0; l < num_labels(); ++l) {
            y.set(i, l, labels_(src, l));
        }
    }
    MultiLabelDataset out(std::move(x), std::move(y), feature_names_, label_names_);
    out.set_source_info(input_attributes_, has_nominal_);
    return out;
}

MultiLabelDataset MultiLabelDataset::select_labels(std::span<const std::size_t> label_columns) const {
    LabelMatrix y(num_instances(), label_columns.size());
    std::vector<std::string> names;
    names.reserve(label_columns.size());
    for (std::size_t j = 0; j < label_columns.size(); ++j) {
        const std::size_t src = label_columns[j];
        if (src >= num_labels()) {
            throw invalid_argument_error("label column " + std::to_string(src) + " out of range");
        }
        names.push_back(label_names_[src]);
        for (std::size_t r = 0; r < num_instances(); ++r) {
            y.set(r, j, labels_(r, src));
        }
    }
    MultiLabelDataset out(features_, std::move(y), feature_names_, std::move(names));
    out.set_source_info(input_attributes_, has_nominal_);
    return out;
}

MinMaxScaler MinMaxScaler::fit(const Matrix &x) {
    MinMaxScaler s;
    s.lo.assign(x.cols(), 0.0);
    s.hi.assign(x.cols(), 0.0);
    for (std::size_t c = 0; c < x.cols(); ++c) {
        double lo = x(0, c);
        double hi = x(0, c);
        for (std::size_t r = 1; r < x.rows(); ++r) {
            lo = std::min(lo, x(r, c));
            hi = std::max(hi, x(r, c));
        }
        s.lo[c] = lo;
        s.hi[c] = hi;
    }
    return s;
}

Matrix MinMaxScaler::transform(const Matrix &x) const {
    if (x.cols() != lo.size()) {
        throw invalid_argument_error("MinMaxScaler: column count mismatch");
    }
    Matrix out(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < x.cols(); ++c) {
            const double range = hi[c] - lo[c];
            out(r, c) = range > 0.0 ? (x(r, c) - lo[c]) / range : 0.0;
        }
    }
    return out;
}

MultiLabelDataset with_features(const MultiLabelDataset &ds, Matrix features) {
    MultiLabelDataset out(std::move(features), ds.labels(), ds.feature_names(), ds.label_names());
    out.set_source_info(ds.input_attributes(), ds.has_nominal_inputs());
    return out;
}

}  // namespace uclso
