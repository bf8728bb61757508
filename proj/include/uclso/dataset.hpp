#pragma once

#include "uclso/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace uclso {

/// Binary label matrix (n x q), entries 0 or 1.
class LabelMatrix {
  public:
    LabelMatrix() = default;
    LabelMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    [[nodiscard]] std::uint8_t operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, std::uint8_t v) noexcept { data_[r * cols_ + c] = v; }

    [[nodiscard]] std::span<const std::uint8_t> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
    [[nodiscard]] std::vector<std::uint8_t> column(std::size_t c) const;
    [[nodiscard]] std::size_t positives(std::size_t c) const noexcept;

    friend bool operator==(const LabelMatrix &, const LabelMatrix &) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Dense multi-label dataset. Immutable once constructed; the constructor validates every invariant.
class MultiLabelDataset {
  public:
    /// @throws invalid_argument_error when shapes, names, or label values are inconsistent.
    MultiLabelDataset(Matrix features, LabelMatrix labels, std::vector<std::string> feature_names,
                      std::vector<std::string> label_names);

    [[nodiscard]] std::size_t num_instances() const noexcept { return features_.rows(); }
    [[nodiscard]] std::size_t num_features() const noexcept { return features_.cols(); }
    [[nodiscard]] std::size_t num_labels() const noexcept { return labels_.cols(); }

    [[nodiscard]] const Matrix &features() const noexcept { return features_; }
    [[nodiscard]] const LabelMatrix &labels() const noexcept { return labels_; }
    [[nodiscard]] const std::vector<std::string> &feature_names() const noexcept { return feature_names_; }
    [[nodiscard]] const std::vector<std::string> &label_names() const noexcept { return label_names_; }

    /// Number of predictor attributes in the source file (before one-hot encoding). Defaults to d.
    [[nodiscard]] std::size_t input_attributes() const noexcept { return input_attributes_; }
    /// True when at least one source attribute was nominal.
    [[nodiscard]] bool has_nominal_inputs() const noexcept { return has_nominal_; }
    void set_source_info(std::size_t input_attributes, bool has_nominal) noexcept {
        input_attributes_ = input_attributes;
        has_nominal_ = has_nominal;
    }

    /// Rows selected by index, in the given order.
    [[nodiscard]] MultiLabelDataset subset(std::span<const std::size_t> rows) const;
    /// Same features, only the given label columns.
    [[nodiscard]] MultiLabelDataset select_labels(std::span<const std::size_t> label_columns) const;

  private:
    Matrix features_;
    LabelMatrix labels_;
    std::vector<std::string> feature_names_;
    std::vector<std::string> label_names_;
    std::size_t input_attributes_ = 0;
    bool has_nominal_ = false;
};

/// Per-column min-max scaling fitted on one matrix and applied to others.
struct MinMaxScaler {
    std::vector<double> lo;
    std::vector<double> hi;

    [[nodiscard]] static MinMaxScaler fit(const Matrix &x);
    /// Constant columns map to 0.
    [[nodiscard]] Matrix transform(const Matrix &x) const;
};

[[nodiscard]] MultiLabelDataset with_features(const MultiLabelDataset &ds, Matrix features);

}  // namespace uclso
