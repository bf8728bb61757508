#include "uclso/stats.hpp"

#include "uclso/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace uclso {

double imbalance_ratio(std::size_t positives, std::size_t total) noexcept {
    const std::size_t negatives = total - positives;
    const std::size_t lo = std::min(positives, negatives);
    const std::size_t hi = std::max(positives, negatives);
    if (lo == 0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(hi) / static_cast<double>(lo);
}

DatasetStats compute_stats(const MultiLabelDataset &ds) {
    DatasetStats s;
    const auto &y = ds.labels();
    s.instances = ds.num_instances();
    s.inputs = ds.input_attributes();
    s.labels = ds.num_labels();
    s.nominal = ds.has_nominal_inputs();

    std::size_t relevant = 0;
    std::set<std::vector<std::uint8_t>> labelsets;
    for (std::size_t r = 0; r < s.instances; ++r) {
        const auto row = y.row(r);
        relevant += static_cast<std::size_t>(std::count(row.begin(), row.end(), std::uint8_t{1}));
        labelsets.emplace(row.begin(), row.end());
    }
    s.cardinality = static_cast<double>(relevant) / static_cast<double>(s.instances);
    s.density = s.cardinality / static_cast<double>(s.labels);
    s.distinct_labelsets = labelsets.size();
    s.proportion_distinct = static_cast<double>(s.distinct_labelsets) / static_cast<double>(s.instances);

    double sum = 0.0;
    std::size_t defined = 0;
    s.ir_min = std::numeric_limits<double>::infinity();
    s.ir_max = 0.0;
    s.label_ir.resize(s.labels);
    for (std::size_t l = 0; l < s.labels; ++l) {
        const double ir = imbalance_ratio(y.positives(l), s.instances);
        if (std::isinf(ir)) {
            s.label_ir[l] = std::numeric_limits<double>::quiet_NaN();
            s.undefined_ir_labels.push_back(l);
            continue;
        }
        s.label_ir[l] = ir;
        s.ir_min = std::min(s.ir_min, ir);
        s.ir_max = std::max(s.ir_max, ir);
        sum += ir;
        ++defined;
    }
    if (defined == 0) {
        s.ir_min = 0.0;
    } else {
        s.ir_avg = sum / static_cast<double>(defined);
    }
    return s;
}

LabelFilterResult filter_labels(const MultiLabelDataset &ds, double max_ir, std::size_t min_pos) {
    LabelFilterReport report;
    const auto &y = ds.labels();
    for (std::size_t l = 0; l < ds.num_labels(); ++l) {
        const std::size_t pos = y.positives(l);
        const double ir = imbalance_ratio(pos, ds.num_instances());
        std::string reason;
        if (pos < min_pos) {
            reason = "positives " + std::to_string(pos) + " < " + std::to_string(min_pos);
        } else if (ir >= max_ir) {
            std::ostringstream msg;
            msg << "imbalance ratio " << ir << " >= " << max_ir;
            reason = msg.str();
        }
        if (reason.empty()) {
            report.kept.push_back(l);
        } else {
            report.dropped.push_back({ds.label_names()[l], l, pos, ir, std::move(reason)});
        }
    }
    if (report.kept.empty()) {
        throw label_error("every label was removed by the label filter (max_ir=" + std::to_string(max_ir) +
                          ", min_pos=" + std::to_string(min_pos) + ")");
    }
    return {ds.select_labels(report.kept), std::move(report)};
}

void write_stats_csv_header(std::ostream &out) {
    out << "dataset,instances,inputs,labels,type,cardinality,density,distinct_labelsets,proportion_distinct,"
           "ir_min,ir_max,ir_avg,stage\n";
}

void write_stats_csv_row(std::ostream &out, const std::string &dataset, const std::string &stage, const DatasetStats &s) {
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::fixed << std::setprecision(3);
    out << dataset << ',' << s.instances << ',' << s.inputs << ',' << s.labels << ',' << (s.nominal ? "nominal" : "numeric")
        << ',' << s.cardinality << ',' << s.density << ',' << s.distinct_labelsets << ',' << s.proportion_distinct << ','
        << s.ir_min << ',' << s.ir_max << ',' << s.ir_avg << ',' << stage << '\n';
    out.flags(flags);
    out.precision(precision);
}

}  // namespace uclso
