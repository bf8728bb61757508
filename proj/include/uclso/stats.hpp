#pragma once

#include "uclso/dataset.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace uclso {

/// Dataset description in the column order used for dataset tables:
/// instances, inputs, labels, type, cardinality, density, distinct labelsets,
/// proportion of distinct labelsets, imbalance ratio min/max/avg.
struct DatasetStats {
    std::size_t instances = 0;
    std::size_t inputs = 0;
    std::size_t labels = 0;
    bool nominal = false;
    double cardinality = 0.0;
    double density = 0.0;
    std::size_t distinct_labelsets = 0;
    double proportion_distinct = 0.0;
    /// Aggregates over labels whose IR is defined; zero when no label qualifies.
    double ir_min = 0.0;
    double ir_max = 0.0;
    double ir_avg = 0.0;
    /// Per-label IR, majority count / minority count; NaN when one class is absent.
    std::vector<double> label_ir;
    /// Indices of labels with an undefined IR (all 0 or all 1).
    std::vector<std::size_t> undefined_ir_labels;
};

[[nodiscard]] DatasetStats compute_stats(const MultiLabelDataset &ds);

/// Imbalance ratio of one label column; +infinity when one class is absent.
[[nodiscard]] double imbalance_ratio(std::size_t positives, std::size_t total) noexcept;

struct DroppedLabel {
    std::string name;
    std::size_t index = 0;  // column in the input dataset
    std::size_t positives = 0;
    double ir = 0.0;
    std::string reason;
};

struct LabelFilterReport {
    std::vector<std::size_t> kept;  // columns of the input dataset
    std::vector<DroppedLabel> dropped;
};

struct LabelFilterResult {
    MultiLabelDataset dataset;
    LabelFilterReport report;
};

/// Drops labels with IR >= max_ir or fewer than min_pos positives. Features are untouched.
/// @throws label_error when every label would be dropped.
[[nodiscard]] LabelFilterResult filter_labels(const MultiLabelDataset &ds, double max_ir = 50.0, std::size_t min_pos = 20);

void write_stats_csv_header(std::ostream &out);
/// One CSV row; `stage` is `raw` or `filtered`.
void write_stats_csv_row(std::ostream &out, const std::string &dataset, const std::string &stage, const DatasetStats &s);

}  // namespace uclso
