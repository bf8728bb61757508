#pragma once

#include "uclso/dataset.hpp"
#include "uclso/folds.hpp"
#include "uclso/kmeans.hpp"
#include "uclso/linear_model.hpp"
#include "uclso/oversample.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace uclso {

/// One method of a comparison: how to oversample and how to train.
struct MethodConfig {
    std::string name;
    OversampleConfig oversample;
    TrainConfig train;
    KMeansOptions kmeans;
    /// Min-max scaling fitted on the training fold.
    bool scale_features = false;
};

struct CellMetrics {
    std::size_t rep = 0;
    std::size_t fold = 0;
    std::vector<double> f1;                   // per label
    std::vector<std::optional<double>> auc;   // per label; nullopt when the test fold is single-class
    std::vector<bool> constant_model;         // label was single-class in training
    std::vector<std::size_t> synthetic;       // synthetic points per label
    std::vector<std::size_t> train_positives; // per label
    std::vector<std::size_t> test_positives;  // per label
    double macro_f1 = 0.0;
    std::optional<double> macro_auc;
};

struct MeanDev {
    double mean = 0.0;
    double deviation = 0.0;  // sample standard deviation
};

struct MetricReport {
    std::string method;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<std::string> label_names;
    std::vector<CellMetrics> cells;  // rep-major, fold-minor
    MeanDev macro_f1;                // over all rep x fold cells
    MeanDev macro_auc;
    MeanDev macro_f1_by_rep;         // fold means first, then across repetitions
    MeanDev macro_auc_by_rep;
    std::size_t auc_undefined = 0;   // (cell, label) pairs excluded from macro-AUC
    std::size_t constant_models = 0; // (cell, label) pairs with a single-class training set
};

struct CvOptions {
    std::size_t threads = 1;
    /// Recorded in every report.
    std::string config_hash;
    std::uint64_t seed = 0;
};

/// Fitted models of one method on one training subset, with what went into them.
struct CellModels {
    std::vector<LinearModel> models;
    std::vector<std::size_t> synthetic;
    std::optional<MinMaxScaler> scaler;
};

/// Seeds of one (method, rep, fold) cell. Derived from the method's own seeds only,
/// so reordering methods does not change any result.
[[nodiscard]] MethodConfig cell_method(const MethodConfig &method, std::size_t rep, std::size_t fold);

/// Cluster, augment, and fit on `train` alone.
[[nodiscard]] CellModels fit_cell(const MultiLabelDataset &train, const MethodConfig &method);

/// Repeated cross-validation of every method. Clustering, synthesis, and training only
/// see the training fold. Cells run on up to `opts.threads` threads; results do not
/// depend on the thread count.
[[nodiscard]] std::vector<MetricReport> run_cv(const MultiLabelDataset &ds, std::span<const MethodConfig> methods,
                                               const FoldPlan &plan, const CvOptions &opts = {});

/// One row per (rep, fold, label, metric).
void write_report_csv(std::ostream &out, const MetricReport &report);
/// Structured summary with means and deviations for both groupings.
void write_report_summary(std::ostream &out, const MetricReport &report);
/// Per-fold positive counts per label (train and test) so degenerate folds are visible.
void write_fold_positives_csv(std::ostream &out, const MetricReport &report);

}  // namespace uclso
