#pragma once

#include "uclso/matrix.hpp"
#include "uclso/oversample.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace uclso {

/// Hyperparameters of the hinge-loss SGD trainer.
///
/// The objective is  lambda/2 ||w||^2 + (1/n) sum_i max(0, 1 - y_i (w.x_i + b))  with
/// lambda = 1 / (reg_c * n). The step at update t is
/// learning_rate / (1 + decay * learning_rate * lambda * t), so decay = 1 gives the
/// 1/(lambda t) regime asymptotically and decay = 0 a constant rate.
struct TrainConfig {
    double reg_c = 1.0;
    std::size_t epochs = 100;
    double learning_rate = 0.1;
    double decay = 1.0;
    /// Early stop when the relative objective change between epochs drops below this (0 disables).
    double tolerance = 1e-6;
    std::uint64_t seed = 1;
    /// Decision threshold used by predict().
    double threshold = 0.0;

    void validate() const;
};

struct TrainMeta {
    double reg_c = 0.0;
    std::size_t epochs_run = 0;
    double objective = 0.0;
    /// Full-data objective after each epoch.
    std::vector<double> objective_history;
    /// Set when the training targets had a single class and the model is a constant scorer.
    bool constant = false;
};

struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;
    TrainMeta meta;

    [[nodiscard]] std::size_t dimension() const noexcept { return weights.size(); }
    [[nodiscard]] double score_one(std::span<const double> x) const noexcept { return dot(weights, x) + bias; }
};

/// @throws invalid_argument_error on size mismatch or non-finite features.
/// @throws label_error when y holds a single class.
[[nodiscard]] LinearModel train_linear(const Matrix &x, std::span<const std::uint8_t> y, const TrainConfig &cfg);

/// Model that scores every point +1 (all-positive targets) or -1 (all-negative targets).
[[nodiscard]] LinearModel constant_model(std::size_t dimension, bool positive);

/// L2-regularized hinge objective of (w, b) on (x, y).
[[nodiscard]] double hinge_objective(const LinearModel &model, const Matrix &x, std::span<const std::uint8_t> y,
                                     double lambda);

/// @throws invalid_argument_error on a dimension mismatch.
[[nodiscard]] std::vector<double> score(const LinearModel &model, const Matrix &x);
/// 1 where score > threshold, else 0.
[[nodiscard]] std::vector<std::uint8_t> predict(const LinearModel &model, const Matrix &x, double threshold = 0.0);
[[nodiscard]] std::vector<std::uint8_t> threshold_scores(std::span<const double> scores, double threshold);

/// Binary relevance over augmented training sets: model l is fit on augments[l] with the
/// seed derived from (cfg.seed, l).
/// @param allow_single_class when true, a single-class label yields a constant model
///        (flagged in meta) instead of an error.
/// @throws label_error naming the label when a label is single-class and not allowed.
[[nodiscard]] std::vector<LinearModel> br_fit(const MultiLabelDataset &ds, std::span<const AugmentedDataset> augments,
                                              const TrainConfig &cfg, bool allow_single_class = false);

/// Text format: `linear_model d=<d> reg_c=<c> epochs=<n> objective=<v> constant=<0|1>`,
/// then the bias, then d weights, one per line, shortest round-trip decimal form.
void write_model(std::ostream &out, const LinearModel &model);
[[nodiscard]] LinearModel read_model(std::istream &in);

}  // namespace uclso
