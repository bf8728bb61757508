#pragma once

#include "uclso/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace uclso {

/// Repeated k-fold partition of row indices. Every repetition is an independent
/// shuffle; fold sizes differ by at most one; indices inside a fold are ascending.
struct FoldPlan {
    std::size_t repetitions = 0;
    std::size_t folds_per_rep = 0;
    std::size_t num_rows = 0;
    std::uint64_t seed = 0;
    /// assignments[rep][fold] = sorted test-row indices of that fold.
    std::vector<std::vector<std::vector<std::size_t>>> assignments;

    [[nodiscard]] const std::vector<std::size_t> &test_rows(std::size_t rep, std::size_t fold) const {
        return assignments.at(rep).at(fold);
    }
    /// Complement of test_rows, ascending.
    [[nodiscard]] std::vector<std::size_t> train_rows(std::size_t rep, std::size_t fold) const;
};

/// @throws invalid_argument_error when folds < 2, reps < 1, or n < folds.
[[nodiscard]] FoldPlan make_fold_plan(std::size_t n, std::size_t reps, std::size_t folds, std::uint64_t seed);

/// Positives per label among the given rows.
[[nodiscard]] std::vector<std::size_t> label_positives(const MultiLabelDataset &ds, const std::vector<std::size_t> &rows);

}  // namespace uclso
