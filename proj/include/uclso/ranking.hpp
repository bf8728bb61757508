#pragma once

#include "uclso/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <iosfwd>
#include <string>
#include <vector>

namespace uclso {

/// Scores and within-row ranks (1 = best, ties share the average rank) of M methods over N datasets.
struct RankTable {
    std::vector<std::string> datasets;
    std::vector<std::string> methods;
    Matrix scores;
    Matrix ranks;
    std::vector<double> average_ranks;
};

/// @throws invalid_argument_error on non-finite scores or mismatched name lists.
[[nodiscard]] RankTable average_ranks(const Matrix &scores, bool higher_is_better, std::vector<std::string> datasets = {},
                                      std::vector<std::string> methods = {});

/// Midranks of one row (1 = largest when higher_is_better).
[[nodiscard]] std::vector<double> midranks(std::span<const double> row, bool higher_is_better);

struct PairwiseComparison {
    std::string method;
    std::size_t method_index = 0;
    double average_rank = 0.0;
    double z = 0.0;
    double p_raw = 1.0;
    double p_adjusted = 1.0;
    bool significant = false;
};

struct FriedmanResult {
    double chi_square = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
    double alpha = 0.05;
    std::size_t control = 0;
    std::string control_name;
    /// Comparisons against the control, ordered by ascending raw p-value.
    std::vector<PairwiseComparison> comparisons;
};

/// Friedman chi-square with tie correction, then z-tests of every method against the
/// best-ranked one with Finner step-down adjustment.
/// @throws invalid_argument_error with fewer than 2 methods or 2 datasets.
[[nodiscard]] FriedmanResult friedman(const RankTable &table, double alpha = 0.05);

/// Finner adjustment of p-values given in any order; output aligned with the input.
[[nodiscard]] std::vector<double> finner_adjust(std::span<const double> p_values);

/// Header `dataset,<method>...`, one row per dataset with `score (rank)` cells split into
/// score and rank columns, and a final `average_rank` row.
void write_rank_table_csv(std::ostream &out, const RankTable &table);
/// CSV (method, avg_rank, group): group 0 holds the control and every method not
/// significantly different from it; significant methods get group 1.
void write_critical_difference_csv(std::ostream &out, const RankTable &table, const FriedmanResult &result);
/// Includes `config_hash` and `seed` fields when a hash is given.
void write_friedman_json(std::ostream &out, const FriedmanResult &result, const std::string &config_hash = {},
                         std::uint64_t seed = 0);

}  // namespace uclso
