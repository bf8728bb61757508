#pragma once

#include "uclso/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace uclso {

struct KMeansOptions {
    std::size_t max_iter = 300;
    /// Stop once the largest centroid displacement (Euclidean) falls below this.
    double tol = 1e-6;
    /// Throw if inertia increases between consecutive Lloyd steps (beyond rounding).
    bool check_monotone = false;
};

struct ClusterAssignment {
    std::size_t k = 0;
    std::vector<std::size_t> assignment;
    Matrix centroids;
    double inertia = 0.0;
    std::size_t iterations_run = 0;
    /// Inertia after each assignment step, in order.
    std::vector<double> inertia_history;
};

/// Lloyd's algorithm from k-means++ seeding. Ties go to the lowest cluster id, and a
/// cluster left empty is re-seeded at the point farthest from its centroid, so the
/// result always has k non-empty clusters.
/// @throws invalid_argument_error when k == 0, k > n, input is non-finite, or fewer
///         than k distinct points exist.
[[nodiscard]] ClusterAssignment kmeans(const Matrix &x, std::size_t k, std::uint64_t seed, const KMeansOptions &opts = {});

/// Ascending row indices assigned to cluster p.
[[nodiscard]] std::vector<std::size_t> cluster_members(const ClusterAssignment &assign, std::size_t p);

/// Index of the nearest centroid, lowest id on ties.
[[nodiscard]] std::size_t nearest_centroid(const Matrix &centroids, std::span<const double> point) noexcept;

/// Recomputes the sum of squared distances of every row to its assigned centroid.
[[nodiscard]] double compute_inertia(const Matrix &x, const ClusterAssignment &assign);

void write_assignment_csv(std::ostream &out, const ClusterAssignment &assign);
void write_centroids_csv(std::ostream &out, const ClusterAssignment &assign);

}  // namespace uclso
