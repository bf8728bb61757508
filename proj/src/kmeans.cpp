#include "uclso/kmeans.hpp"

#include "uclso/error.hpp"
#include "uclso/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace uclso {

std::size_t nearest_centroid(const Matrix &centroids, std::span<const double> point) noexcept {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
        const double dist = squared_distance(point, centroids.row(c));
        if (dist < best_dist) {
            best_dist = dist;
            best = c;
        }
    }
    return best;
}

namespace {

[[noreturn]] void too_few_distinct(std::size_t k) {
    throw invalid_argument_error("k-means: fewer than k=" + std::to_string(k) + " distinct points");
}

Matrix plus_plus_seeding(const Matrix &x, std::size_t k, Rng &rng) {
    const std::size_t n = x.rows();
    Matrix centroids(k, x.cols());
    std::size_t chosen = rng.index(n);
    std::ranges::copy(x.row(chosen), centroids.row(0).begin());
    std::vector<double> dist(n);
    for (std::size_t i = 0; i < n; ++i) dist[i] = squared_distance(x.row(i), centroids.row(0));

    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (const double v : dist) total += v;
        if (!(total > 0.0)) too_few_distinct(k);
        const double target = rng.uniform() * total;
        double cumulative = 0.0;
        chosen = n;
        std::size_t last_positive = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (dist[i] <= 0.0) continue;
            last_positive = i;
            cumulative += dist[i];
            if (cumulative > target) {
                chosen = i;
                break;
            }
        }
        if (chosen == n) chosen = last_positive;  // rounding at the top of the range
        std::ranges::copy(x.row(chosen), centroids.row(c).begin());
        for (std::size_t i = 0; i < n; ++i) {
            dist[i] = std::min(dist[i], squared_distance(x.row(i), centroids.row(c)));
        }
    }
    return centroids;
}

void assign_all(const Matrix &x, const Matrix &centroids, std::vector<std::size_t> &assignment) {
    for (std::size_t i = 0; i < x.rows(); ++i) assignment[i] = nearest_centroid(centroids, x.row(i));
}

/// Re-seeds empty clusters at the point farthest from its centroid, reassigning after each move.
void repair_empty(const Matrix &x, Matrix &centroids, std::vector<std::size_t> &assignment) {
    const std::size_t k = centroids.rows();
    for (std::size_t guard = 0; guard <= x.rows(); ++guard) {
        std::vector<std::size_t> counts(k, 0);
        for (const auto a : assignment) ++counts[a];
        const auto empty = std::ranges::find(counts, std::size_t{0});
        if (empty == counts.end()) return;

        std::size_t far = x.rows();
        double far_dist = 0.0;
        for (std::size_t i = 0; i < x.rows(); ++i) {
            if (counts[assignment[i]] < 2) continue;
            const double dist = squared_distance(x.row(i), centroids.row(assignment[i]));
            if (dist > far_dist) {
                far_dist = dist;
                far = i;
            }
        }
        if (far == x.rows()) too_few_distinct(k);
        const auto e = static_cast<std::size_t>(empty - counts.begin());
        std::ranges::copy(x.row(far), centroids.row(e).begin());
        assign_all(x, centroids, assignment);
    }
    too_few_distinct(k);
}

double inertia_of(const Matrix &x, const Matrix &centroids, const std::vector<std::size_t> &assignment) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) sum += squared_distance(x.row(i), centroids.row(assignment[i]));
    return sum;
}

Matrix centroid_means(const Matrix &x, const std::vector<std::size_t> &assignment, std::size_t k) {
    Matrix means(k, x.cols());
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        auto target = means.row(assignment[i]);
        const auto src = x.row(i);
        for (std::size_t c = 0; c < x.cols(); ++c) target[c] += src[c];
        ++counts[assignment[i]];
    }
    for (std::size_t p = 0; p < k; ++p) {
        for (auto &v : means.row(p)) v /= static_cast<double>(counts[p]);
    }
    return means;
}

void check_step(const KMeansOptions &opts, const std::vector<double> &history) {
    if (!opts.check_monotone || history.size() < 2) return;
    const double prev = history[history.size() - 2];
    const double cur = history.back();
    if (cur > prev + 1e-10 * std::max(1.0, std::abs(prev))) {
        throw error("k-means: inertia increased from " + std::to_string(prev) + " to " + std::to_string(cur));
    }
}

}  // namespace

ClusterAssignment kmeans(const Matrix &x, std::size_t k, std::uint64_t seed, const KMeansOptions &opts) {
    const std::size_t n = x.rows();
    if (k == 0) throw invalid_argument_error("k-means: k must be at least 1");
    if (k > n) throw invalid_argument_error("k-means: k=" + std::to_string(k) + " exceeds n=" + std::to_string(n));
    for (const double v : x.values()) {
        if (!std::isfinite(v)) throw invalid_argument_error("k-means: input contains non-finite values");
    }

    Rng rng(seed);
    ClusterAssignment out;
    out.k = k;
    out.centroids = plus_plus_seeding(x, k, rng);
    out.assignment.assign(n, 0);

    for (std::size_t iter = 0; iter < opts.max_iter; ++iter) {
        assign_all(x, out.centroids, out.assignment);
        repair_empty(x, out.centroids, out.assignment);
        out.inertia_history.push_back(inertia_of(x, out.centroids, out.assignment));
        check_step(opts, out.inertia_history);

        Matrix updated = centroid_means(x, out.assignment, k);
        double shift = 0.0;
        for (std::size_t p = 0; p < k; ++p) {
            shift = std::max(shift, std::sqrt(squared_distance(updated.row(p), out.centroids.row(p))));
        }
        out.centroids = std::move(updated);
        ++out.iterations_run;
        if (shift < opts.tol) break;
    }

    assign_all(x, out.centroids, out.assignment);
    repair_empty(x, out.centroids, out.assignment);
    out.inertia = inertia_of(x, out.centroids, out.assignment);
    out.inertia_history.push_back(out.inertia);
    check_step(opts, out.inertia_history);
    return out;
}

std::vector<std::size_t> cluster_members(const ClusterAssignment &assign, std::size_t p) {
    if (p >= assign.k) {
        throw invalid_argument_error("cluster id " + std::to_string(p) + " out of range for k=" + std::to_string(assign.k));
    }
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < assign.assignment.size(); ++i) {
        if (assign.assignment[i] == p) members.push_back(i);
    }
    return members;
}

double compute_inertia(const Matrix &x, const ClusterAssignment &assign) {
    return inertia_of(x, assign.centroids, assign.assignment);
}

void write_assignment_csv(std::ostream &out, const ClusterAssignment &assign) {
    out << "row,cluster\n";
    for (std::size_t i = 0; i < assign.assignment.size(); ++i) out << i << ',' << assign.assignment[i] << '\n';
}

void write_centroids_csv(std::ostream &out, const ClusterAssignment &assign) {
    out << "cluster";
    for (std::size_t c = 0; c < assign.centroids.cols(); ++c) out << ",feature_" << c;
    out << '\n';
    const auto precision = out.precision(17);
    for (std::size_t p = 0; p < assign.k; ++p) {
        out << p;
        for (const double v : assign.centroids.row(p)) out << ',' << v;
        out << '\n';
    }
    out.precision(precision);
}

}  // namespace uclso
