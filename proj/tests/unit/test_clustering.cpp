#include "support.hpp"

#include "uclso/error.hpp"
#include "uclso/kmeans.hpp"
#include "uclso/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

using namespace uclso;

namespace {

Matrix gaussian_blobs(std::uint64_t seed, const std::vector<std::array<double, 2>> &centers, std::size_t per_blob,
                      double spread) {
    Rng rng(seed);
    Matrix x(centers.size() * per_blob, 2);
    std::size_t row = 0;
    for (const auto &c : centers) {
        for (std::size_t i = 0; i < per_blob; ++i, ++row) {
            x(row, 0) = c[0] + spread * rng.normal();
            x(row, 1) = c[1] + spread * rng.normal();
        }
    }
    return x;
}

Matrix uniform_points(std::uint64_t seed, std::size_t n, std::size_t d) {
    Rng rng(seed);
    Matrix x(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < d; ++c) x(i, c) = rng.uniform() * 10.0;
    return x;
}

/// True when the two labelings induce the same partition.
bool same_partition(const std::vector<std::size_t> &a, const std::vector<std::size_t> &b) {
    if (a.size() != b.size()) return false;
    std::map<std::size_t, std::size_t> fwd, back;
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto [f, fi] = fwd.emplace(a[i], b[i]);
        auto [g, gi] = back.emplace(b[i], a[i]);
        if (f->second != b[i] || g->second != a[i]) return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("clustering") {

TEST_CASE("k = 1 puts the centroid at the column means") {
    const auto x = uniform_points(5, 40, 3);
    const auto a = kmeans(x, 1, 11);
    for (std::size_t c = 0; c < 3; ++c) {
        double mean = 0.0;
        for (std::size_t i = 0; i < x.rows(); ++i) mean += x(i, c);
        mean /= static_cast<double>(x.rows());
        CHECK(a.centroids(0, c) == doctest::Approx(mean).epsilon(1e-12));
    }
    CHECK(std::all_of(a.assignment.begin(), a.assignment.end(), [](auto v) { return v == 0; }));
}

TEST_CASE("k = n with distinct points gives singleton clusters and zero inertia") {
    const auto x = uniform_points(6, 12, 2);
    const auto a = kmeans(x, 12, 3);
    CHECK(a.inertia == 0.0);
    auto sorted = a.assignment;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == i);
}

TEST_CASE("two well separated blobs are recovered exactly") {
    const auto x = gaussian_blobs(17, {{0.0, 0.0}, {10.0, 10.0}}, 50, 0.5);
    const auto a = kmeans(x, 2, 1);
    std::vector<std::size_t> truth(100);
    for (std::size_t i = 50; i < 100; ++i) truth[i] = 1;
    CHECK(same_partition(a.assignment, truth));
}

TEST_CASE("cluster_members filters by id") {
    ClusterAssignment a;
    a.k = 2;
    a.assignment = {0, 1, 0};
    CHECK(cluster_members(a, 0) == std::vector<std::size_t>{0, 2});
    CHECK(cluster_members(a, 1) == std::vector<std::size_t>{1});
    CHECK_THROWS_AS((void)cluster_members(a, 5), invalid_argument_error);
}

TEST_CASE("cluster_members over all ids partitions the rows") {
    const auto x = uniform_points(9, 80, 2);
    const auto a = kmeans(x, 5, 4);
    std::vector<std::size_t> all;
    for (std::size_t p = 0; p < a.k; ++p) {
        const auto m = cluster_members(a, p);
        CHECK_FALSE(m.empty());
        all.insert(all.end(), m.begin(), m.end());
    }
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expected(80);
    std::iota(expected.begin(), expected.end(), 0);
    CHECK(all == expected);
}

TEST_CASE("inertia is non-increasing and matches a recomputation") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto x = uniform_points(seed, 120, 3);
        KMeansOptions opts;
        opts.check_monotone = true;
        const auto a = kmeans(x, 6, seed, opts);
        for (std::size_t i = 1; i < a.inertia_history.size(); ++i) {
            CHECK(a.inertia_history[i] <= a.inertia_history[i - 1] * (1.0 + 1e-12));
        }
        const double again = compute_inertia(x, a);
        CHECK(std::abs(again - a.inertia) <= 1e-9 * std::max(1.0, again));
        // every point sits with its nearest centroid
        for (std::size_t i = 0; i < x.rows(); ++i) CHECK(nearest_centroid(a.centroids, x.row(i)) == a.assignment[i]);
    }
}

TEST_CASE("nearest centroid breaks ties toward the lowest id") {
    Matrix c(3, 1);
    c(0, 0) = -1.0;
    c(1, 0) = 1.0;
    c(2, 0) = 1.0;
    const double origin[] = {0.0};
    CHECK(nearest_centroid(c, origin) == 0);
    const double right[] = {1.0};
    CHECK(nearest_centroid(c, right) == 1);
}

TEST_CASE("permuting rows leaves the partition unchanged on separated data") {
    const auto x = gaussian_blobs(21, {{0.0, 0.0}, {8.0, 0.0}, {0.0, 8.0}, {8.0, 8.0}}, 25, 0.6);
    const auto base = kmeans(x, 4, 5);
    for (std::uint64_t s = 1; s <= 10; ++s) {
        std::vector<std::size_t> perm(x.rows());
        std::iota(perm.begin(), perm.end(), 0);
        Rng rng(s);
        rng.shuffle(std::span<std::size_t>(perm));
        Matrix px;
        for (auto i : perm) px.append_row(x.row(i));
        const auto a = kmeans(px, 4, 5);
        std::vector<std::size_t> unpermuted(x.rows());
        for (std::size_t i = 0; i < perm.size(); ++i) unpermuted[perm[i]] = a.assignment[i];
        CHECK(same_partition(unpermuted, base.assignment));
    }
}

TEST_CASE("seeded runs are reproducible") {
    const auto x = uniform_points(33, 90, 2);
    const auto a = kmeans(x, 5, 77);
    const auto b = kmeans(x, 5, 77);
    CHECK(a.assignment == b.assignment);
    CHECK(a.centroids == b.centroids);
    CHECK(a.inertia_history == b.inertia_history);
}

TEST_CASE("every cluster stays non-empty even with duplicates present") {
    Matrix x;
    for (int i = 0; i < 20; ++i) x.append_row(std::vector<double>{0.0, 0.0});
    x.append_row(std::vector<double>{1.0, 0.0});
    x.append_row(std::vector<double>{2.0, 0.0});
    x.append_row(std::vector<double>{50.0, 0.0});
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto a = kmeans(x, 4, seed);
        for (std::size_t p = 0; p < 4; ++p) CHECK_FALSE(cluster_members(a, p).empty());
    }
}

TEST_CASE("invalid clustering requests") {
    const auto x = uniform_points(1, 5, 2);
    CHECK_THROWS_AS((void)kmeans(x, 0, 1), invalid_argument_error);
    CHECK_THROWS_AS((void)kmeans(x, 6, 1), invalid_argument_error);
    Matrix same(4, 2, 1.0);
    CHECK_THROWS_AS((void)kmeans(same, 2, 1), invalid_argument_error);
    auto bad = x;
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS((void)kmeans(bad, 2, 1), invalid_argument_error);
}

TEST_CASE("CSV dumps list every row and centroid") {
    const auto x = uniform_points(2, 6, 2);
    const auto a = kmeans(x, 2, 1);
    std::ostringstream rows, cents;
    write_assignment_csv(rows, a);
    write_centroids_csv(cents, a);
    const std::string r = rows.str(), c = cents.str();
    CHECK(std::count(r.begin(), r.end(), '\n') == 7);
    CHECK(std::count(c.begin(), c.end(), '\n') == 3);
}

}  // TEST_SUITE
