#include "uclso/ranking.hpp"

#include "uclso/error.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace uclso {

std::vector<double> midranks(std::span<const double> row, bool higher_is_better) {
    const std::size_t m = row.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) {
        return higher_is_better ? row[a] > row[b] : row[a] < row[b];
    });
    std::vector<double> ranks(m);
    for (std::size_t i = 0; i < m;) {
        std::size_t j = i;
        while (j < m && row[order[j]] == row[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t t = i; t < j; ++t) ranks[order[t]] = rank;
        i = j;
    }
    return ranks;
}

RankTable average_ranks(const Matrix &scores, bool higher_is_better, std::vector<std::string> datasets,
                        std::vector<std::string> methods) {
    const std::size_t n = scores.rows();
    const std::size_t m = scores.cols();
    if (n == 0 || m == 0) throw invalid_argument_error("average_ranks: empty score table");
    for (const double v : scores.values()) {
        if (!std::isfinite(v)) throw invalid_argument_error("average_ranks: non-finite score");
    }
    if (datasets.empty()) {
        for (std::size_t i = 0; i < n; ++i) datasets.push_back("dataset" + std::to_string(i + 1));
    }
    if (methods.empty()) {
        for (std::size_t j = 0; j < m; ++j) methods.push_back("method" + std::to_string(j + 1));
    }
    if (datasets.size() != n || methods.size() != m) throw invalid_argument_error("average_ranks: name list size mismatch");

    RankTable table{std::move(datasets), std::move(methods), scores, Matrix(n, m), std::vector<double>(m, 0.0)};
    for (std::size_t i = 0; i < n; ++i) {
        const auto ranks = midranks(scores.row(i), higher_is_better);
        std::ranges::copy(ranks, table.ranks.row(i).begin());
        for (std::size_t j = 0; j < m; ++j) table.average_ranks[j] += ranks[j];
    }
    for (auto &r : table.average_ranks) r /= static_cast<double>(n);
    return table;
}

std::vector<double> finner_adjust(std::span<const double> p_values) {
    const std::size_t m = p_values.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
    std::vector<double> adjusted(m);
    double running = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double p = p_values[order[i]];
        const double step = 1.0 - std::pow(1.0 - p, static_cast<double>(m) / static_cast<double>(i + 1));
        running = std::max(running, step);
        adjusted[order[i]] = std::min(1.0, std::max(running, p));
    }
    return adjusted;
}

FriedmanResult friedman(const RankTable &table, double alpha) {
    const std::size_t n = table.ranks.rows();
    const std::size_t k = table.ranks.cols();
    if (k < 2 || n < 2) throw invalid_argument_error("friedman: needs at least 2 methods and 2 datasets");
    if (!(alpha > 0.0 && alpha < 1.0)) throw invalid_argument_error("friedman: alpha must lie in (0,1)");

    FriedmanResult result;
    result.alpha = alpha;
    result.dof = k - 1;
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);

    // chi^2 = (12 sum R_j^2 - 3 N^2 k (k+1)^2) / (N k (k+1) - sum(t^3 - t) / (k-1)), R_j = rank sums
    double rank_sum_sq = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        const double rj = table.average_ranks[j] * nd;
        rank_sum_sq += rj * rj;
    }
    double ties = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(table.ranks.row(i).begin(), table.ranks.row(i).end());
        std::ranges::sort(row);
        for (std::size_t a = 0; a < k;) {
            std::size_t b = a;
            while (b < k && row[b] == row[a]) ++b;
            const double t = static_cast<double>(b - a);
            ties += t * t * t - t;
            a = b;
        }
    }
    const double numerator = 12.0 * rank_sum_sq - 3.0 * nd * nd * kd * (kd + 1.0) * (kd + 1.0);
    const double denominator = nd * kd * (kd + 1.0) - ties / (kd - 1.0);
    if (denominator <= 1e-12 * nd * kd * (kd + 1.0)) {
        result.chi_square = 0.0;
        result.p_value = 1.0;
    } else {
        result.chi_square = std::max(0.0, numerator / denominator);
        const boost::math::chi_squared_distribution<double> dist(static_cast<double>(result.dof));
        result.p_value = boost::math::cdf(boost::math::complement(dist, result.chi_square));
    }

    const auto best = std::ranges::min_element(table.average_ranks);
    result.control = static_cast<std::size_t>(best - table.average_ranks.begin());
    result.control_name = table.methods[result.control];

    const double se = std::sqrt(kd * (kd + 1.0) / (6.0 * nd));
    const boost::math::normal_distribution<double> normal;
    std::vector<double> raw;
    for (std::size_t j = 0; j < k; ++j) {
        if (j == result.control) continue;
        PairwiseComparison c;
        c.method = table.methods[j];
        c.method_index = j;
        c.average_rank = table.average_ranks[j];
        c.z = (table.average_ranks[j] - table.average_ranks[result.control]) / se;
        c.p_raw = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(normal, std::abs(c.z))));
        raw.push_back(c.p_raw);
        result.comparisons.push_back(std::move(c));
    }
    const auto adjusted = finner_adjust(raw);
    for (std::size_t i = 0; i < result.comparisons.size(); ++i) {
        result.comparisons[i].p_adjusted = adjusted[i];
        result.comparisons[i].significant = adjusted[i] < alpha;
    }
    std::ranges::stable_sort(result.comparisons, [](const auto &a, const auto &b) { return a.p_raw < b.p_raw; });
    return result;
}

void write_rank_table_csv(std::ostream &out, const RankTable &table) {
    const auto precision = out.precision(17);
    out << "dataset";
    for (const auto &m : table.methods) out << ',' << m << "_score," << m << "_rank";
    out << '\n';
    for (std::size_t i = 0; i < table.datasets.size(); ++i) {
        out << table.datasets[i];
        for (std::size_t j = 0; j < table.methods.size(); ++j) out << ',' << table.scores(i, j) << ',' << table.ranks(i, j);
        out << '\n';
    }
    out << "average_rank";
    for (const double r : table.average_ranks) out << ",," << r;
    out << '\n';
    out.precision(precision);
}

void write_critical_difference_csv(std::ostream &out, const RankTable &table, const FriedmanResult &result) {
    const auto precision = out.precision(17);
    out << "method,avg_rank,group\n";
    for (std::size_t j = 0; j < table.methods.size(); ++j) {
        int group = 0;
        for (const auto &c : result.comparisons) {
            if (c.method_index == j && c.significant) group = 1;
        }
        out << table.methods[j] << ',' << table.average_ranks[j] << ',' << group << '\n';
    }
    out.precision(precision);
}

void write_friedman_json(std::ostream &out, const FriedmanResult &result, const std::string &config_hash,
                         std::uint64_t seed) {
    nlohmann::ordered_json doc;
    if (!config_hash.empty()) {
        doc["config_hash"] = config_hash;
        doc["seed"] = seed;
    }
    doc["chi_square"] = result.chi_square;
    doc["dof"] = result.dof;
    doc["p_value"] = result.p_value;
    doc["alpha"] = result.alpha;
    doc["control"] = result.control_name;
    doc["comparisons"] = nlohmann::ordered_json::array();
    for (const auto &c : result.comparisons) {
        doc["comparisons"].push_back({{"method", c.method},
                                      {"average_rank", c.average_rank},
                                      {"z", c.z},
                                      {"p_raw", c.p_raw},
                                      {"p_finner", c.p_adjusted},
                                      {"significant", c.significant}});
    }
    out << doc.dump(2) << '\n';
}

}  // namespace uclso
