#include "uclso/metrics.hpp"

#include "uclso/error.hpp"

#include <algorithm>
#include <numeric>

namespace uclso {

ConfusionCounts confusion(std::span<const std::uint8_t> predicted, std::span<const std::uint8_t> truth) {
    if (predicted.size() != truth.size()) throw invalid_argument_error("confusion: length mismatch");
    ConfusionCounts c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i]) {
            (predicted[i] ? c.tp : c.fn) += 1;
        } else {
            (predicted[i] ? c.fp : c.tn) += 1;
        }
    }
    return c;
}

double f1_label(const ConfusionCounts &c) noexcept {
    const std::size_t denominator = 2 * c.tp + c.fp + c.fn;
    if (denominator == 0) return 0.0;
    return static_cast<double>(2 * c.tp) / static_cast<double>(denominator);
}

std::optional<double> auc_label(std::span<const double> scores, std::span<const std::uint8_t> truth) {
    if (scores.size() != truth.size()) throw invalid_argument_error("auc_label: length mismatch");
    const std::size_t n = scores.size();
    const auto positives = static_cast<std::size_t>(std::count(truth.begin(), truth.end(), std::uint8_t{1}));
    const std::size_t negatives = n - positives;
    if (positives == 0 || negatives == 0) return std::nullopt;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::ranges::sort(order, [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // sum of positive midranks, ranks starting at 1
    double positive_rank_sum = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t t = i; t < j; ++t) {
            if (truth[order[t]]) positive_rank_sum += midrank;
        }
        i = j;
    }
    const double p = static_cast<double>(positives);
    const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
    return u / (p * static_cast<double>(negatives));
}

double macro_average(std::span<const std::optional<double>> per_label) {
    double sum = 0.0;
    std::size_t defined = 0;
    for (const auto &v : per_label) {
        if (v) {
            sum += *v;
            ++defined;
        }
    }
    if (defined == 0) throw invalid_argument_error("macro_average: no label has a defined value");
    return sum / static_cast<double>(defined);
}

double macro_average(std::span<const double> per_label) {
    if (per_label.empty()) throw invalid_argument_error("macro_average: no label has a defined value");
    return std::accumulate(per_label.begin(), per_label.end(), 0.0) / static_cast<double>(per_label.size());
}

}  // namespace uclso
