#include "uclso/folds.hpp"

#include "uclso/error.hpp"
#include "uclso/random.hpp"

#include <algorithm>
#include <numeric>

namespace uclso {

std::vector<std::size_t> FoldPlan::train_rows(std::size_t rep, std::size_t fold) const {
    std::vector<bool> is_test(num_rows, false);
    for (const auto r : test_rows(rep, fold)) is_test[r] = true;
    std::vector<std::size_t> out;
    out.reserve(num_rows);
    for (std::size_t r = 0; r < num_rows; ++r) {
        if (!is_test[r]) out.push_back(r);
    }
    return out;
}

FoldPlan make_fold_plan(std::size_t n, std::size_t reps, std::size_t folds, std::uint64_t seed) {
    if (folds < 2) throw invalid_argument_error("fold plan needs at least 2 folds");
    if (reps < 1) throw invalid_argument_error("fold plan needs at least 1 repetition");
    if (n < folds) {
        throw invalid_argument_error("cannot split " + std::to_string(n) + " rows into " + std::to_string(folds) + " folds");
    }
    FoldPlan plan{reps, folds, n, seed, {}};
    plan.assignments.resize(reps);
    std::vector<std::size_t> order(n);
    for (std::size_t rep = 0; rep < reps; ++rep) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        Rng rng(derive_seed(seed, {rep}));
        rng.shuffle(std::span<std::size_t>(order));
        auto &rep_folds = plan.assignments[rep];
        rep_folds.resize(folds);
        std::size_t start = 0;
        for (std::size_t f = 0; f < folds; ++f) {
            const std::size_t size = n / folds + (f < n % folds ? 1 : 0);
            rep_folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(start),
                                order.begin() + static_cast<std::ptrdiff_t>(start + size));
            std::ranges::sort(rep_folds[f]);
            start += size;
        }
    }
    return plan;
}

std::vector<std::size_t> label_positives(const MultiLabelDataset &ds, const std::vector<std::size_t> &rows) {
    std::vector<std::size_t> counts(ds.num_labels(), 0);
    for (const auto r : rows) {
        const auto labels = ds.labels().row(r);
        for (std::size_t l = 0; l < labels.size(); ++l) counts[l] += labels[l];
    }
    return counts;
}

}  // namespace uclso
