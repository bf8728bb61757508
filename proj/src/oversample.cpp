#include "uclso/oversample.hpp"

#include "uclso/error.hpp"
#include "uclso/random.hpp"

#include <algorithm>
#include <optional>
#include <ostream>

namespace uclso {

std::string_view to_string(OversampleMode mode) noexcept {
    switch (mode) {
        case OversampleMode::none: return "none";
        case OversampleMode::smote: return "smote";
        case OversampleMode::uclso: return "uclso";
    }
    return "none";
}

OversampleMode parse_oversample_mode(std::string_view text) {
    if (text == "none") return OversampleMode::none;
    if (text == "smote") return OversampleMode::smote;
    if (text == "uclso") return OversampleMode::uclso;
    throw invalid_argument_error("unknown oversampling mode '" + std::string(text) + "' (expected none, smote or uclso)");
}

std::string_view to_string(MinorityPolicy policy) noexcept {
    return policy == MinorityPolicy::rarer ? "rarer" : "relevant";
}

MinorityPolicy parse_minority_policy(std::string_view text) {
    if (text == "relevant") return MinorityPolicy::relevant;
    if (text == "rarer") return MinorityPolicy::rarer;
    throw invalid_argument_error("unknown minority policy '" + std::string(text) + "' (expected relevant or rarer)");
}

void OversampleConfig::validate() const {
    if (k_clusters < 1) throw invalid_argument_error("k_clusters must be at least 1");
    if (m_neighbors < 1) throw invalid_argument_error("m_neighbors must be at least 1");
}

ClassSplit minority_class(const MultiLabelDataset &ds, std::size_t label, MinorityPolicy policy) {
    if (label >= ds.num_labels()) throw invalid_argument_error("label index " + std::to_string(label) + " out of range");
    ClassSplit split;
    const auto &y = ds.labels();
    if (policy == MinorityPolicy::rarer && 2 * y.positives(label) > ds.num_instances()) split.minority_value = 0;
    for (std::size_t r = 0; r < ds.num_instances(); ++r) {
        (y(r, label) == split.minority_value ? split.minority : split.majority).push_back(r);
    }
    if (split.minority.empty()) {
        throw label_error("label '" + ds.label_names()[label] + "' has no minority points");
    }
    return split;
}

std::size_t quota(std::size_t n_lp, std::size_t n_min, std::size_t n_maj) {
    if (n_min == 0) throw invalid_argument_error("quota: the label has no minority points");
    if (n_lp > n_min) throw invalid_argument_error("quota: cluster share exceeds the minority count");
    if (n_maj <= n_min) return 0;
    const std::size_t numerator = n_lp * (n_maj - n_min);
    return (numerator + n_min - 1) / n_min;
}

std::vector<double> interpolate(std::span<const double> u, std::span<const double> v, double r) {
    if (u.size() != v.size()) throw invalid_argument_error("interpolate: dimension mismatch");
    if (!(r >= 0.0 && r <= 1.0)) throw invalid_argument_error("interpolate: r must lie in [0,1]");
    std::vector<double> s(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) s[i] = u[i] + (v[i] - u[i]) * r;
    return s;
}

Matrix AugmentedDataset::training_features() const {
    const Matrix &x = base->features();
    Matrix out(x.rows() + extra.size(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) std::ranges::copy(x.row(r), out.row(r).begin());
    for (std::size_t s = 0; s < extra.size(); ++s) std::ranges::copy(extra.points.row(s), out.row(x.rows() + s).begin());
    return out;
}

std::vector<std::uint8_t> AugmentedDataset::training_targets() const {
    std::vector<std::uint8_t> y = base->labels().column(label_index);
    y.insert(y.end(), extra.size(), synthetic_value);
    return y;
}

namespace {

/// Draws synthetic points from one pool of minority rows (a cluster's, or the whole label's).
class PoolSampler {
  public:
    PoolSampler(const Matrix &x, std::vector<std::size_t> pool, std::size_t m) : x_(x), pool_(std::move(pool)), m_(m) {
        neighbours_.resize(pool_.size());
    }

    void generate(std::size_t count, int cluster, Rng &rng, SyntheticSet &out) {
        for (std::size_t j = 0; j < count; ++j) {
            const std::size_t ui = rng.index(pool_.size());
            const std::size_t u = pool_[ui];
            if (pool_.size() == 1) {
                out.points.append_row(x_.row(u));
                out.provenance.push_back({cluster, u, u, 0.0});
                continue;
            }
            const auto &nn = neighbours(ui);
            const std::size_t v = pool_[nn[rng.index(nn.size())]];
            const double r = rng.uniform_open();
            out.points.append_row(interpolate(x_.row(u), x_.row(v), r));
            out.provenance.push_back({cluster, u, v, r});
        }
    }

  private:
    /// Positions (within the pool) of the m nearest other pool members; ties by position.
    const std::vector<std::size_t> &neighbours(std::size_t ui) {
        auto &slot = neighbours_[ui];
        if (slot) return *slot;
        std::vector<std::pair<double, std::size_t>> dist;
        dist.reserve(pool_.size() - 1);
        for (std::size_t j = 0; j < pool_.size(); ++j) {
            if (j != ui) dist.emplace_back(squared_distance(x_.row(pool_[ui]), x_.row(pool_[j])), j);
        }
        const std::size_t take = std::min(m_, dist.size());
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(take), dist.end());
        std::vector<std::size_t> nn(take);
        for (std::size_t t = 0; t < take; ++t) nn[t] = dist[t].second;
        slot = std::move(nn);
        return *slot;
    }

    const Matrix &x_;
    std::vector<std::size_t> pool_;
    std::size_t m_;
    std::vector<std::optional<std::vector<std::size_t>>> neighbours_;
};

AugmentedDataset start_augment(std::shared_ptr<const MultiLabelDataset> ds, std::size_t label, const ClassSplit &split) {
    AugmentedDataset aug;
    aug.label_index = label;
    aug.extra.label_index = label;
    aug.extra.points = Matrix(0, ds->num_features());
    aug.synthetic_value = split.minority_value;
    aug.n_min = split.minority.size();
    aug.n_maj = split.majority.size();
    aug.base = std::move(ds);
    return aug;
}

}  // namespace

AugmentedDataset identity_augment(std::shared_ptr<const MultiLabelDataset> ds, std::size_t label) {
    if (label >= ds->num_labels()) throw invalid_argument_error("label index " + std::to_string(label) + " out of range");
    AugmentedDataset aug;
    aug.label_index = label;
    aug.extra.label_index = label;
    aug.extra.points = Matrix(0, ds->num_features());
    aug.n_min = ds->labels().positives(label);
    aug.n_maj = ds->num_instances() - aug.n_min;
    aug.base = std::move(ds);
    return aug;
}

AugmentedDataset uclso_augment(std::shared_ptr<const MultiLabelDataset> ds, const ClusterAssignment &assign,
                               std::size_t label, const OversampleConfig &cfg) {
    cfg.validate();
    if (assign.assignment.size() != ds->num_instances()) {
        throw invalid_argument_error("clustering was computed on a different number of rows");
    }
    const ClassSplit split = minority_class(*ds, label, cfg.minority);
    AugmentedDataset aug = start_augment(ds, label, split);

    std::vector<std::vector<std::size_t>> per_cluster(assign.k);
    for (const auto r : split.minority) per_cluster.at(assign.assignment[r]).push_back(r);

    Rng rng(derive_seed(cfg.seed, {label}));
    for (std::size_t p = 0; p < assign.k; ++p) {
        const std::size_t n_lp = per_cluster[p].size();
        const std::size_t syn = n_lp == 0 ? 0 : quota(n_lp, aug.n_min, aug.n_maj);
        aug.quotas.push_back({p, n_lp, syn});
        if (syn == 0) continue;
        PoolSampler sampler(ds->features(), std::move(per_cluster[p]), cfg.m_neighbors);
        sampler.generate(syn, static_cast<int>(p), rng, aug.extra);
    }
    return aug;
}

AugmentedDataset smote_augment(std::shared_ptr<const MultiLabelDataset> ds, std::size_t label, const OversampleConfig &cfg) {
    cfg.validate();
    const ClassSplit split = minority_class(*ds, label, cfg.minority);
    AugmentedDataset aug = start_augment(ds, label, split);
    const std::size_t count = aug.n_maj > aug.n_min ? aug.n_maj - aug.n_min : 0;
    if (count == 0) return aug;
    Rng rng(derive_seed(cfg.seed, {label}));
    PoolSampler sampler(ds->features(), split.minority, cfg.m_neighbors);
    sampler.generate(count, -1, rng, aug.extra);
    return aug;
}

void write_synthetic_csv(std::ostream &out, const AugmentedDataset &aug) {
    const std::size_t d = aug.extra.points.cols();
    out << "label,cluster,r,parent_u,parent_v";
    for (std::size_t c = 0; c < d; ++c) out << ",feature_" << c;
    out << '\n';
    const auto precision = out.precision(17);
    for (std::size_t s = 0; s < aug.extra.size(); ++s) {
        const auto &prov = aug.extra.provenance[s];
        out << aug.label_index << ',' << prov.cluster << ',' << prov.r << ',' << prov.parent_u << ',' << prov.parent_v;
        for (const double v : aug.extra.points.row(s)) out << ',' << v;
        out << '\n';
    }
    out.precision(precision);
}

}  // namespace uclso
