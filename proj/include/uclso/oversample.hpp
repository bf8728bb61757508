#pragma once

#include "uclso/dataset.hpp"
#include "uclso/kmeans.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace uclso {

enum class OversampleMode { none, smote, uclso };

/// Which class of a label is oversampled. `relevant` always treats y=1 as the minority;
/// `rarer` picks whichever class is less frequent (ties go to y=1).
enum class MinorityPolicy { relevant, rarer };

[[nodiscard]] std::string_view to_string(OversampleMode mode) noexcept;
[[nodiscard]] OversampleMode parse_oversample_mode(std::string_view text);
[[nodiscard]] std::string_view to_string(MinorityPolicy policy) noexcept;
[[nodiscard]] MinorityPolicy parse_minority_policy(std::string_view text);

struct OversampleConfig {
    std::size_t k_clusters = 5;
    std::size_t m_neighbors = 5;
    std::uint64_t seed = 1;
    OversampleMode mode = OversampleMode::uclso;
    MinorityPolicy minority = MinorityPolicy::relevant;

    void validate() const;
};

struct ClassSplit {
    std::vector<std::size_t> minority;
    std::vector<std::size_t> majority;
    /// Label value carried by the minority class (1 unless MinorityPolicy::rarer flipped it).
    std::uint8_t minority_value = 1;
};

/// Splits rows by the value of label l.
/// @throws label_error when the minority class is empty.
[[nodiscard]] ClassSplit minority_class(const MultiLabelDataset &ds, std::size_t label,
                                        MinorityPolicy policy = MinorityPolicy::relevant);

/// Synthetic points owed by a cluster holding n_lp of the label's n_min minority points:
/// ceil(n_lp * (n_maj - n_min) / n_min), or 0 when n_maj <= n_min. Exact integer arithmetic.
/// @throws invalid_argument_error when n_min == 0 or n_lp > n_min.
[[nodiscard]] std::size_t quota(std::size_t n_lp, std::size_t n_min, std::size_t n_maj);

/// u + (v - u) * r, componentwise.
/// @throws invalid_argument_error on a dimension mismatch or r outside [0,1].
[[nodiscard]] std::vector<double> interpolate(std::span<const double> u, std::span<const double> v, double r);

struct SyntheticProvenance {
    /// Cluster the parents came from; -1 for the global (SMOTE) neighbourhood.
    int cluster = -1;
    std::size_t parent_u = 0;
    std::size_t parent_v = 0;
    double r = 0.0;
};

struct SyntheticSet {
    std::size_t label_index = 0;
    Matrix points;  // rows x d; 0 x d when empty
    std::vector<SyntheticProvenance> provenance;

    [[nodiscard]] std::size_t size() const noexcept { return provenance.size(); }
};

/// Per-cluster bookkeeping of one augmentation.
struct ClusterQuota {
    std::size_t cluster = 0;
    std::size_t minority_points = 0;
    std::size_t synthetic = 0;
};

/// A_l: the shared original dataset plus the synthetic points of label l.
struct AugmentedDataset {
    std::shared_ptr<const MultiLabelDataset> base;
    std::size_t label_index = 0;
    SyntheticSet extra;
    std::uint8_t synthetic_value = 1;
    std::size_t n_min = 0;
    std::size_t n_maj = 0;
    std::vector<ClusterQuota> quotas;  // empty for SMOTE and none

    /// Features of base rows followed by synthetic rows.
    [[nodiscard]] Matrix training_features() const;
    /// Column l of the base labels followed by synthetic_value for each synthetic row.
    [[nodiscard]] std::vector<std::uint8_t> training_targets() const;
};

/// Augmentation that adds nothing (plain binary relevance).
[[nodiscard]] AugmentedDataset identity_augment(std::shared_ptr<const MultiLabelDataset> ds, std::size_t label);

/// Cluster-guarded oversampling of one label. For each cluster p holding n_lp >= 1
/// minority points, quota(n_lp, n_min, n_maj) points are generated by interpolating
/// between a random minority point u of the cluster and one of u's m nearest minority
/// neighbours inside the same cluster. A cluster with a single minority point emits
/// copies of it. The random stream depends only on (cfg.seed, l).
[[nodiscard]] AugmentedDataset uclso_augment(std::shared_ptr<const MultiLabelDataset> ds, const ClusterAssignment &assign,
                                             std::size_t label, const OversampleConfig &cfg);

/// Label-specific SMOTE over the whole minority set; generates max(0, n_maj - n_min) points.
[[nodiscard]] AugmentedDataset smote_augment(std::shared_ptr<const MultiLabelDataset> ds, std::size_t label,
                                             const OversampleConfig &cfg);

/// CSV columns: label, cluster, r, parent_u, parent_v, feature_0 ... feature_{d-1}.
void write_synthetic_csv(std::ostream &out, const AugmentedDataset &aug);

}  // namespace uclso
