#pragma once

#include "uclso/cross_validation.hpp"
#include "uclso/error.hpp"
#include "uclso/kmeans.hpp"
#include "uclso/linear_model.hpp"
#include "uclso/oversample.hpp"
#include "uclso/toy.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace uclso {

/// Thrown for unreadable or inconsistent experiment configuration (CLI exit code 2).
class config_error : public error {
  public:
    using error::error;
};

struct DatasetSource {
    std::string name;
    std::filesystem::path arff;
    std::filesystem::path xml;
    std::optional<ToyConfig> toy;

    [[nodiscard]] bool is_toy() const noexcept { return toy.has_value(); }
};

struct MethodSpec {
    std::string name;
    OversampleMode mode = OversampleMode::none;
};

/// Everything one run needs. Defaults: k = 5 clusters, 10 x 2 cross-validation,
/// labels filtered at IR >= 50 or fewer than 20 positives.
struct ExperimentConfig {
    std::vector<DatasetSource> datasets;
    bool filter = true;
    double max_ir = 50.0;
    std::size_t min_pos = 20;
    bool scale_features = false;
    OversampleConfig oversample;
    TrainConfig train;
    KMeansOptions kmeans;
    std::size_t repetitions = 10;
    std::size_t folds = 2;
    std::vector<MethodSpec> methods{{"br", OversampleMode::none}, {"smote", OversampleMode::smote}, {"uclso", OversampleMode::uclso}};
    double alpha = 0.05;
    std::uint64_t seed = 1;
    std::filesystem::path out_dir = "results";
    /// Directory relative dataset paths resolve against (the config file's directory).
    std::filesystem::path base_dir;

    [[nodiscard]] std::filesystem::path resolve(const std::filesystem::path &p) const;

    /// Seeds of the fold plan, oversampler and trainer, all derived from `seed`.
    [[nodiscard]] std::uint64_t fold_seed() const noexcept;
    [[nodiscard]] std::uint64_t oversample_seed() const noexcept;
    [[nodiscard]] std::uint64_t train_seed() const noexcept;

    [[nodiscard]] MethodConfig method_config(const MethodSpec &spec) const;
};

/// Parses a JSON config. Relative dataset paths later resolve against `base_dir`.
/// @throws config_error on unknown keys, wrong types, or invalid values.
[[nodiscard]] ExperimentConfig parse_config(const nlohmann::json &doc, const std::filesystem::path &base_dir = {});
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path &path);

/// Canonical JSON of every result-affecting value (output directory excluded).
[[nodiscard]] nlohmann::json canonical_json(const ExperimentConfig &cfg);
/// 16 hex digits of FNV-1a over the canonical JSON.
[[nodiscard]] std::string config_hash(const ExperimentConfig &cfg);

[[nodiscard]] ToyConfig parse_toy_config(const nlohmann::json &doc);
[[nodiscard]] nlohmann::json toy_to_json(const ToyConfig &cfg);

}  // namespace uclso
