#include "uclso/toy.hpp"

#include "uclso/error.hpp"
#include "uclso/random.hpp"

namespace uclso {

MultiLabelDataset generate_toy(const ToyConfig &cfg) {
    const std::size_t blobs = cfg.blob_centers.size();
    if (blobs == 0) throw invalid_argument_error("toy config needs at least one blob");
    if (cfg.blob_spreads.size() != blobs) throw invalid_argument_error("toy config needs one spread per blob");
    if (cfg.points_per_blob == 0) throw invalid_argument_error("toy config needs points_per_blob >= 1");
    if (cfg.minority_rules.empty()) throw invalid_argument_error("toy config needs at least one label");
    for (const double spread : cfg.blob_spreads) {
        if (!(spread > 0.0)) throw invalid_argument_error("blob spread must be positive");
    }
    for (const auto &rule : cfg.minority_rules) {
        for (const auto &[blob, fraction] : rule) {
            if (blob >= blobs) throw invalid_argument_error("minority rule refers to unknown blob " + std::to_string(blob));
            if (!(fraction > 0.0 && fraction < 1.0)) {
                throw invalid_argument_error("minority fraction must lie in (0,1), got " + std::to_string(fraction));
            }
        }
    }

    const std::size_t n = blobs * cfg.points_per_blob;
    const std::size_t q = cfg.minority_rules.size();
    Matrix x(n, 2);
    LabelMatrix y(n, q);
    Rng rng(cfg.seed);
    std::size_t row = 0;
    for (std::size_t b = 0; b < blobs; ++b) {
        for (std::size_t i = 0; i < cfg.points_per_blob; ++i, ++row) {
            x(row, 0) = cfg.blob_centers[b][0] + cfg.blob_spreads[b] * rng.normal();
            x(row, 1) = cfg.blob_centers[b][1] + cfg.blob_spreads[b] * rng.normal();
            for (std::size_t l = 0; l < q; ++l) {
                const auto it = cfg.minority_rules[l].find(b);
                // one draw per (point, label) keeps streams aligned across configs
                const double u = rng.uniform();
                if (it != cfg.minority_rules[l].end() && u < it->second) y.set(row, l, 1);
            }
        }
    }
    std::vector<std::string> label_names;
    for (std::size_t l = 0; l < q; ++l) label_names.push_back("label" + std::to_string(l + 1));
    return MultiLabelDataset(std::move(x), std::move(y), {"x1", "x2"}, std::move(label_names));
}

ToyConfig five_blob_config(std::uint64_t seed) {
    ToyConfig cfg;
    cfg.points_per_blob = 200;
    cfg.blob_centers = {{0.0, 0.0}, {6.0, 0.0}, {12.0, 0.0}, {3.0, 5.0}, {9.0, 5.0}};
    cfg.blob_spreads = {1.0, 1.0, 1.0, 1.0, 1.0};
    cfg.minority_rules = {
        {{0, 0.12}, {2, 0.0725}},
        {{3, 0.20}, {4, 0.1335}},
    };
    cfg.seed = seed;
    return cfg;
}

}  // namespace uclso
