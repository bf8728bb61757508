#include "uclso/config.hpp"

#include "uclso/random.hpp"

#include <fstream>
#include <set>

namespace uclso {

using nlohmann::json;

namespace {

void check_keys(const json &obj, const std::string &where, std::initializer_list<const char *> allowed) {
    if (!obj.is_object()) throw config_error(where + ": expected an object");
    for (const auto &[key, value] : obj.items()) {
        bool known = false;
        for (const char *a : allowed) known = known || key == a;
        if (!known) throw config_error(where + ": unknown key '" + key + "'");
    }
}

template <typename T>
void read(const json &obj, const char *key, T &target, const std::string &where) {
    if (!obj.contains(key)) return;
    try {
        target = obj.at(key).get<T>();
    } catch (const json::exception &e) {
        throw config_error(where + "." + key + ": " + e.what());
    }
}

DatasetSource parse_dataset(const json &obj, std::size_t index) {
    const std::string where = "datasets[" + std::to_string(index) + "]";
    check_keys(obj, where, {"name", "arff", "xml", "toy"});
    DatasetSource src;
    read(obj, "name", src.name, where);
    if (obj.contains("toy")) {
        if (obj.contains("arff") || obj.contains("xml")) throw config_error(where + ": give either toy or arff/xml, not both");
        src.toy = parse_toy_config(obj.at("toy"));
        if (src.name.empty()) src.name = "toy" + std::to_string(index + 1);
        return src;
    }
    std::string arff;
    std::string xml;
    read(obj, "arff", arff, where);
    read(obj, "xml", xml, where);
    if (arff.empty()) throw config_error(where + ": missing 'arff' path");
    if (xml.empty()) throw config_error(where + ": missing 'xml' path");
    src.arff = arff;
    src.xml = xml;
    if (src.name.empty()) src.name = src.arff.stem().string();
    return src;
}

MethodSpec parse_method(const json &item, std::size_t index) {
    const std::string where = "methods[" + std::to_string(index) + "]";
    try {
        if (item.is_string()) {
            const auto mode = parse_oversample_mode(item.get<std::string>() == "br" ? "none" : item.get<std::string>());
            return {mode == OversampleMode::none ? "br" : item.get<std::string>(), mode};
        }
        check_keys(item, where, {"name", "mode"});
        MethodSpec spec;
        std::string mode = "none";
        read(item, "mode", mode, where);
        spec.mode = parse_oversample_mode(mode);
        spec.name = std::string(to_string(spec.mode));
        read(item, "name", spec.name, where);
        return spec;
    } catch (const invalid_argument_error &e) {
        throw config_error(where + ": " + e.what());
    }
}

}  // namespace

std::uint64_t ExperimentConfig::fold_seed() const noexcept { return derive_seed(seed, {1}); }
std::uint64_t ExperimentConfig::oversample_seed() const noexcept { return derive_seed(seed, {2}); }
std::uint64_t ExperimentConfig::train_seed() const noexcept { return derive_seed(seed, {3}); }

std::filesystem::path ExperimentConfig::resolve(const std::filesystem::path &p) const {
    return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
}

MethodConfig ExperimentConfig::method_config(const MethodSpec &spec) const {
    MethodConfig m;
    m.name = spec.name;
    m.oversample = oversample;
    m.oversample.mode = spec.mode;
    m.oversample.seed = oversample_seed();
    m.train = train;
    m.train.seed = train_seed();
    m.kmeans = kmeans;
    m.scale_features = scale_features;
    return m;
}

ToyConfig parse_toy_config(const json &doc) {
    check_keys(doc, "toy", {"preset", "points_per_blob", "centers", "spreads", "labels", "seed"});
    ToyConfig cfg;
    if (doc.contains("preset")) {
        const std::string preset = doc.at("preset").get<std::string>();
        if (preset != "five_blobs") throw config_error("toy.preset: unknown preset '" + preset + "' (expected five_blobs)");
        cfg = five_blob_config();
    }
    try {
        read(doc, "points_per_blob", cfg.points_per_blob, "toy");
        read(doc, "centers", cfg.blob_centers, "toy");
        read(doc, "spreads", cfg.blob_spreads, "toy");
        read(doc, "seed", cfg.seed, "toy");
        if (doc.contains("labels")) {
            cfg.minority_rules.clear();
            for (const auto &rule : doc.at("labels")) {
                std::map<std::size_t, double> parsed;
                for (const auto &[blob, fraction] : rule.items()) parsed[std::stoul(blob)] = fraction.get<double>();
                cfg.minority_rules.push_back(std::move(parsed));
            }
        }
    } catch (const std::logic_error &e) {
        throw config_error(std::string("toy: ") + e.what());
    }
    return cfg;
}

json toy_to_json(const ToyConfig &cfg) {
    json labels = json::array();
    for (const auto &rule : cfg.minority_rules) {
        json obj = json::object();
        for (const auto &[blob, fraction] : rule) obj[std::to_string(blob)] = fraction;
        labels.push_back(obj);
    }
    return {{"points_per_blob", cfg.points_per_blob},
            {"centers", cfg.blob_centers},
            {"spreads", cfg.blob_spreads},
            {"labels", labels},
            {"seed", cfg.seed}};
}

ExperimentConfig parse_config(const json &doc, const std::filesystem::path &base_dir) {
    check_keys(doc, "config",
               {"seed", "dataset", "datasets", "filter", "scale_features", "oversample", "train", "kmeans", "cv", "methods",
                "alpha", "out"});
    ExperimentConfig cfg;
    cfg.base_dir = base_dir;
    read(doc, "seed", cfg.seed, "config");
    read(doc, "scale_features", cfg.scale_features, "config");
    read(doc, "alpha", cfg.alpha, "config");
    std::string out;
    read(doc, "out", out, "config");
    if (!out.empty()) cfg.out_dir = out;

    if (doc.contains("dataset") && doc.contains("datasets")) throw config_error("config: give 'dataset' or 'datasets', not both");
    if (doc.contains("dataset")) cfg.datasets.push_back(parse_dataset(doc.at("dataset"), 0));
    if (doc.contains("datasets")) {
        if (!doc.at("datasets").is_array()) throw config_error("config.datasets: expected an array");
        for (std::size_t i = 0; i < doc.at("datasets").size(); ++i) cfg.datasets.push_back(parse_dataset(doc.at("datasets")[i], i));
    }
    std::set<std::string> names;
    for (const auto &d : cfg.datasets) {
        if (!names.insert(d.name).second) throw config_error("config: duplicate dataset name '" + d.name + "'");
    }

    if (doc.contains("filter")) {
        const auto &f = doc.at("filter");
        check_keys(f, "filter", {"enabled", "max_ir", "min_pos"});
        read(f, "enabled", cfg.filter, "filter");
        read(f, "max_ir", cfg.max_ir, "filter");
        read(f, "min_pos", cfg.min_pos, "filter");
    }
    if (doc.contains("oversample")) {
        const auto &o = doc.at("oversample");
        check_keys(o, "oversample", {"k_clusters", "m_neighbors", "minority", "mode"});
        read(o, "k_clusters", cfg.oversample.k_clusters, "oversample");
        read(o, "m_neighbors", cfg.oversample.m_neighbors, "oversample");
        try {
            if (o.contains("minority")) cfg.oversample.minority = parse_minority_policy(o.at("minority").get<std::string>());
            if (o.contains("mode")) cfg.oversample.mode = parse_oversample_mode(o.at("mode").get<std::string>());
        } catch (const error &e) {
            throw config_error(std::string("oversample: ") + e.what());
        }
    }
    if (doc.contains("train")) {
        const auto &t = doc.at("train");
        check_keys(t, "train", {"reg_c", "epochs", "learning_rate", "decay", "tolerance", "threshold"});
        read(t, "reg_c", cfg.train.reg_c, "train");
        read(t, "epochs", cfg.train.epochs, "train");
        read(t, "learning_rate", cfg.train.learning_rate, "train");
        read(t, "decay", cfg.train.decay, "train");
        read(t, "tolerance", cfg.train.tolerance, "train");
        read(t, "threshold", cfg.train.threshold, "train");
    }
    if (doc.contains("kmeans")) {
        const auto &k = doc.at("kmeans");
        check_keys(k, "kmeans", {"max_iter", "tol"});
        read(k, "max_iter", cfg.kmeans.max_iter, "kmeans");
        read(k, "tol", cfg.kmeans.tol, "kmeans");
    }
    if (doc.contains("cv")) {
        const auto &c = doc.at("cv");
        check_keys(c, "cv", {"repetitions", "folds"});
        read(c, "repetitions", cfg.repetitions, "cv");
        read(c, "folds", cfg.folds, "cv");
    }
    if (doc.contains("methods")) {
        if (!doc.at("methods").is_array()) throw config_error("config.methods: expected an array");
        cfg.methods.clear();
        std::set<std::string> method_names;
        for (std::size_t i = 0; i < doc.at("methods").size(); ++i) {
            cfg.methods.push_back(parse_method(doc.at("methods")[i], i));
            if (!method_names.insert(cfg.methods.back().name).second) {
                throw config_error("config: duplicate method name '" + cfg.methods.back().name + "'");
            }
        }
    }

    try {
        cfg.oversample.validate();
        cfg.train.validate();
    } catch (const error &e) {
        throw config_error(e.what());
    }
    if (cfg.repetitions < 1 || cfg.folds < 2) throw config_error("cv: need repetitions >= 1 and folds >= 2");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw config_error("alpha must lie in (0,1)");
    if (!(cfg.max_ir > 1.0)) throw config_error("filter.max_ir must exceed 1");
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error &e) {
        throw config_error(path.string() + ": " + e.what());
    }
    return parse_config(doc, path.parent_path());
}

json canonical_json(const ExperimentConfig &cfg) {
    json datasets = json::array();
    for (const auto &d : cfg.datasets) {
        json obj = {{"name", d.name}};
        if (d.toy) {
            obj["toy"] = toy_to_json(*d.toy);
        } else {
            obj["arff"] = d.arff.generic_string();
            obj["xml"] = d.xml.generic_string();
        }
        datasets.push_back(obj);
    }
    json methods = json::array();
    for (const auto &m : cfg.methods) methods.push_back({{"name", m.name}, {"mode", to_string(m.mode)}});
    // json objects keep keys sorted, so the dump is canonical
    return {{"seed", cfg.seed},
            {"datasets", datasets},
            {"filter", {{"enabled", cfg.filter}, {"max_ir", cfg.max_ir}, {"min_pos", cfg.min_pos}}},
            {"scale_features", cfg.scale_features},
            {"oversample",
             {{"k_clusters", cfg.oversample.k_clusters},
              {"m_neighbors", cfg.oversample.m_neighbors},
              {"minority", to_string(cfg.oversample.minority)},
              {"mode", to_string(cfg.oversample.mode)}}},
            {"train",
             {{"reg_c", cfg.train.reg_c},
              {"epochs", cfg.train.epochs},
              {"learning_rate", cfg.train.learning_rate},
              {"decay", cfg.train.decay},
              {"tolerance", cfg.train.tolerance},
              {"threshold", cfg.train.threshold}}},
            {"kmeans", {{"max_iter", cfg.kmeans.max_iter}, {"tol", cfg.kmeans.tol}, {"init", "k-means++"}}},
            {"cv", {{"repetitions", cfg.repetitions}, {"folds", cfg.folds}}},
            {"methods", methods},
            {"alpha", cfg.alpha}};
}

std::string config_hash(const ExperimentConfig &cfg) {
    const std::string text = canonical_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static const char *digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

}  // namespace uclso
