#include "uclso/linear_model.hpp"

#include "uclso/error.hpp"
#include "uclso/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace uclso {

void TrainConfig::validate() const {
    if (!(reg_c > 0.0)) throw invalid_argument_error("reg_c must be positive");
    if (epochs < 1) throw invalid_argument_error("epochs must be at least 1");
    if (!(learning_rate > 0.0)) throw invalid_argument_error("learning_rate must be positive");
    if (!(decay >= 0.0)) throw invalid_argument_error("decay must be non-negative");
    if (!(tolerance >= 0.0)) throw invalid_argument_error("tolerance must be non-negative");
}

double hinge_objective(const LinearModel &model, const Matrix &x, std::span<const std::uint8_t> y, double lambda) {
    double loss = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double label = y[i] ? 1.0 : -1.0;
        loss += std::max(0.0, 1.0 - label * model.score_one(x.row(i)));
    }
    const double norm = dot(model.weights, model.weights);
    return 0.5 * lambda * norm + loss / static_cast<double>(x.rows());
}

LinearModel constant_model(std::size_t dimension, bool positive) {
    LinearModel model;
    model.weights.assign(dimension, 0.0);
    model.bias = positive ? 1.0 : -1.0;
    model.meta.constant = true;
    return model;
}

LinearModel train_linear(const Matrix &x, std::span<const std::uint8_t> y, const TrainConfig &cfg) {
    cfg.validate();
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (n == 0 || y.size() != n) throw invalid_argument_error("train_linear: feature rows and targets differ in length");
    for (const double v : x.values()) {
        if (!std::isfinite(v)) throw invalid_argument_error("train_linear: non-finite feature value");
    }
    const std::size_t positives = static_cast<std::size_t>(std::count(y.begin(), y.end(), std::uint8_t{1}));
    if (positives == 0 || positives == n) throw label_error("train_linear: training targets contain a single class");

    const double lambda = 1.0 / (cfg.reg_c * static_cast<double>(n));
    // w = scale * v keeps the shrink step O(1)
    std::vector<double> v(d, 0.0);
    double scale = 1.0;
    double bias = 0.0;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(cfg.seed);

    LinearModel model;
    model.meta.reg_c = cfg.reg_c;
    double t = 0.0;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(std::span<std::size_t>(order));
        for (const std::size_t i : order) {
            const double eta = cfg.learning_rate / (1.0 + cfg.decay * cfg.learning_rate * lambda * t);
            const auto xi = x.row(i);
            const double label = y[i] ? 1.0 : -1.0;
            const double margin = label * (scale * dot(v, xi) + bias);
            const double shrink = 1.0 - eta * lambda;
            if (shrink > 0.0) {
                scale *= shrink;
            } else {
                std::ranges::fill(v, 0.0);
                scale = 1.0;
            }
            if (margin < 1.0) {
                const double step = eta * label / scale;
                for (std::size_t c = 0; c < d; ++c) v[c] += step * xi[c];
                bias += eta * label;
            }
            if (scale < 1e-9) {
                for (auto &w : v) w *= scale;
                scale = 1.0;
            }
            t += 1.0;
        }

        model.weights.resize(d);
        for (std::size_t c = 0; c < d; ++c) model.weights[c] = scale * v[c];
        model.bias = bias;
        const double objective = hinge_objective(model, x, y, lambda);
        model.meta.objective_history.push_back(objective);
        model.meta.objective = objective;
        model.meta.epochs_run = epoch + 1;
        if (cfg.tolerance > 0.0 && epoch > 0) {
            const double prev = model.meta.objective_history[epoch - 1];
            if (std::abs(prev - objective) <= cfg.tolerance * std::max(1.0, std::abs(prev))) break;
        }
    }
    for (const double w : model.weights) {
        if (!std::isfinite(w)) throw error("train_linear: diverged (non-finite weights); lower the learning rate");
    }
    return model;
}

std::vector<double> score(const LinearModel &model, const Matrix &x) {
    if (x.cols() != model.dimension()) {
        throw invalid_argument_error("score: model has " + std::to_string(model.dimension()) + " weights, data has " +
                                     std::to_string(x.cols()) + " features");
    }
    std::vector<double> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] = model.score_one(x.row(i));
    return out;
}

std::vector<std::uint8_t> threshold_scores(std::span<const double> scores, double threshold) {
    std::vector<std::uint8_t> out(scores.size());
    std::ranges::transform(scores, out.begin(), [threshold](double s) { return static_cast<std::uint8_t>(s > threshold); });
    return out;
}

std::vector<std::uint8_t> predict(const LinearModel &model, const Matrix &x, double threshold) {
    return threshold_scores(score(model, x), threshold);
}

std::vector<LinearModel> br_fit(const MultiLabelDataset &ds, std::span<const AugmentedDataset> augments,
                                const TrainConfig &cfg, bool allow_single_class) {
    if (augments.size() != ds.num_labels()) {
        throw invalid_argument_error("br_fit: expected one augmentation per label (" + std::to_string(ds.num_labels()) + ")");
    }
    std::vector<LinearModel> models;
    models.reserve(augments.size());
    for (std::size_t l = 0; l < augments.size(); ++l) {
        const AugmentedDataset &aug = augments[l];
        if (aug.label_index != l || !aug.base || aug.base->num_features() != ds.num_features()) {
            throw invalid_argument_error("br_fit: augmentation " + std::to_string(l) + " does not match the dataset");
        }
        const Matrix x = aug.training_features();
        const std::vector<std::uint8_t> y = aug.training_targets();
        const std::size_t positives = static_cast<std::size_t>(std::count(y.begin(), y.end(), std::uint8_t{1}));
        if (positives == 0 || positives == y.size()) {
            if (!allow_single_class) {
                throw label_error("label '" + ds.label_names()[l] + "': training targets contain a single class");
            }
            models.push_back(constant_model(ds.num_features(), positives > 0));
            models.back().meta.reg_c = cfg.reg_c;
            continue;
        }
        TrainConfig label_cfg = cfg;
        label_cfg.seed = derive_seed(cfg.seed, {l});
        models.push_back(train_linear(x, y, label_cfg));
    }
    return models;
}

namespace {

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

double read_double(const std::string &text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw parse_error("<model>", 0, "invalid number '" + text + "'");
    }
    return v;
}

}  // namespace

void write_model(std::ostream &out, const LinearModel &model) {
    out << "linear_model d=" << model.dimension() << " reg_c=" << format_double(model.meta.reg_c)
        << " epochs=" << model.meta.epochs_run << " objective=" << format_double(model.meta.objective)
        << " constant=" << (model.meta.constant ? 1 : 0) << '\n';
    out << format_double(model.bias) << '\n';
    for (const double w : model.weights) out << format_double(w) << '\n';
}

LinearModel read_model(std::istream &in) {
    std::string header;
    if (!std::getline(in, header)) throw parse_error("<model>", 1, "empty model file");
    std::istringstream fields(header);
    std::string tag;
    fields >> tag;
    if (tag != "linear_model") throw parse_error("<model>", 1, "missing 'linear_model' header");
    LinearModel model;
    std::size_t d = 0;
    bool have_d = false;
    std::string kv;
    while (fields >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw parse_error("<model>", 1, "malformed header field '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        if (key == "d") {
            d = static_cast<std::size_t>(read_double(value));
            have_d = true;
        } else if (key == "reg_c") {
            model.meta.reg_c = read_double(value);
        } else if (key == "epochs") {
            model.meta.epochs_run = static_cast<std::size_t>(read_double(value));
        } else if (key == "objective") {
            model.meta.objective = read_double(value);
        } else if (key == "constant") {
            model.meta.constant = value == "1";
        } else {
            throw parse_error("<model>", 1, "unknown header field '" + key + "'");
        }
    }
    if (!have_d) throw parse_error("<model>", 1, "header lacks d=");
    std::string line;
    std::size_t line_no = 1;
    auto next_value = [&]() {
        ++line_no;
        if (!std::getline(in, line)) throw parse_error("<model>", line_no, "truncated model file");
        return read_double(line);
    };
    model.bias = next_value();
    model.weights.resize(d);
    for (auto &w : model.weights) w = next_value();
    return model;
}

}  // namespace uclso
