#include "uclso/cross_validation.hpp"

#include "uclso/error.hpp"
#include "uclso/metrics.hpp"
#include "uclso/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <ostream>
#include <thread>

namespace uclso {

namespace {

constexpr std::uint64_t clustering_stream = 0x6b6d65616e73ULL;

MeanDev mean_dev(const std::vector<double> &values) {
    MeanDev out;
    if (values.empty()) return out;
    double sum = 0.0;
    for (const double v : values) sum += v;
    out.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (const double v : values) sq += (v - out.mean) * (v - out.mean);
        out.deviation = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return out;
}

CellMetrics evaluate_cell(const MultiLabelDataset &ds, const MethodConfig &method, const FoldPlan &plan, std::size_t rep,
                          std::size_t fold) {
    const auto train_rows = plan.train_rows(rep, fold);
    const auto &test_rows = plan.test_rows(rep, fold);
    const MultiLabelDataset train = ds.subset(train_rows);
    const MultiLabelDataset test = ds.subset(test_rows);

    const CellModels fitted = fit_cell(train, cell_method(method, rep, fold));
    const Matrix test_x = fitted.scaler ? fitted.scaler->transform(test.features()) : test.features();

    CellMetrics cell;
    cell.rep = rep;
    cell.fold = fold;
    cell.synthetic = fitted.synthetic;
    cell.train_positives = label_positives(ds, train_rows);
    cell.test_positives = label_positives(ds, test_rows);
    const std::size_t q = ds.num_labels();
    for (std::size_t l = 0; l < q; ++l) {
        const auto scores = score(fitted.models[l], test_x);
        const auto predicted = threshold_scores(scores, method.train.threshold);
        const auto truth = test.labels().column(l);
        cell.f1.push_back(f1_label(confusion(predicted, truth)));
        cell.auc.push_back(auc_label(scores, truth));
        cell.constant_model.push_back(fitted.models[l].meta.constant);
    }
    cell.macro_f1 = macro_average(std::span<const double>(cell.f1));
    if (std::ranges::any_of(cell.auc, [](const auto &v) { return v.has_value(); })) {
        cell.macro_auc = macro_average(std::span<const std::optional<double>>(cell.auc));
    }
    return cell;
}

MetricReport assemble(const MultiLabelDataset &ds, const MethodConfig &method, const FoldPlan &plan,
                      std::vector<CellMetrics> cells, const CvOptions &opts) {
    MetricReport report;
    report.method = method.name;
    report.config_hash = opts.config_hash;
    report.seed = opts.seed;
    report.label_names = ds.label_names();
    report.cells = std::move(cells);

    std::vector<double> f1_all;
    std::vector<double> auc_all;
    std::vector<double> f1_rep;
    std::vector<double> auc_rep;
    for (std::size_t rep = 0; rep < plan.repetitions; ++rep) {
        std::vector<double> f1_folds;
        std::vector<double> auc_folds;
        for (std::size_t fold = 0; fold < plan.folds_per_rep; ++fold) {
            const CellMetrics &cell = report.cells[rep * plan.folds_per_rep + fold];
            f1_all.push_back(cell.macro_f1);
            f1_folds.push_back(cell.macro_f1);
            if (cell.macro_auc) {
                auc_all.push_back(*cell.macro_auc);
                auc_folds.push_back(*cell.macro_auc);
            }
            for (std::size_t l = 0; l < cell.f1.size(); ++l) {
                report.auc_undefined += cell.auc[l] ? 0 : 1;
                report.constant_models += cell.constant_model[l] ? 1 : 0;
            }
        }
        f1_rep.push_back(mean_dev(f1_folds).mean);
        if (!auc_folds.empty()) auc_rep.push_back(mean_dev(auc_folds).mean);
    }
    report.macro_f1 = mean_dev(f1_all);
    report.macro_auc = mean_dev(auc_all);
    report.macro_f1_by_rep = mean_dev(f1_rep);
    report.macro_auc_by_rep = mean_dev(auc_rep);
    return report;
}

}  // namespace

MethodConfig cell_method(const MethodConfig &method, std::size_t rep, std::size_t fold) {
    MethodConfig out = method;
    out.oversample.seed = derive_seed(method.oversample.seed, {rep, fold});
    out.train.seed = derive_seed(method.train.seed, {rep, fold});
    return out;
}

CellModels fit_cell(const MultiLabelDataset &train, const MethodConfig &method) {
    CellModels out;
    std::shared_ptr<const MultiLabelDataset> base;
    if (method.scale_features) {
        out.scaler = MinMaxScaler::fit(train.features());
        base = std::make_shared<const MultiLabelDataset>(with_features(train, out.scaler->transform(train.features())));
    } else {
        base = std::make_shared<const MultiLabelDataset>(train);
    }

    const std::size_t q = base->num_labels();
    std::optional<ClusterAssignment> clusters;
    if (method.oversample.mode == OversampleMode::uclso) {
        clusters = kmeans(base->features(), method.oversample.k_clusters,
                          derive_seed(method.oversample.seed, {clustering_stream}), method.kmeans);
    }

    std::vector<AugmentedDataset> augments;
    augments.reserve(q);
    for (std::size_t l = 0; l < q; ++l) {
        try {
            switch (method.oversample.mode) {
                case OversampleMode::none: augments.push_back(identity_augment(base, l)); break;
                case OversampleMode::smote: augments.push_back(smote_augment(base, l, method.oversample)); break;
                case OversampleMode::uclso: augments.push_back(uclso_augment(base, *clusters, l, method.oversample)); break;
            }
        } catch (const label_error &) {
            // no minority points in this training fold: train on the fold as is
            augments.push_back(identity_augment(base, l));
        }
        out.synthetic.push_back(augments.back().extra.size());
    }
    out.models = br_fit(*base, augments, method.train, true);
    return out;
}

std::vector<MetricReport> run_cv(const MultiLabelDataset &ds, std::span<const MethodConfig> methods, const FoldPlan &plan,
                                 const CvOptions &opts) {
    if (plan.num_rows != ds.num_instances()) {
        throw invalid_argument_error("fold plan was built for " + std::to_string(plan.num_rows) + " rows, dataset has " +
                                     std::to_string(ds.num_instances()));
    }
    for (const auto &method : methods) {
        method.oversample.validate();
        method.train.validate();
    }
    const std::size_t per_method = plan.repetitions * plan.folds_per_rep;
    const std::size_t total = per_method * methods.size();
    std::vector<std::optional<CellMetrics>> results(total);
    std::vector<std::exception_ptr> failures(total);

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t task = next++; task < total; task = next++) {
            const std::size_t m = task / per_method;
            const std::size_t cell = task % per_method;
            try {
                results[task] = evaluate_cell(ds, methods[m], plan, cell / plan.folds_per_rep, cell % plan.folds_per_rep);
            } catch (...) {
                failures[task] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(opts.threads, 1, std::max<std::size_t>(total, 1));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    for (std::size_t task = 0; task < total; ++task) {
        if (!failures[task]) continue;
        const std::size_t m = task / per_method;
        const std::size_t cell = task % per_method;
        const std::string where = "rep " + std::to_string(cell / plan.folds_per_rep) + ", fold " +
                                  std::to_string(cell % plan.folds_per_rep) + ", method " + methods[m].name;
        try {
            std::rethrow_exception(failures[task]);
        } catch (const std::exception &e) {
            throw error("cross-validation failed at (" + where + "): " + e.what());
        }
    }

    std::vector<MetricReport> reports;
    for (std::size_t m = 0; m < methods.size(); ++m) {
        std::vector<CellMetrics> cells;
        for (std::size_t c = 0; c < per_method; ++c) cells.push_back(std::move(*results[m * per_method + c]));
        reports.push_back(assemble(ds, methods[m], plan, std::move(cells), opts));
    }
    return reports;
}

void write_report_csv(std::ostream &out, const MetricReport &report) {
    const auto precision = out.precision(17);
    out << "# method=" << report.method << " config_hash=" << report.config_hash << " seed=" << report.seed << '\n';
    out << "rep,fold,label,metric,value\n";
    for (const auto &cell : report.cells) {
        for (std::size_t l = 0; l < cell.f1.size(); ++l) {
            out << cell.rep << ',' << cell.fold << ',' << report.label_names[l] << ",f1," << cell.f1[l] << '\n';
            out << cell.rep << ',' << cell.fold << ',' << report.label_names[l] << ",auc,";
            if (cell.auc[l]) {
                out << *cell.auc[l];
            } else {
                out << "NA";
            }
            out << '\n';
        }
        out << cell.rep << ',' << cell.fold << ",macro,f1," << cell.macro_f1 << '\n';
        out << cell.rep << ',' << cell.fold << ",macro,auc,";
        if (cell.macro_auc) {
            out << *cell.macro_auc;
        } else {
            out << "NA";
        }
        out << '\n';
    }
    out.precision(precision);
}

void write_report_summary(std::ostream &out, const MetricReport &report) {
    auto md = [](const MeanDev &v) { return nlohmann::ordered_json{{"mean", v.mean}, {"deviation", v.deviation}}; };
    nlohmann::ordered_json doc;
    doc["method"] = report.method;
    doc["config_hash"] = report.config_hash;
    doc["seed"] = report.seed;
    doc["labels"] = report.label_names;
    doc["cells"] = report.cells.size();
    doc["macro_f1"] = md(report.macro_f1);
    doc["macro_auc"] = md(report.macro_auc);
    doc["macro_f1_by_repetition"] = md(report.macro_f1_by_rep);
    doc["macro_auc_by_repetition"] = md(report.macro_auc_by_rep);
    doc["auc_undefined_label_cells"] = report.auc_undefined;
    doc["constant_model_label_cells"] = report.constant_models;
    doc["conventions"] = {{"f1_zero_division", 0},
                          {"auc_single_class_test_fold", "excluded from macro-AUC"},
                          {"aggregation", "mean over all repetition x fold cells"}};
    out << doc.dump(2) << '\n';
}

void write_fold_positives_csv(std::ostream &out, const MetricReport &report) {
    out << "# method=" << report.method << " config_hash=" << report.config_hash << " seed=" << report.seed << '\n';
    out << "rep,fold,label,train_positives,test_positives,synthetic,constant_model\n";
    for (const auto &cell : report.cells) {
        for (std::size_t l = 0; l < cell.f1.size(); ++l) {
            out << cell.rep << ',' << cell.fold << ',' << report.label_names[l] << ',' << cell.train_positives[l] << ','
                << cell.test_positives[l] << ',' << cell.synthetic[l] << ',' << (cell.constant_model[l] ? 1 : 0) << '\n';
        }
    }
}

}  // namespace uclso
