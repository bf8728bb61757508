#include "uclso/cli.hpp"

#include "uclso/arff.hpp"
#include "uclso/config.hpp"
#include "uclso/cross_validation.hpp"
#include "uclso/error.hpp"
#include "uclso/kmeans.hpp"
#include "uclso/oversample.hpp"
#include "uclso/random.hpp"
#include "uclso/ranking.hpp"
#include "uclso/stats.hpp"
#include "uclso/toy.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

namespace uclso {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t clustering_stream = 0x636c7573746572ULL;

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::size_t threads = 1;
};

struct Context {
    ExperimentConfig cfg;
    std::string hash;
    std::ostream &out;
    std::ostream &err;

    [[nodiscard]] std::string stamp() const { return "# config_hash=" + hash + " seed=" + std::to_string(cfg.seed) + "\n"; }

    void write(const std::string &name, const std::function<void(std::ostream &)> &body) const {
        fs::create_directories(cfg.out_dir);
        const fs::path path = cfg.out_dir / name;
        std::ofstream file(path, std::ios::binary);
        if (!file) throw error("cannot write '" + path.string() + "'");
        body(file);
        if (!file) throw error("write to '" + path.string() + "' failed");
    }
};

struct LoadedDataset {
    std::string name;
    MultiLabelDataset raw;
    std::optional<LabelFilterResult> filtered;

    [[nodiscard]] const MultiLabelDataset &working() const { return filtered ? filtered->dataset : raw; }
};

ExperimentConfig build_config(const Options &opts) {
    ExperimentConfig cfg;
    if (!opts.config.empty()) cfg = load_config(opts.config);
    if (opts.seed) cfg.seed = *opts.seed;
    if (!opts.out.empty()) cfg.out_dir = opts.out;
    return cfg;
}

void check_paths(const ExperimentConfig &cfg) {
    if (cfg.datasets.empty()) throw config_error("config lists no datasets");
    for (const auto &d : cfg.datasets) {
        if (d.is_toy()) continue;
        for (const auto &p : {d.arff, d.xml}) {
            if (!fs::exists(cfg.resolve(p))) {
                throw config_error("dataset '" + d.name + "': file not found: " + cfg.resolve(p).string());
            }
        }
    }
}

LoadedDataset load(const Context &ctx, const DatasetSource &src) {
    MultiLabelDataset raw = src.is_toy() ? generate_toy(*src.toy) : load_mulan(ctx.cfg.resolve(src.arff), ctx.cfg.resolve(src.xml));
    LoadedDataset loaded{src.name, std::move(raw), std::nullopt};
    if (ctx.cfg.filter) {
        loaded.filtered = filter_labels(loaded.raw, ctx.cfg.max_ir, ctx.cfg.min_pos);
        for (const auto &d : loaded.filtered->report.dropped) {
            ctx.err << "note: " << src.name << ": dropped label '" << d.name << "' (" << d.reason << ")\n";
        }
    }
    return loaded;
}

void write_filter_report(const Context &ctx, const LoadedDataset &ds) {
    if (!ds.filtered) return;
    ctx.write(ds.name + "_label_filter.csv", [&](std::ostream &o) {
        o << ctx.stamp() << "label,index,positives,ir,status,reason\n";
        const auto stats = compute_stats(ds.raw);
        for (const auto l : ds.filtered->report.kept) {
            o << ds.raw.label_names()[l] << ',' << l << ',' << ds.raw.labels().positives(l) << ',' << stats.label_ir[l]
              << ",kept,\n";
        }
        for (const auto &d : ds.filtered->report.dropped) {
            o << d.name << ',' << d.index << ',' << d.positives << ',' << d.ir << ",dropped," << d.reason << '\n';
        }
    });
}

int cmd_stats(const Context &ctx) {
    std::ostringstream csv;
    csv << ctx.stamp();
    write_stats_csv_header(csv);
    for (const auto &src : ctx.cfg.datasets) {
        const LoadedDataset ds = load(ctx, src);
        const DatasetStats raw = compute_stats(ds.raw);
        for (const auto l : raw.undefined_ir_labels) {
            ctx.err << "note: " << ds.name << ": label '" << ds.raw.label_names()[l]
                    << "' has a single class; its IR is undefined and excluded\n";
        }
        write_stats_csv_row(csv, ds.name, "raw", raw);
        if (ds.filtered) write_stats_csv_row(csv, ds.name, "filtered", compute_stats(ds.filtered->dataset));
    }
    ctx.out << csv.str();
    if (!ctx.cfg.out_dir.empty()) ctx.write("stats.csv", [&](std::ostream &o) { o << csv.str(); });
    return exit_ok;
}

ClusterAssignment cluster_dataset(const Context &ctx, const MultiLabelDataset &ds) {
    return kmeans(ds.features(), ctx.cfg.oversample.k_clusters, derive_seed(ctx.cfg.oversample_seed(), {clustering_stream}),
                  ctx.cfg.kmeans);
}

const MultiLabelDataset &scaled(const Context &ctx, const LoadedDataset &ds, std::optional<MultiLabelDataset> &storage) {
    if (!ctx.cfg.scale_features) return ds.working();
    storage = with_features(ds.working(), MinMaxScaler::fit(ds.working().features()).transform(ds.working().features()));
    return *storage;
}

int cmd_cluster(const Context &ctx) {
    for (const auto &src : ctx.cfg.datasets) {
        const LoadedDataset ds = load(ctx, src);
        std::optional<MultiLabelDataset> storage;
        const MultiLabelDataset &data = scaled(ctx, ds, storage);
        const ClusterAssignment assign = cluster_dataset(ctx, data);
        ctx.write(ds.name + "_clusters.csv", [&](std::ostream &o) {
            o << ctx.stamp();
            write_assignment_csv(o, assign);
        });
        ctx.write(ds.name + "_centroids.csv", [&](std::ostream &o) {
            o << ctx.stamp();
            write_centroids_csv(o, assign);
        });
        ctx.out << ds.name << ": k=" << assign.k << " inertia=" << assign.inertia << " iterations=" << assign.iterations_run
                << '\n';
    }
    return exit_ok;
}

int cmd_oversample(const Context &ctx) {
    const OversampleMode mode = ctx.cfg.oversample.mode;
    if (mode == OversampleMode::none) throw config_error("oversample.mode is 'none': nothing to oversample");
    OversampleConfig ocfg = ctx.cfg.oversample;
    ocfg.seed = ctx.cfg.oversample_seed();

    for (const auto &src : ctx.cfg.datasets) {
        const LoadedDataset ds = load(ctx, src);
        std::optional<MultiLabelDataset> storage;
        auto base = std::make_shared<const MultiLabelDataset>(scaled(ctx, ds, storage));
        std::optional<ClusterAssignment> assign;
        if (mode == OversampleMode::uclso) assign = cluster_dataset(ctx, *base);

        std::ostringstream manifest;
        manifest << ctx.stamp() << "label,label_name,mode,cluster,n_min,n_maj,minority_points,synthetic\n";
        for (std::size_t l = 0; l < base->num_labels(); ++l) {
            const std::string &label_name = base->label_names()[l];
            std::optional<AugmentedDataset> aug;
            try {
                aug = mode == OversampleMode::uclso ? uclso_augment(base, *assign, l, ocfg) : smote_augment(base, l, ocfg);
            } catch (const label_error &e) {
                ctx.err << "warning: " << ds.name << ": skipping label '" << label_name << "': " << e.what() << '\n';
                continue;
            }
            if (mode == OversampleMode::uclso) {
                for (const auto &qt : aug->quotas) {
                    manifest << l << ',' << label_name << ",uclso," << qt.cluster << ',' << aug->n_min << ',' << aug->n_maj
                             << ',' << qt.minority_points << ',' << qt.synthetic << '\n';
                }
            } else {
                manifest << l << ',' << label_name << ",smote,-1," << aug->n_min << ',' << aug->n_maj << ',' << aug->n_min
                         << ',' << aug->extra.size() << '\n';
            }
            ctx.write(ds.name + "_label" + std::to_string(l) + "_synthetic.csv", [&](std::ostream &o) {
                o << ctx.stamp();
                write_synthetic_csv(o, *aug);
            });
            ctx.out << ds.name << ": label '" << label_name << "': n_min=" << aug->n_min << " n_maj=" << aug->n_maj
                    << " synthetic=" << aug->extra.size() << '\n';
        }
        ctx.write(ds.name + "_manifest.csv", [&](std::ostream &o) { o << manifest.str(); });
    }
    return exit_ok;
}

int cmd_experiment(const Context &ctx, std::size_t threads) {
    if (ctx.cfg.methods.empty()) throw config_error("config lists no methods");
    std::vector<MethodConfig> methods;
    for (const auto &spec : ctx.cfg.methods) methods.push_back(ctx.cfg.method_config(spec));

    const std::size_t num_methods = methods.size();
    const std::size_t num_datasets = ctx.cfg.datasets.size();
    Matrix f1_scores(num_datasets, num_methods);
    Matrix auc_scores(num_datasets, num_methods);
    std::vector<std::string> dataset_names;

    ctx.write("config.json", [&](std::ostream &o) {
        nlohmann::json doc = canonical_json(ctx.cfg);
        doc["config_hash"] = ctx.hash;
        o << doc.dump(2) << '\n';
    });

    for (std::size_t di = 0; di < num_datasets; ++di) {
        const LoadedDataset ds = load(ctx, ctx.cfg.datasets[di]);
        dataset_names.push_back(ds.name);
        write_filter_report(ctx, ds);
        const MultiLabelDataset &data = ds.working();
        const FoldPlan plan = make_fold_plan(data.num_instances(), ctx.cfg.repetitions, ctx.cfg.folds, ctx.cfg.fold_seed());
        const auto reports = run_cv(data, methods, plan, {threads, ctx.hash, ctx.cfg.seed});
        for (std::size_t m = 0; m < num_methods; ++m) {
            const MetricReport &r = reports[m];
            const std::string stem = ds.name + "_" + r.method;
            ctx.write("report_" + stem + ".csv", [&](std::ostream &o) { write_report_csv(o, r); });
            ctx.write("summary_" + stem + ".json", [&](std::ostream &o) { write_report_summary(o, r); });
            ctx.write("folds_" + stem + ".csv", [&](std::ostream &o) { write_fold_positives_csv(o, r); });
            f1_scores(di, m) = r.macro_f1.mean;
            auc_scores(di, m) = r.macro_auc.mean;
            ctx.out << ds.name << " " << r.method << ": macro-F1 " << r.macro_f1.mean << " +- " << r.macro_f1.deviation
                    << ", macro-AUC " << r.macro_auc.mean << " +- " << r.macro_auc.deviation << '\n';
        }
    }

    if (num_methods >= 2 && num_datasets >= 2) {
        std::vector<std::string> method_names;
        for (const auto &m : methods) method_names.push_back(m.name);
        for (const auto &[metric, scores] : {std::pair<std::string, const Matrix *>{"f1", &f1_scores}, {"auc", &auc_scores}}) {
            const RankTable table = average_ranks(*scores, true, dataset_names, method_names);
            const FriedmanResult result = friedman(table, ctx.cfg.alpha);
            ctx.write("ranks_" + metric + ".csv", [&](std::ostream &o) {
                o << ctx.stamp();
                write_rank_table_csv(o, table);
            });
            ctx.write("friedman_" + metric + ".json",
                      [&](std::ostream &o) { write_friedman_json(o, result, ctx.hash, ctx.cfg.seed); });
            ctx.write("cd_" + metric + ".csv", [&](std::ostream &o) {
                o << ctx.stamp();
                write_critical_difference_csv(o, table, result);
            });
            ctx.out << "friedman (" << metric << "): chi2=" << result.chi_square << " p=" << result.p_value
                    << " control=" << result.control_name << '\n';
        }
    }
    return exit_ok;
}

int cmd_toy_gen(const Context &ctx) {
    for (const auto &src : ctx.cfg.datasets) {
        if (!src.is_toy()) continue;
        const MultiLabelDataset ds = generate_toy(*src.toy);
        ctx.write(src.name + ".arff", [&](std::ostream &o) {
            o << "% config_hash=" << ctx.hash << " seed=" << src.toy->seed << '\n';
            write_arff(o, ds, src.name);
        });
        ctx.write(src.name + ".xml", [&](std::ostream &o) {
            write_mulan_xml(o, ds);
            o << "<!-- config_hash=" << ctx.hash << " seed=" << src.toy->seed << " -->\n";
        });
        std::ostringstream csv;
        write_stats_csv_header(csv);
        write_stats_csv_row(csv, src.name, "raw", compute_stats(ds));
        ctx.out << csv.str();
    }
    return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Cluster-guarded label-specific oversampling for imbalanced multi-label data", "uclso"};
    app.require_subcommand(1);
    Options opts;
    auto add_common = [&](CLI::App *sub, bool config_required) {
        auto *config = sub->add_option("--config", opts.config, "Experiment config (JSON)");
        if (config_required) config->required();
        sub->add_option("--seed", opts.seed, "Global seed (overrides the config)");
        sub->add_option("--out", opts.out, "Output directory (overrides the config)");
        sub->add_option("--threads", opts.threads, "Worker threads; affects speed only")->check(CLI::PositiveNumber);
    };
    auto *stats = app.add_subcommand("stats", "Dataset statistics before and after label filtering");
    auto *cluster = app.add_subcommand("cluster", "k-means clustering of each dataset's input space");
    auto *oversample = app.add_subcommand("oversample", "Export per-label synthetic minority points");
    auto *experiment = app.add_subcommand("experiment", "Repeated cross-validation, ranks and Friedman tests");
    auto *toy = app.add_subcommand("toy-gen", "Write toy datasets as ARFF + XML");
    for (auto *sub : {stats, cluster, oversample, experiment}) add_common(sub, true);
    add_common(toy, false);

    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        ExperimentConfig cfg = build_config(opts);
        if (toy->parsed() && opts.config.empty()) {
            ToyConfig tcfg = five_blob_config();
            if (opts.seed) tcfg.seed = *opts.seed;
            cfg.datasets.push_back({"toy", {}, {}, tcfg});
        }
        check_paths(cfg);
        const Context ctx{cfg, config_hash(cfg), out, err};
        if (stats->parsed()) return cmd_stats(ctx);
        if (cluster->parsed()) return cmd_cluster(ctx);
        if (oversample->parsed()) return cmd_oversample(ctx);
        if (experiment->parsed()) return cmd_experiment(ctx, opts.threads);
        return cmd_toy_gen(ctx);
    } catch (const config_error &e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

}  // namespace uclso
