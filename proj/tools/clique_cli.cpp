// Command-line front end: simulate benchmark data, fit forests, compute
// CLIQUE/CLIP/global importances and partial dependence, summarize
// importance columns by region, render SVG plots, and run the built-in
// simulation experiments.
//
// Exit codes: 0 success, 1 validation error, 2 runtime error,
//             3 experiment checks failed.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clique/clique.hpp"

namespace {

using namespace clique;

struct HpOptions {
    std::size_t trees = 500;
    std::size_t mtry = 0;
    std::size_t min_node_size = 0;
    std::size_t max_depth = 0;
    bool no_bootstrap = false;

    Hyperparams to_hyperparams(std::uint64_t seed) const {
        Hyperparams hp;
        hp.n_trees = trees;
        hp.mtry = mtry;
        hp.min_node_size = min_node_size;
        hp.max_depth = max_depth;
        hp.bootstrap = !no_bootstrap;
        hp.seed = seed;
        return hp;
    }
};

void add_hp_options(CLI::App* cmd, HpOptions& hp) {
    cmd->add_option("--trees", hp.trees, "Number of trees (default 500)");
    cmd->add_option("--mtry", hp.mtry,
                    "Features sampled per split (default: sqrt(p) classification, p/3 regression)");
    cmd->add_option("--min-node-size", hp.min_node_size,
                    "Node size at which splitting stops (default: 1 classification, 5 regression)");
    cmd->add_option("--max-depth", hp.max_depth, "Maximum tree depth (default: unlimited)");
    cmd->add_flag("--no-bootstrap", hp.no_bootstrap, "Train each tree on the full row set");
}

TaskKind parse_task(const std::string& s) {
    if (s == "classification") return TaskKind::classification;
    if (s == "regression") return TaskKind::regression;
    throw ValidationError("unknown task '" + s + "' (expected classification or regression)");
}

/// Rethrows any failure with the pipeline stage attached.
template <typename Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        throw ValidationError("while " + name + ": " + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error("while " + name + ": " + e.what());
    }
}

void print_label_balance(const Dataset& ds) {
    std::cout << "n=" << ds.n_rows << " p=" << ds.n_features();
    if (ds.task.kind == TaskKind::classification) {
        std::cout << " label balance:";
        for (std::size_t c = 0; c < ds.task.classes.size(); ++c) {
            std::size_t count = 0;
            for (const int y : ds.y_cls)
                if (static_cast<std::size_t>(y) == c) ++count;
            std::cout << ' ' << ds.task.classes[c] << '='
                      << detail::format_double(static_cast<double>(count) /
                                               static_cast<double>(ds.n_rows));
        }
    } else {
        std::cout << " label mean=" << detail::format_double(mean(ds.y_reg));
    }
    std::cout << '\n';
}

int cmd_simulate(const std::string& kind, std::size_t n, std::uint64_t seed,
                 const std::string& out) {
    const Dataset ds = simulate({sim_kind_from_string(kind), n, seed});
    write_csv(ds, out);
    print_label_balance(ds);
    std::cout << "wrote " << out << '\n';
    return 0;
}

int cmd_fit(const std::string& in, const std::string& label, const std::string& task,
            const HpOptions& hp_opts, std::uint64_t seed, const std::string& model_out,
            std::size_t threads) {
    const Dataset ds = stage("loading dataset", [&] { return load_csv(in, label, parse_task(task)); });
    const Hyperparams hp = hp_opts.to_hyperparams(seed);
    const Forest model = stage("fitting forest", [&] { return Forest::fit(ds, hp, threads); });
    const LossSpec loss = default_loss(ds.task.kind);
    std::cout << "trees=" << model.trees().size()
              << " train_error=" << detail::format_double(full_model_train_error(model, ds, loss))
              << " (" << to_string(loss.kind) << ")\n";
    if (!model_out.empty()) {
        stage("writing model", [&] { save_model(model, model_out); });
        std::cout << "wrote " << model_out << '\n';
    }
    return 0;
}

int cmd_importance(const std::string& method, const std::string& in, const std::string& label,
                   const std::string& task, std::string loss_name, std::size_t m_reps,
                   std::size_t k, std::size_t reps, const std::string& pdp_feature,
                   const std::string& target_class, const HpOptions& hp_opts, std::uint64_t seed,
                   const std::string& out, std::string meta_path, const std::string& folds_out,
                   std::size_t threads) {
    const Dataset ds = stage("loading dataset", [&] { return load_csv(in, label, parse_task(task)); });
    if (loss_name.empty()) loss_name = to_string(default_loss(ds.task.kind).kind);
    const LossSpec loss{loss_kind_from_string(loss_name)};
    stage("validating configuration", [&] {
        check_loss_compatible(loss, ds.task.kind);
        return 0;
    });
    const Hyperparams hp = hp_opts.to_hyperparams(derive_seed(seed, 0xF17));
    if (meta_path.empty()) meta_path = out + ".meta";

    if (method == "pdp") {
        if (pdp_feature.empty()) throw ValidationError("--feature is required for --method pdp");
        std::size_t j = ds.n_features();
        for (std::size_t c = 0; c < ds.n_features(); ++c)
            if (ds.schema[c].name == pdp_feature) j = c;
        if (j == ds.n_features())
            throw ValidationError("unknown feature '" + pdp_feature + "'");
        int target = -1;
        if (!target_class.empty()) {
            if (ds.task.kind != TaskKind::classification)
                throw ValidationError("--target-class applies to classification tasks only");
            for (std::size_t c = 0; c < ds.task.classes.size(); ++c)
                if (ds.task.classes[c] == target_class) target = static_cast<int>(c);
            if (target < 0) throw ValidationError("unknown class '" + target_class + "'");
        }
        const Forest model = stage("fitting forest", [&] { return Forest::fit(ds, hp, threads); });
        const auto curve = stage("computing partial dependence",
                                 [&] { return partial_dependence(model, ds, j, m_reps, target, threads); });
        std::ofstream file(out, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open '" + out + "' for writing");
        file << "grid_value,mean_prediction\n";
        for (const auto& pt : curve)
            file << detail::format_double(pt.grid_value) << ','
                 << detail::format_double(pt.mean_prediction) << '\n';
        KvPairs kv;
        kv.emplace_back("method", "pdp");
        kv.emplace_back("feature", pdp_feature);
        kv.emplace_back("m", std::to_string(m_reps));
        kv.emplace_back("seed", std::to_string(seed));
        kv.emplace_back("n_trees", std::to_string(hp.n_trees));
        kv.emplace_back("rng", Rng::kAlgorithm);
        write_kv(meta_path, kv);
        std::cout << "wrote " << out << " and " << meta_path << '\n';
        return 0;
    }

    const CvEnsemble ens = stage("fitting CV models", [&] {
        return build_cv_ensemble(ds, hp, k, derive_seed(seed, 0xF01D), threads, &std::cerr);
    });
    if (!folds_out.empty()) stage("writing folds", [&] { write_folds_csv(ens.folds, ds, folds_out); return 0; });
    const Forest full_model = stage("fitting full-data model", [&] { return Forest::fit(ds, hp, threads); });
    const double train_error = full_model_train_error(full_model, ds, loss);

    if (method == "global") {
        const auto gpi = stage("computing global importance", [&] {
            return global_permutation_importance(ens, ds, loss, reps, derive_seed(seed, 0xC11B),
                                                 threads);
        });
        std::ofstream file(out, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open '" + out + "' for writing");
        file << "feature,importance\n";
        for (std::size_t j = 0; j < gpi.size(); ++j)
            file << ds.schema[j].name << ',' << detail::format_double(gpi[j]) << '\n';
        const double cv_error = mean(cv_errors(ens, ds, loss, threads));
        KvPairs kv;
        kv.emplace_back("method", "global_permutation");
        kv.emplace_back("reps", std::to_string(reps));
        kv.emplace_back("k", std::to_string(ens.folds.k));
        kv.emplace_back("seed", std::to_string(seed));
        kv.emplace_back("loss", to_string(loss.kind));
        kv.emplace_back("n_trees", std::to_string(hp.n_trees));
        kv.emplace_back("rng", Rng::kAlgorithm);
        kv.emplace_back("cv_error", detail::format_double(cv_error));
        kv.emplace_back("full_model_train_error", detail::format_double(train_error));
        write_kv(meta_path, kv);
        std::cout << "cv_error=" << detail::format_double(cv_error) << '\n';
        std::cout << "wrote " << out << " and " << meta_path << '\n';
        return 0;
    }

    ImportanceMatrix matrix;
    if (method == "clique") {
        matrix = stage("computing CLIQUE importances",
                       [&] { return clique_importance(ens, ds, loss, m_reps, threads); });
        matrix.seed = seed;
    } else if (method == "clip") {
        matrix = stage("computing CLIP importances", [&] {
            return clip_importance(ens, ds, loss, m_reps, derive_seed(seed, 0xC11B), threads);
        });
        matrix.seed = seed;
    } else {
        throw ValidationError("unknown method '" + method +
                              "' (expected clique, clip, global or pdp)");
    }
    stage("writing importance matrix", [&] { write_importance_csv(matrix, out); return 0; });
    write_kv(meta_path, importance_metadata(matrix, ens, ds, seed, train_error));
    std::cout << "cv_error=" << detail::format_double(mean(matrix.baseline)) << '\n';
    std::cout << "wrote " << out << " and " << meta_path << '\n';
    return 0;
}

/// Loads an importance CSV and its dataset and checks that rows align.
std::pair<ImportanceTable, Dataset> load_aligned(const std::string& importance_path,
                                                 const std::string& data_path,
                                                 const std::string& label,
                                                 const std::string& task) {
    ImportanceTable table = read_importance_csv(importance_path);
    Dataset ds = load_csv(data_path, label, parse_task(task));
    if (table.row_ids != ds.ids)
        throw ValidationError("row ids in '" + importance_path + "' do not match '" + data_path +
                              "'");
    return {std::move(table), std::move(ds)};
}

int cmd_summarize(const std::string& importance_path, const std::string& data_path,
                  const std::string& label, const std::string& task, const std::string& feature,
                  const std::string& region, const std::string& out) {
    const auto [table, ds] = load_aligned(importance_path, data_path, label, task);
    const std::vector<double> column = table.column(table.feature_index(feature));
    const std::vector<char> mask = RegionExpr::parse(region).evaluate(ds);

    const RegionSummary s = summarize_regions(column, mask);
    KvPairs kv;
    kv.emplace_back("feature", feature);
    kv.emplace_back("region", region);
    auto emit = [&kv](const std::string& prefix, const ColumnStats& st) {
        kv.emplace_back(prefix + ".count", std::to_string(st.count));
        kv.emplace_back(prefix + ".mean", detail::format_double(st.mean));
        kv.emplace_back(prefix + ".median", detail::format_double(st.median));
        kv.emplace_back(prefix + ".variance", detail::format_double(st.variance));
        kv.emplace_back(prefix + ".q1", detail::format_double(st.q1));
        kv.emplace_back(prefix + ".q3", detail::format_double(st.q3));
        kv.emplace_back(prefix + ".min", detail::format_double(st.min));
        kv.emplace_back(prefix + ".max", detail::format_double(st.max));
    };
    emit("in", s.in);
    emit("out", s.out);
    kv.emplace_back("mean_ratio", s.ratio_defined ? detail::format_double(s.mean_ratio) : "NA");

    for (const auto& [key, value] : kv) std::cout << key << '=' << value << '\n';
    if (!out.empty()) write_kv(out, kv);
    return 0;
}

int cmd_plot(const std::string& kind, const std::string& importance_path,
             const std::string& data_path, const std::string& label, const std::string& task,
             const std::string& feature, std::string x_feature, const std::string& region,
             bool group_by_label, const std::string& title, const std::string& out) {
    const auto [table, ds] = load_aligned(importance_path, data_path, label, task);
    const std::vector<double> column = table.column(table.feature_index(feature));

    if (kind == "scatter") {
        if (x_feature.empty()) x_feature = feature;
        std::size_t xj = ds.n_features();
        for (std::size_t j = 0; j < ds.n_features(); ++j)
            if (ds.schema[j].name == x_feature) xj = j;
        if (xj == ds.n_features())
            throw ValidationError("unknown feature '" + x_feature + "'");
        ScatterPlot plot;
        plot.title = title.empty() ? feature + " importance vs " + x_feature : title;
        plot.x_label = x_feature;
        plot.y_label = feature + " importance";
        if (region.empty()) {
            ScatterSeries all{"all", {}};
            for (std::size_t i = 0; i < ds.n_rows; ++i)
                all.points.emplace_back(ds.cell(i, xj), column[i]);
            plot.series.push_back(std::move(all));
        } else {
            const std::vector<char> mask = RegionExpr::parse(region).evaluate(ds);
            ScatterSeries in{region, {}}, outside{"not (" + region + ")", {}};
            for (std::size_t i = 0; i < ds.n_rows; ++i)
                (mask[i] ? in : outside).points.emplace_back(ds.cell(i, xj), column[i]);
            plot.series.push_back(std::move(in));
            plot.series.push_back(std::move(outside));
        }
        write_svg(out, render_scatter(plot));
        std::cout << "wrote " << out << '\n';
        return 0;
    }

    if (kind != "box") throw ValidationError("unknown plot kind '" + kind + "' (scatter or box)");
    BoxPlot plot;
    plot.title = title.empty() ? feature + " importance" : title;
    plot.y_label = feature + " importance";
    if (group_by_label) {
        if (ds.task.kind != TaskKind::classification)
            throw ValidationError("--group-by-label requires a classification task");
        for (std::size_t c = 0; c < ds.task.classes.size(); ++c) {
            BoxGroup g{ds.task.classes[c], {}};
            for (std::size_t i = 0; i < ds.n_rows; ++i)
                if (static_cast<std::size_t>(ds.y_cls[i]) == c) g.values.push_back(column[i]);
            plot.groups.push_back(std::move(g));
        }
    } else if (!region.empty()) {
        const std::vector<char> mask = RegionExpr::parse(region).evaluate(ds);
        BoxGroup in{region, {}}, outside{"not (" + region + ")", {}};
        for (std::size_t i = 0; i < ds.n_rows; ++i)
            (mask[i] ? in : outside).values.push_back(column[i]);
        plot.groups.push_back(std::move(in));
        plot.groups.push_back(std::move(outside));
    } else {
        plot.groups.push_back({feature, column});
    }
    write_svg(out, render_boxplot(plot));
    std::cout << "wrote " << out << '\n';
    return 0;
}

int cmd_experiment(const std::string& kind, std::size_t n, std::size_t m_reps, std::size_t k,
                   const HpOptions& hp_opts, std::uint64_t seed, const std::string& out,
                   const std::string& kv_out, const std::string& export_prefix,
                   std::size_t threads) {
    ExperimentConfig config;
    config.kind = sim_kind_from_string(kind);
    config.n = n;
    config.m_reps = m_reps;
    config.k_folds = k;
    config.hp = hp_opts.to_hyperparams(0);
    config.seed = seed;
    config.n_threads = threads;

    const ExperimentReport report = run_experiment(config);
    const std::string text = report.text();
    std::cout << text;
    if (!out.empty()) {
        std::ofstream file(out, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open '" + out + "' for writing");
        file << text;
    }
    if (!kv_out.empty()) write_kv(kv_out, report.to_kv());
    if (!export_prefix.empty()) {
        write_csv(report.data, export_prefix + "_data.csv");
        write_importance_csv(report.clique_v, export_prefix + "_clique.csv");
        write_importance_csv(report.clip_v, export_prefix + "_clip.csv");
        std::cout << "exported " << export_prefix << "_{data,clique,clip}.csv\n";
    }
    return report.pass ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local variable importance via quantile-grid (CLIQUE) and permutation (CLIP) "
                 "replacements against per-observation cross-validation errors"};
    app.require_subcommand(1);
    app.fallthrough(); // allow --threads after the subcommand name

    std::size_t threads = 0;
    app.add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Generate a benchmark dataset CSV");
    std::string sim_kind, sim_out;
    std::size_t sim_n = 400;
    std::uint64_t sim_seed = 1;
    sim->add_option("--kind", sim_kind, "and_gate, corners or reg_interaction")->required();
    sim->add_option("--n", sim_n, "Number of observations (default 400)");
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--out", sim_out, "Output CSV path")->required();

    // fit
    auto* fit = app.add_subcommand("fit", "Fit a random forest and report training error");
    std::string fit_in, fit_label, fit_task, fit_model_out;
    HpOptions fit_hp;
    std::uint64_t fit_seed = 1;
    fit->add_option("--in", fit_in, "Input CSV")->required();
    fit->add_option("--label", fit_label, "Label column name")->required();
    fit->add_option("--task", fit_task, "classification or regression")->required();
    fit->add_option("--seed", fit_seed, "RNG seed");
    fit->add_option("--model-out", fit_model_out, "Write the fitted model as JSON");
    add_hp_options(fit, fit_hp);

    // importance
    auto* imp = app.add_subcommand("importance",
                                   "Compute CLIQUE/CLIP local importances, global permutation "
                                   "importance, or partial dependence");
    std::string imp_method = "clique", imp_in, imp_label, imp_task, imp_loss, imp_out;
    std::string imp_meta, imp_folds_out, imp_feature, imp_target_class;
    std::size_t imp_m = 25, imp_k = 10, imp_reps = 25;
    std::uint64_t imp_seed = 1;
    HpOptions imp_hp;
    imp->add_option("--method", imp_method, "clique, clip, global or pdp (default clique)");
    imp->add_option("--in", imp_in, "Input CSV")->required();
    imp->add_option("--label", imp_label, "Label column name")->required();
    imp->add_option("--task", imp_task, "classification or regression")->required();
    imp->add_option("--loss", imp_loss,
                    "zero_one, brier (classification) or squared_error (regression)");
    imp->add_option("--m", imp_m, "Grid size / permutation count M (default 25)");
    imp->add_option("--k", imp_k, "CV fold count (default 10)");
    imp->add_option("--reps", imp_reps, "Permutation repetitions for --method global");
    imp->add_option("--feature", imp_feature, "Feature for --method pdp");
    imp->add_option("--target-class", imp_target_class,
                    "Class whose probability the PDP tracks (default: last class)");
    imp->add_option("--seed", imp_seed, "RNG seed");
    imp->add_option("--out", imp_out, "Output CSV path")->required();
    imp->add_option("--meta", imp_meta, "Metadata sidecar path (default <out>.meta)");
    imp->add_option("--folds-out", imp_folds_out, "Export fold assignment as id,fold CSV");
    add_hp_options(imp, imp_hp);

    // summarize
    auto* sum = app.add_subcommand("summarize",
                                   "Per-region statistics of one importance column");
    std::string sum_imp, sum_data, sum_label, sum_task, sum_feature, sum_region, sum_out;
    sum->add_option("--importance", sum_imp, "Importance CSV")->required();
    sum->add_option("--data", sum_data, "Dataset CSV the importances were computed on")->required();
    sum->add_option("--label", sum_label, "Label column name")->required();
    sum->add_option("--task", sum_task, "classification or regression")->required();
    sum->add_option("--feature", sum_feature, "Importance column to summarize")->required();
    sum->add_option("--region", sum_region, "Region expression, e.g. \"v2 > -0.3333\"")->required();
    sum->add_option("--out", sum_out, "Also write the key=value stats to this path");

    // plot
    auto* plot = app.add_subcommand("plot", "Render an SVG scatter plot or grouped boxplot");
    std::string plot_kind, plot_imp, plot_data, plot_label, plot_task, plot_feature;
    std::string plot_x, plot_region, plot_title, plot_out;
    bool plot_by_label = false;
    plot->add_option("--kind", plot_kind, "scatter or box")->required();
    plot->add_option("--importance", plot_imp, "Importance CSV")->required();
    plot->add_option("--data", plot_data, "Dataset CSV the importances were computed on")->required();
    plot->add_option("--label", plot_label, "Label column name")->required();
    plot->add_option("--task", plot_task, "classification or regression")->required();
    plot->add_option("--feature", plot_feature, "Importance column to plot")->required();
    plot->add_option("--x-feature", plot_x, "Scatter x axis feature (default: --feature)");
    plot->add_option("--region", plot_region, "Region expression for coloring/grouping");
    plot->add_flag("--group-by-label", plot_by_label, "Boxplot: one group per class label");
    plot->add_option("--title", plot_title, "Plot title");
    plot->add_option("--out", plot_out, "Output SVG path")->required();

    // experiment
    auto* exp = app.add_subcommand("experiment",
                                   "Run a simulation study with pass/fail region-contrast checks");
    std::string exp_kind, exp_out, exp_kv, exp_export;
    std::size_t exp_n = 400, exp_m = 25, exp_k = 10;
    std::uint64_t exp_seed = 1;
    HpOptions exp_hp;
    exp->add_option("--kind", exp_kind, "and_gate, corners or reg_interaction")->required();
    exp->add_option("--n", exp_n, "Observations (default 400)");
    exp->add_option("--m", exp_m, "Grid size / permutation count M (default 25)");
    exp->add_option("--k", exp_k, "CV fold count (default 10)");
    exp->add_option("--seed", exp_seed, "RNG seed");
    exp->add_option("--out", exp_out, "Write the text report to this path");
    exp->add_option("--kv", exp_kv, "Write the machine-readable report to this path");
    exp->add_option("--export-prefix", exp_export,
                    "Export <prefix>_data.csv, <prefix>_clique.csv, <prefix>_clip.csv");
    add_hp_options(exp, exp_hp);

    try {
        app.parse(argc, argv);
        if (sim->parsed()) return cmd_simulate(sim_kind, sim_n, sim_seed, sim_out);
        if (fit->parsed())
            return cmd_fit(fit_in, fit_label, fit_task, fit_hp, fit_seed, fit_model_out, threads);
        if (imp->parsed())
            return cmd_importance(imp_method, imp_in, imp_label, imp_task, imp_loss, imp_m, imp_k,
                                  imp_reps, imp_feature, imp_target_class, imp_hp, imp_seed,
                                  imp_out, imp_meta, imp_folds_out, threads);
        if (sum->parsed())
            return cmd_summarize(sum_imp, sum_data, sum_label, sum_task, sum_feature, sum_region,
                                 sum_out);
        if (plot->parsed())
            return cmd_plot(plot_kind, plot_imp, plot_data, plot_label, plot_task, plot_feature,
                            plot_x, plot_region, plot_by_label, plot_title, plot_out);
        if (exp->parsed())
            return cmd_experiment(exp_kind, exp_n, exp_m, exp_k, exp_hp, exp_seed, exp_out, exp_kv,
                                  exp_export, threads);
        return 1;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const clique::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
