// tabsae command line: synthetic data, training, evaluation, grid search,
// baselines, and report rendering. Exit codes: 0 ok, 1 usage/config error,
// 2 data error, 3 runtime failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "tabsae/errors.hpp"
#include "tabsae/experiments.hpp"

namespace fs = std::filesystem;
using namespace tabsae;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<int> parse_arch(const std::string& s) {
    std::vector<int> arch;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',') {
            if (!cur.empty()) arch.push_back(std::stoi(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (arch.empty()) throw UsageError("empty architecture");
    return arch;
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << body;
    if (!out) throw IoError("failed writing " + path);
}

// common data-source flags for train/gridsearch/baselines
struct DataArgs {
    std::string config_path;
    std::string csv;
    std::string label_column = "label";
    int synth_samples = -1;
    double synth_separation = -1;

    ExperimentConfig make() const {
        ExperimentConfig config;
        if (!config_path.empty()) config = load_config(config_path);
        if (!csv.empty()) config.csv_path = csv;
        if (label_column != "label") config.label_column = label_column;
        if (synth_samples > 0) config.synth.n_samples = synth_samples;
        if (synth_separation >= 0) config.synth.class_separation = synth_separation;
        return config;
    }
};

int run(int argc, char** argv) {
    CLI::App app{"stacked sparse autoencoder toolkit for tabular classification"};
    app.require_subcommand(1);

    // ---- synth ----
    auto* synth_cmd = app.add_subcommand("synth", "write a synthetic CSV dataset");
    SynthSpec spec;
    std::string synth_out;
    std::string synth_label = "label";
    synth_cmd->add_option("--out", synth_out, "output CSV path")->required();
    synth_cmd->add_option("--samples", spec.n_samples, "sample count");
    synth_cmd->add_option("--continuous", spec.n_continuous, "continuous feature count");
    synth_cmd->add_option("--binary", spec.n_binary, "binary feature count");
    synth_cmd->add_option("--classes", spec.n_classes, "class count");
    synth_cmd->add_option("--separation", spec.class_separation, "class separation (0 = none)");
    synth_cmd->add_option("--noise", spec.noise_std, "continuous noise stddev");
    synth_cmd->add_option("--seed", spec.seed, "generator seed");
    synth_cmd->add_option("--label-column", synth_label, "label column name");

    // ---- train ----
    auto* train_cmd = app.add_subcommand("train", "train one pipeline, write a model file");
    DataArgs train_data;
    std::string train_arch = "30,15", train_act = "arctan", train_opt = "scg";
    std::string train_out = "model.txt";
    int train_epochs = -1;
    long train_seed = -1;
    train_cmd->add_option("--config", train_data.config_path, "config file");
    train_cmd->add_option("--csv", train_data.csv, "training CSV (default: synthetic)");
    train_cmd->add_option("--label-column", train_data.label_column, "label column name");
    train_cmd->add_option("--samples", train_data.synth_samples, "synthetic sample count");
    train_cmd->add_option("--separation", train_data.synth_separation, "synthetic separation");
    train_cmd->add_option("--arch", train_arch, "hidden widths, e.g. 30,15");
    train_cmd->add_option("--activation", train_act, "activation function name");
    train_cmd->add_option("--optimizer", train_opt, "optimizer tag");
    train_cmd->add_option("--epochs", train_epochs, "iterations per training phase");
    train_cmd->add_option("--seed", train_seed, "seed");
    train_cmd->add_option("--out", train_out, "model file path");

    // ---- evaluate ----
    auto* eval_cmd = app.add_subcommand("evaluate", "evaluate a model file on a CSV");
    std::string eval_model, eval_csv, eval_label = "label", eval_out = "metrics.csv";
    int eval_pos = 1;
    eval_cmd->add_option("--model", eval_model, "model file")->required();
    eval_cmd->add_option("--csv", eval_csv, "data CSV")->required();
    eval_cmd->add_option("--label-column", eval_label, "label column name");
    eval_cmd->add_option("--positive-class", eval_pos, "positive class id");
    eval_cmd->add_option("--out", eval_out, "metrics CSV path");

    // ---- gridsearch ----
    auto* grid_cmd = app.add_subcommand("gridsearch", "run the optimizer x activation grid");
    DataArgs grid_data;
    long grid_seed = -1;
    int grid_folds = -1, grid_workers = -1, grid_top = 10;
    std::string grid_out;
    grid_cmd->add_option("--config", grid_data.config_path, "config file")->required();
    grid_cmd->add_option("--seed", grid_seed, "master seed override");
    grid_cmd->add_option("--folds", grid_folds, "fold count override");
    grid_cmd->add_option("--workers", grid_workers, "worker thread count");
    grid_cmd->add_option("--top", grid_top, "top-N rows in the ranked file");
    grid_cmd->add_option("--out", grid_out, "output directory override");

    // ---- baselines ----
    auto* base_cmd = app.add_subcommand("baselines", "run the PCA baseline comparison");
    DataArgs base_data;
    long base_seed = -1;
    int base_folds = -1;
    std::string base_out;
    base_cmd->add_option("--config", base_data.config_path, "config file")->required();
    base_cmd->add_option("--seed", base_seed, "master seed override");
    base_cmd->add_option("--folds", base_folds, "fold count override");
    base_cmd->add_option("--out", base_out, "output directory override");

    // ---- report ----
    auto* report_cmd = app.add_subcommand("report", "render a table file as csv/markdown/svg");
    std::string report_table, report_fmt = "markdown", report_out;
    int report_top = 0;
    std::string report_sort = "accuracy";
    report_cmd->add_option("--table", report_table, "table CSV produced by gridsearch/baselines")
        ->required();
    report_cmd->add_option("--format", report_fmt, "csv | markdown | svg-bar");
    report_cmd->add_option("--top", report_top, "rank and keep the top N rows (0 = all, as-is)");
    report_cmd->add_option("--sort", report_sort, "rank key (accuracy, f1, mcc, auc, ...)");
    report_cmd->add_option("--out", report_out, "output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e); // prints help or the parse error
        return code == 0 ? 0 : 1;
    }

    if (synth_cmd->parsed()) {
        Dataset ds = synth_generate(spec);
        save_csv(ds, synth_out, synth_label);
        std::cout << "wrote " << synth_out << " (" << ds.n() << " x " << ds.d() << ", "
                  << ds.n_classes() << " classes)\n";
        return 0;
    }

    if (train_cmd->parsed()) {
        ExperimentConfig config = train_data.make();
        if (train_epochs >= 0) config.epochs = train_epochs;
        if (train_seed >= 0) {
            config.seed = uint64_t(train_seed);
            config.synth.seed = config.seed;
        }
        config.architectures = {parse_arch(train_arch)};
        config.activations = {act_parse(train_act)};
        config.optimizers = {optimizer_parse(train_opt)};
        config.validate();

        Dataset ds = config_dataset(config);
        std::vector<int> all(ds.n());
        for (int i = 0; i < ds.n(); ++i) all[i] = i;
        StackedModel model =
            train_pipeline(ds, all, config.architectures[0], config.activations[0],
                           config.optimizers[0], config, config.seed);
        save_stack_file(model, train_out);

        Prediction pred = predict(model, ds.features);
        ConfusionMatrix cm = confusion(ds.labels, pred.labels, config.positive_class);
        MetricsReport rep = metrics_report(cm);
        std::cout << "wrote " << train_out << "; training accuracy "
                  << (rep.accuracy ? *rep.accuracy : 0) << "\n";
        return 0;
    }

    if (eval_cmd->parsed()) {
        StackedModel model = load_stack_file(eval_model);
        Dataset ds = load_csv(eval_csv, eval_label);
        if (eval_pos < 0 || eval_pos >= model.head.classes())
            throw UsageError("positive class out of range for this model");
        Prediction pred = predict(model, ds.features);
        ConfusionMatrix cm = confusion(ds.labels, pred.labels, eval_pos);

        ResultRow row;
        for (const auto& e : model.encoders) row.architecture.push_back(e.hidden());
        row.optimizer_tag = "-";
        row.activation_tag =
            model.encoders.empty() ? "-" : act_name(model.encoders.front().activation.kind);
        row.folds = {metrics_report(cm, pred.probs, ds.labels, eval_pos)};
        row.aggregate = aggregate_folds(row.folds);
        ResultTable table;
        table.rows = {row};
        emit_report(table, ReportFormat::Csv, eval_out);
        std::cout << "wrote " << eval_out << "\n";
        return 0;
    }

    if (grid_cmd->parsed()) {
        ExperimentConfig config = grid_data.make();
        if (grid_seed >= 0) {
            config.seed = uint64_t(grid_seed);
            config.synth.seed = config.seed;
        }
        if (grid_folds > 0) config.k_folds = grid_folds;
        if (grid_workers > 0) config.workers = grid_workers;
        if (!grid_out.empty()) config.out_dir = grid_out;
        config.validate();
        fs::create_directories(config.out_dir);

        ResultTable table = run_grid(config);
        ResultTable ranked = rank_table(table, "accuracy", 0); // full, ranked
        emit_report(ranked, ReportFormat::Csv, (fs::path(config.out_dir) / "grid.csv").string());
        ResultTable top = rank_table(table, "accuracy", grid_top);
        emit_report(top, ReportFormat::Csv,
                    (fs::path(config.out_dir) / ("grid_top" + std::to_string(grid_top) + ".csv"))
                        .string());
        write_text((fs::path(config.out_dir) / "config_used.txt").string(), config_text(config));
        int failed = 0;
        for (const auto& r : table.rows) failed += r.failed ? 1 : 0;
        std::cout << "grid: " << table.rows.size() << " rows (" << failed << " failed) -> "
                  << config.out_dir << "\n";
        return 0;
    }

    if (base_cmd->parsed()) {
        ExperimentConfig config = base_data.make();
        if (base_seed >= 0) {
            config.seed = uint64_t(base_seed);
            config.synth.seed = config.seed;
        }
        if (base_folds > 0) config.k_folds = base_folds;
        if (!base_out.empty()) config.out_dir = base_out;
        config.validate();
        fs::create_directories(config.out_dir);

        Dataset ds = config_dataset(config);
        ResultTable table = compare_baselines(ds, config);
        emit_report(table, ReportFormat::Csv,
                    (fs::path(config.out_dir) / "baselines.csv").string());
        std::cout << "baselines: " << table.rows.size() << " rows -> " << config.out_dir << "\n";
        return 0;
    }

    if (report_cmd->parsed()) {
        ResultTable table = parse_table_csv(report_table);
        if (report_top > 0) table = rank_table(table, report_sort, report_top);
        emit_report(table, report_format_parse(report_fmt), report_out);
        std::cout << "wrote " << report_out << "\n";
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const BadConfig& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const MissingFile& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const MalformedRow& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const UnknownLabelColumn& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const SingleClass& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const ConstantFeature& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const BadSpec& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
