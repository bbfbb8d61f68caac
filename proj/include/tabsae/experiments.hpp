#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tabsae/baselines.hpp"
#include "tabsae/dataset.hpp"
#include "tabsae/metrics.hpp"
#include "tabsae/stack.hpp"

namespace tabsae {

struct Hyperparams {
    double lambda = 1e-4;         // autoencoder L2
    double rho = 0.05;            // sparsity proportion
    double beta = 1.0;            // sparsity weight
    double lambda_softmax = 1e-4; // classifier L2
    double lambda_stack = 1e-4;   // fine-tune L2
};

/// Everything a grid / CV / baseline run needs. Loadable from a flat
/// key=value file; see load_config.
struct ExperimentConfig {
    std::string csv_path;            // empty: use the synthetic generator
    std::string label_column = "label";
    SynthSpec synth;

    std::vector<std::vector<int>> architectures = {{30, 15}};
    std::vector<ActivationKind> activations = {ActivationKind::ArcTan};
    std::vector<OptimizerKind> optimizers = {OptimizerKind::Scg};

    int k_folds = 5;
    uint64_t seed = 42;
    int epochs = 100;
    Hyperparams hyper;
    int positive_class = 1;
    NormMethod norm_method = NormMethod::ZScore;

    std::vector<std::string> baselines = {"pca-1nn", "pca-3nn", "pca-5nn",
                                          "pca-svm", "pca-rbf", "pca-softmax"};
    double pca_variance_target = 0.95;
    int pca_k = -1; // >=1 overrides the variance target
    double svm_c = 1.0;
    double svm_gamma = 0; // <=0: 1/m heuristic
    int rbf_centers = 10;

    std::string out_dir = ".";
    int workers = 1;

    void validate() const; // throws BadConfig
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string config_text(const ExperimentConfig& config); // canonical key=value form

/// Materialize the configured data source (CSV or synthetic).
Dataset config_dataset(const ExperimentConfig& config);

struct ResultRow {
    std::vector<int> architecture;    // empty for baseline rows
    std::string optimizer_tag;        // method tag, or the baseline name
    std::string activation_tag;       // "-" for baseline rows
    FoldAggregate aggregate;
    std::vector<MetricsReport> folds;
    double wall_seconds = 0;          // informational; never serialized
    bool failed = false;
    std::string error;
};

struct ResultTable {
    std::vector<ResultRow> rows;
    std::string config_snapshot; // canonical config_text of the producing run
    uint64_t seed = 0;
    int k_folds = 0;
};

/// Train the full pipeline (normalize, pretrain, softmax, fine-tune) on the
/// given rows of ds. This is the per-fold trainer; fit statistics never see
/// rows outside `rows`.
StackedModel train_pipeline(const Dataset& ds, const std::vector<int>& rows,
                            const std::vector<int>& architecture, ActivationKind activation,
                            OptimizerKind optimizer, const ExperimentConfig& config,
                            uint64_t seed);

/// K-fold cross-validation of one (architecture, activation, optimizer)
/// cell. The fold plan comes from config.seed so every cell shares it;
/// train_seed (default config.seed) drives the training randomness.
ResultRow run_cv(const Dataset& ds, const std::vector<int>& architecture,
                 ActivationKind activation, OptimizerKind optimizer,
                 const ExperimentConfig& config,
                 std::optional<uint64_t> train_seed = std::nullopt);

/// Cartesian sweep over architectures x optimizers x activations. Rows get
/// seeds mixed from (config.seed, row index) and may run on config.workers
/// threads; output is identical either way.
ResultTable run_grid(const ExperimentConfig& config);

/// Stable descending sort by a metric (name from kMetricNames), ties broken
/// by (optimizer tag, activation tag); truncates to top_n (<=0: keep all).
/// Failed rows sort last.
ResultTable rank_table(const ResultTable& table, const std::string& sort_key = "accuracy",
                       int top_n = 10);

/// The baseline comparison table: one row per configured baseline plus the
/// proposed stack, all under one shared fold plan; PCA and normalization fit
/// on train folds only.
ResultTable compare_baselines(const Dataset& ds, const ExperimentConfig& config);

enum class ReportFormat { Csv, Markdown, SvgBar };

ReportFormat report_format_parse(const std::string& name);

std::string render_report(const ResultTable& table, ReportFormat format);
void emit_report(const ResultTable& table, ReportFormat format, const std::string& path);

/// Parse a table back from its CSV rendering (fold detail is not stored).
ResultTable parse_table_csv(const std::string& path);

} // namespace tabsae
