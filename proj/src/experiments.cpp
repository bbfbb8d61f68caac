#include "tabsae/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "tabsae/errors.hpp"

namespace tabsae {

namespace {

std::string f6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string cell(const std::optional<double>& v) { return v ? f6(*v) : "NA"; }

std::string arch_tag(const std::vector<int>& arch, const char* sep) {
    if (arch.empty()) return "-";
    std::string out;
    for (size_t i = 0; i < arch.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(arch[i]);
    }
    return out;
}

std::vector<std::string> split(const std::string& s, char delim) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == delim) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

long parse_long(const std::string& v, const std::string& key) {
    try {
        size_t used = 0;
        long x = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw BadConfig("bad integer for " + key + ": '" + v + "'");
    }
}

double parse_double(const std::string& v, const std::string& key) {
    try {
        size_t used = 0;
        double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw BadConfig("bad number for " + key + ": '" + v + "'");
    }
}

const char* kTableHeader =
    "Layers,TrainAlgorithm,ActivationFunction,Accuracy,RMSE,Sensitivity,Specificity,"
    "Precision,MCC,F1-score,AUC,RMSEProb";

// the 9 metric columns, in table order, as indices into kMetricNames
const int kColumnMetric[9] = {0 /*accuracy*/, 1 /*error_rate (RMSE column)*/,
                              3 /*sensitivity*/, 4 /*specificity*/, 5 /*precision*/,
                              6 /*mcc*/, 7 /*f1*/, 8 /*auc*/, 2 /*rmse_prob*/};

} // namespace

void ExperimentConfig::validate() const {
    if (architectures.empty()) throw BadConfig("config: architectures must be nonempty");
    for (const auto& a : architectures) {
        if (a.empty()) throw BadConfig("config: an architecture has no layers");
        for (int w : a)
            if (w < 1) throw BadConfig("config: layer widths must be >= 1");
    }
    if (activations.empty()) throw BadConfig("config: activations must be nonempty");
    if (optimizers.empty()) throw BadConfig("config: optimizers must be nonempty");
    if (k_folds < 2) throw BadConfig("config: k_folds must be >= 2");
    if (epochs < 0) throw BadConfig("config: epochs must be >= 0");
    if (workers < 1) throw BadConfig("config: workers must be >= 1");
    if (positive_class < 0) throw BadConfig("config: positive_class must be >= 0");
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig config;
    bool synth_seed_set = false;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string s = strip(line);
        if (s.empty() || s[0] == '#') continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw BadConfig("config line " + std::to_string(line_no) + ": expected key=value");
        std::string key = strip(s.substr(0, eq));
        std::string value = strip(s.substr(eq + 1));

        if (key == "csv_path") {
            config.csv_path = value;
        } else if (key == "label_column") {
            config.label_column = value;
        } else if (key == "synth_samples") {
            config.synth.n_samples = int(parse_long(value, key));
        } else if (key == "synth_continuous") {
            config.synth.n_continuous = int(parse_long(value, key));
        } else if (key == "synth_binary") {
            config.synth.n_binary = int(parse_long(value, key));
        } else if (key == "synth_classes") {
            config.synth.n_classes = int(parse_long(value, key));
        } else if (key == "synth_separation") {
            config.synth.class_separation = parse_double(value, key);
        } else if (key == "synth_noise") {
            config.synth.noise_std = parse_double(value, key);
        } else if (key == "synth_seed") {
            config.synth.seed = uint64_t(parse_long(value, key));
            synth_seed_set = true;
        } else if (key == "architectures") {
            config.architectures.clear();
            for (const std::string& archs : split(value, ';')) {
                std::vector<int> arch;
                for (const std::string& w : split(archs, ','))
                    arch.push_back(int(parse_long(strip(w), key)));
                config.architectures.push_back(arch);
            }
        } else if (key == "activations") {
            config.activations.clear();
            for (const std::string& a : split(value, ','))
                config.activations.push_back(act_parse(strip(a)));
        } else if (key == "optimizers") {
            config.optimizers.clear();
            for (const std::string& o : split(value, ','))
                config.optimizers.push_back(optimizer_parse(strip(o)));
        } else if (key == "k_folds") {
            config.k_folds = int(parse_long(value, key));
        } else if (key == "seed") {
            config.seed = uint64_t(parse_long(value, key));
        } else if (key == "epochs") {
            config.epochs = int(parse_long(value, key));
        } else if (key == "lambda") {
            config.hyper.lambda = parse_double(value, key);
        } else if (key == "rho") {
            config.hyper.rho = parse_double(value, key);
        } else if (key == "beta") {
            config.hyper.beta = parse_double(value, key);
        } else if (key == "lambda_softmax") {
            config.hyper.lambda_softmax = parse_double(value, key);
        } else if (key == "lambda_stack") {
            config.hyper.lambda_stack = parse_double(value, key);
        } else if (key == "positive_class") {
            config.positive_class = int(parse_long(value, key));
        } else if (key == "norm_method") {
            config.norm_method = norm_method_parse(value);
        } else if (key == "baselines") {
            config.baselines.clear();
            for (const std::string& b : split(value, ','))
                config.baselines.push_back(strip(b));
        } else if (key == "pca_variance_target") {
            config.pca_variance_target = parse_double(value, key);
        } else if (key == "pca_k") {
            config.pca_k = int(parse_long(value, key));
        } else if (key == "svm_c") {
            config.svm_c = parse_double(value, key);
        } else if (key == "svm_gamma") {
            config.svm_gamma = parse_double(value, key);
        } else if (key == "rbf_centers") {
            config.rbf_centers = int(parse_long(value, key));
        } else if (key == "out_dir") {
            config.out_dir = value;
        } else if (key == "workers") {
            config.workers = int(parse_long(value, key));
        } else {
            throw BadConfig("unknown config key: " + key);
        }
    }
    if (!synth_seed_set) config.synth.seed = config.seed;
    config.validate();
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile("cannot open config " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_text(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "csv_path=" << c.csv_path << '\n';
    out << "label_column=" << c.label_column << '\n';
    out << "synth_samples=" << c.synth.n_samples << '\n';
    out << "synth_continuous=" << c.synth.n_continuous << '\n';
    out << "synth_binary=" << c.synth.n_binary << '\n';
    out << "synth_classes=" << c.synth.n_classes << '\n';
    out << "synth_separation=" << c.synth.class_separation << '\n';
    out << "synth_noise=" << c.synth.noise_std << '\n';
    out << "synth_seed=" << c.synth.seed << '\n';
    std::string archs;
    for (size_t i = 0; i < c.architectures.size(); ++i) {
        if (i) archs += ';';
        archs += arch_tag(c.architectures[i], ",");
    }
    out << "architectures=" << archs << '\n';
    std::string acts;
    for (size_t i = 0; i < c.activations.size(); ++i) {
        if (i) acts += ',';
        acts += act_name(c.activations[i]);
    }
    out << "activations=" << acts << '\n';
    std::string opts;
    for (size_t i = 0; i < c.optimizers.size(); ++i) {
        if (i) opts += ',';
        opts += optimizer_name(c.optimizers[i]);
    }
    out << "optimizers=" << opts << '\n';
    out << "k_folds=" << c.k_folds << '\n';
    out << "seed=" << c.seed << '\n';
    out << "epochs=" << c.epochs << '\n';
    out << "lambda=" << c.hyper.lambda << '\n';
    out << "rho=" << c.hyper.rho << '\n';
    out << "beta=" << c.hyper.beta << '\n';
    out << "lambda_softmax=" << c.hyper.lambda_softmax << '\n';
    out << "lambda_stack=" << c.hyper.lambda_stack << '\n';
    out << "positive_class=" << c.positive_class << '\n';
    out << "norm_method=" << norm_method_name(c.norm_method) << '\n';
    std::string bl;
    for (size_t i = 0; i < c.baselines.size(); ++i) {
        if (i) bl += ',';
        bl += c.baselines[i];
    }
    out << "baselines=" << bl << '\n';
    out << "pca_variance_target=" << c.pca_variance_target << '\n';
    out << "pca_k=" << c.pca_k << '\n';
    out << "svm_c=" << c.svm_c << '\n';
    out << "svm_gamma=" << c.svm_gamma << '\n';
    out << "rbf_centers=" << c.rbf_centers << '\n';
    out << "out_dir=" << c.out_dir << '\n';
    out << "workers=" << c.workers << '\n';
    return out.str();
}

Dataset config_dataset(const ExperimentConfig& config) {
    if (!config.csv_path.empty()) return load_csv(config.csv_path, config.label_column);
    return synth_generate(config.synth);
}

StackedModel train_pipeline(const Dataset& ds, const std::vector<int>& rows,
                            const std::vector<int>& architecture, ActivationKind activation,
                            OptimizerKind optimizer, const ExperimentConfig& config,
                            uint64_t seed) {
    Dataset train = ds.subset(rows);
    NormalizationParams norm = normalize_fit(train.features, config.norm_method);
    Matrix xn = normalize_apply(norm, train.features);

    OptimizerOptions options;
    options.max_iter = config.epochs;

    Activation act(activation);
    std::vector<AutoencoderLayer> encoders =
        stack_pretrain(xn, architecture, act, optimizer, options, config.hyper.lambda,
                       config.hyper.rho, config.hyper.beta, mix_seed(seed, 1));

    Matrix h = xn;
    for (const auto& e : encoders) h = encode(e, h);
    SoftmaxClassifier head = softmax_train(h, train.labels, ds.n_classes(), optimizer, options,
                                           config.hyper.lambda_softmax, mix_seed(seed, 2));

    StackedModel model;
    model.encoders = std::move(encoders);
    model.head = std::move(head);
    model.input_norm = std::move(norm);
    model = fine_tune(std::move(model), xn, train.labels, optimizer, options,
                      config.hyper.lambda_stack, mix_seed(seed, 3));
    return model;
}

ResultRow run_cv(const Dataset& ds, const std::vector<int>& architecture,
                 ActivationKind activation, OptimizerKind optimizer,
                 const ExperimentConfig& config, std::optional<uint64_t> train_seed) {
    config.validate();
    ds.validate();
    if (config.positive_class >= ds.n_classes())
        throw BadConfig("positive_class out of range for this dataset");

    uint64_t base_seed = train_seed.value_or(config.seed);
    auto t0 = std::chrono::steady_clock::now();

    ResultRow row;
    row.architecture = architecture;
    row.optimizer_tag = optimizer_name(optimizer);
    row.activation_tag = act_name(activation);

    try {
        FoldPlan plan = kfold_split(ds.n(), config.k_folds, config.seed);
        for (int f = 0; f < config.k_folds; ++f) {
            StackedModel model = train_pipeline(ds, plan.train_indices(f), architecture,
                                                activation, optimizer, config,
                                                mix_seed(base_seed, f));
            Dataset test = ds.subset(plan.test_indices(f));
            Prediction pred = predict(model, test.features);
            ConfusionMatrix cm = confusion(test.labels, pred.labels, config.positive_class);
            row.folds.push_back(
                metrics_report(cm, pred.probs, test.labels, config.positive_class));
        }
        row.aggregate = aggregate_folds(row.folds);
    } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
        row.folds.clear();
    }
    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

ResultTable run_grid(const ExperimentConfig& config) {
    config.validate();
    Dataset ds = config_dataset(config);

    struct Cell {
        const std::vector<int>* arch;
        ActivationKind act;
        OptimizerKind opt;
    };
    std::vector<Cell> cells;
    for (const auto& arch : config.architectures)
        for (OptimizerKind opt : config.optimizers)
            for (ActivationKind act : config.activations) cells.push_back({&arch, act, opt});

    ResultTable table;
    table.config_snapshot = config_text(config);
    table.seed = config.seed;
    table.k_folds = config.k_folds;
    table.rows.resize(cells.size());

    std::atomic<size_t> next{0};
    auto work = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            try {
                table.rows[i] = run_cv(ds, *cells[i].arch, cells[i].act, cells[i].opt, config,
                                       mix_seed(config.seed, i));
            } catch (const std::exception& e) {
                table.rows[i].architecture = *cells[i].arch;
                table.rows[i].optimizer_tag = optimizer_name(cells[i].opt);
                table.rows[i].activation_tag = act_name(cells[i].act);
                table.rows[i].failed = true;
                table.rows[i].error = e.what();
            }
        }
    };

    int nthreads = std::min<int>(config.workers, int(cells.size()));
    if (nthreads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return table;
}

ResultTable rank_table(const ResultTable& table, const std::string& sort_key, int top_n) {
    if (table.rows.empty()) throw EmptyTable("rank_table: empty table");
    int metric = metric_index(sort_key);
    if (metric < 0) throw BadConfig("rank_table: unknown sort key '" + sort_key + "'");

    ResultTable out = table;
    std::stable_sort(out.rows.begin(), out.rows.end(),
                     [&](const ResultRow& a, const ResultRow& b) {
                         auto va = a.failed ? std::nullopt : metric_value(a.aggregate.mean, metric);
                         auto vb = b.failed ? std::nullopt : metric_value(b.aggregate.mean, metric);
                         if (va.has_value() != vb.has_value()) return va.has_value();
                         if (va && vb && *va != *vb) return *va > *vb;
                         if (a.optimizer_tag != b.optimizer_tag)
                             return a.optimizer_tag < b.optimizer_tag;
                         return a.activation_tag < b.activation_tag;
                     });
    if (top_n > 0 && int(out.rows.size()) > top_n) out.rows.resize(top_n);
    return out;
}

namespace {

// one baseline row under the shared fold plan
ResultRow run_baseline(const Dataset& ds, const FoldPlan& plan, const std::string& name,
                       const ExperimentConfig& config, uint64_t seed) {
    ResultRow row;
    row.optimizer_tag = name;
    row.activation_tag = "-";
    auto t0 = std::chrono::steady_clock::now();
    try {
        const int pos = config.positive_class;
        for (int f = 0; f < plan.k; ++f) {
            std::vector<int> tr = plan.train_indices(f), te = plan.test_indices(f);
            Dataset train = ds.subset(tr), test = ds.subset(te);
            NormalizationParams norm = normalize_fit(train.features, config.norm_method);
            Matrix xtr = normalize_apply(norm, train.features);
            Matrix xte = normalize_apply(norm, test.features);
            PcaModel pca = pca_fit(xtr, config.pca_variance_target, config.pca_k);
            Matrix ptr_ = pca_transform(pca, xtr);
            Matrix pte = pca_transform(pca, xte);
            uint64_t fold_seed = mix_seed(seed, f);

            std::vector<int> preds;
            MetricsReport rep;
            if (name == "pca-1nn" || name == "pca-3nn" || name == "pca-5nn") {
                int k = name[4] - '0';
                KnnResult knn = knn_predict_scored(ptr_, train.labels, pte, k, pos);
                ConfusionMatrix cm = confusion(test.labels, knn.labels, pos);
                rep = metrics_report(cm);
                rep.auc = roc_auc(knn.positive_fraction, test.labels, pos).auc;
            } else if (name == "pca-svm") {
                double gamma = config.svm_gamma > 0 ? config.svm_gamma : 1.0 / double(ptr_.cols());
                Vector pos_score(pte.rows());
                if (ds.n_classes() == 2) {
                    std::vector<int> ypm(train.labels.size());
                    for (size_t i = 0; i < ypm.size(); ++i)
                        ypm[i] = train.labels[i] == pos ? 1 : -1;
                    SvmModel svm = svm_train(ptr_, ypm, SvmKernel::Rbf, config.svm_c, gamma,
                                             1e-3, fold_seed);
                    pos_score = svm_decision(svm, pte);
                    preds.resize(pte.rows());
                    for (int i = 0; i < pte.rows(); ++i)
                        preds[i] = pos_score[i] >= 0 ? pos : (pos == 0 ? 1 : 0);
                } else {
                    // one-vs-all
                    Matrix scores(pte.rows(), ds.n_classes());
                    for (int c = 0; c < ds.n_classes(); ++c) {
                        std::vector<int> ypm(train.labels.size());
                        for (size_t i = 0; i < ypm.size(); ++i)
                            ypm[i] = train.labels[i] == c ? 1 : -1;
                        SvmModel svm = svm_train(ptr_, ypm, SvmKernel::Rbf, config.svm_c, gamma,
                                                 1e-3, mix_seed(fold_seed, c));
                        scores.col(c) = svm_decision(svm, pte);
                    }
                    preds.resize(pte.rows());
                    for (int i = 0; i < pte.rows(); ++i) {
                        int best = 0;
                        for (int c = 1; c < scores.cols(); ++c)
                            if (scores(i, c) > scores(i, best)) best = c;
                        preds[i] = best;
                    }
                    pos_score = scores.col(pos);
                }
                ConfusionMatrix cm = confusion(test.labels, preds, pos);
                rep = metrics_report(cm);
                rep.auc = roc_auc(pos_score, test.labels, pos).auc;
            } else if (name == "pca-rbf") {
                int k = std::min(config.rbf_centers, int(ptr_.rows()));
                RbfNetModel rbf = rbf_net_train(ptr_, train.labels, ds.n_classes(), k, fold_seed);
                Matrix scores = rbf_net_scores(rbf, pte);
                preds = rbf_net_predict(rbf, pte);
                ConfusionMatrix cm = confusion(test.labels, preds, pos);
                rep = metrics_report(cm);
                rep.auc = roc_auc(scores.col(pos), test.labels, pos).auc;
            } else if (name == "pca-softmax") {
                OptimizerOptions options;
                options.max_iter = config.epochs;
                SoftmaxClassifier clf =
                    softmax_train(ptr_, train.labels, ds.n_classes(), OptimizerKind::Lbfgs,
                                  options, config.hyper.lambda_softmax, fold_seed);
                Matrix probs = softmax_probs(clf, pte);
                preds.resize(pte.rows());
                for (int i = 0; i < pte.rows(); ++i) {
                    int best = 0;
                    for (int c = 1; c < probs.cols(); ++c)
                        if (probs(i, c) > probs(i, best)) best = c;
                    preds[i] = best;
                }
                ConfusionMatrix cm = confusion(test.labels, preds, pos);
                rep = metrics_report(cm, probs, test.labels, pos);
            } else {
                throw BadConfig("unknown baseline: " + name);
            }
            row.folds.push_back(rep);
        }
        row.aggregate = aggregate_folds(row.folds);
    } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
        row.folds.clear();
    }
    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

} // namespace

ResultTable compare_baselines(const Dataset& ds, const ExperimentConfig& config) {
    config.validate();
    ds.validate();
    FoldPlan plan = kfold_split(ds.n(), config.k_folds, config.seed);

    ResultTable table;
    table.config_snapshot = config_text(config);
    table.seed = config.seed;
    table.k_folds = config.k_folds;
    size_t row_index = 0;
    for (const std::string& name : config.baselines) {
        table.rows.push_back(run_baseline(ds, plan, name, config, mix_seed(config.seed, row_index)));
        ++row_index;
    }
    // the proposed pipeline, same plan
    table.rows.push_back(run_cv(ds, config.architectures.front(), config.activations.front(),
                                config.optimizers.front(), config, mix_seed(config.seed, row_index)));
    return table;
}

ReportFormat report_format_parse(const std::string& name) {
    if (name == "csv") return ReportFormat::Csv;
    if (name == "markdown") return ReportFormat::Markdown;
    if (name == "svg-bar") return ReportFormat::SvgBar;
    throw BadConfig("unknown report format: " + name);
}

namespace {

std::string row_cells(const ResultRow& row, int metric_column) {
    const int m = kColumnMetric[metric_column];
    if (row.failed) return "NA";
    return cell(metric_value(row.aggregate.mean, m));
}

std::string render_csv(const ResultTable& table) {
    std::ostringstream out;
    out << kTableHeader << '\n';
    for (const auto& row : table.rows) {
        out << arch_tag(row.architecture, "-") << ',' << row.optimizer_tag << ','
            << row.activation_tag;
        for (int c = 0; c < 9; ++c) out << ',' << row_cells(row, c);
        out << '\n';
    }
    return out.str();
}

std::string render_markdown(const ResultTable& table) {
    std::ostringstream out;
    out << "| Layers | TrainAlgorithm | ActivationFunction | Accuracy | RMSE | Sensitivity | "
           "Specificity | Precision | MCC | F1-score | AUC | RMSEProb |\n";
    out << "|---|---|---|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& row : table.rows) {
        out << "| " << (row.architecture.empty() ? "-" : "[" + arch_tag(row.architecture, ", ") + "]")
            << " | " << row.optimizer_tag << " | " << row.activation_tag;
        for (int c = 0; c < 9; ++c) out << " | " << row_cells(row, c);
        out << " |\n";
    }
    return out.str();
}

std::string render_svg(const ResultTable& table) {
    const int n = int(table.rows.size());
    const int bar_w = 18, pair_gap = 4, group_gap = 22;
    const int margin_l = 50, margin_r = 20, margin_t = 30, margin_b = 90;
    const int plot_h = 240;
    const int group_w = 2 * bar_w + pair_gap + group_gap;
    const int width = margin_l + n * group_w + margin_r;
    const int height = margin_t + plot_h + margin_b;

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "  <rect class=\"background\" x=\"0\" y=\"0\" width=\"" << width << "\" height=\""
        << height << "\" fill=\"white\"/>\n";
    // axis
    out << "  <line x1=\"" << margin_l << "\" y1=\"" << margin_t << "\" x2=\"" << margin_l
        << "\" y2=\"" << margin_t + plot_h << "\" stroke=\"black\"/>\n";
    out << "  <line x1=\"" << margin_l << "\" y1=\"" << margin_t + plot_h << "\" x2=\""
        << width - margin_r << "\" y2=\"" << margin_t + plot_h << "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        double v = tick * 0.25;
        int y = margin_t + plot_h - int(v * plot_h);
        out << "  <text x=\"" << margin_l - 6 << "\" y=\"" << y + 4
            << "\" font-size=\"10\" text-anchor=\"end\">" << f6(v).substr(0, 4) << "</text>\n";
    }

    for (int i = 0; i < n; ++i) {
        const auto& row = table.rows[i];
        double acc = !row.failed && row.aggregate.mean.accuracy ? *row.aggregate.mean.accuracy : 0;
        double f1v = !row.failed && row.aggregate.mean.f1 ? *row.aggregate.mean.f1 : 0;
        int x0 = margin_l + group_gap / 2 + i * group_w;
        int acc_h = int(acc * plot_h + 0.5), f1_h = int(f1v * plot_h + 0.5);
        out << "  <rect class=\"bar-accuracy\" x=\"" << x0 << "\" y=\""
            << margin_t + plot_h - acc_h << "\" width=\"" << bar_w << "\" height=\"" << acc_h
            << "\" fill=\"#4C78A8\"/>\n";
        out << "  <rect class=\"bar-f1\" x=\"" << x0 + bar_w + pair_gap << "\" y=\""
            << margin_t + plot_h - f1_h << "\" width=\"" << bar_w << "\" height=\"" << f1_h
            << "\" fill=\"#F58518\"/>\n";
        std::string label = row.architecture.empty()
                                ? row.optimizer_tag
                                : arch_tag(row.architecture, "-") + " " + row.optimizer_tag + " " +
                                      row.activation_tag;
        int lx = x0 + bar_w + pair_gap / 2;
        int ly = margin_t + plot_h + 10;
        out << "  <text x=\"" << lx << "\" y=\"" << ly << "\" font-size=\"9\" text-anchor=\"end\""
            << " transform=\"rotate(-45 " << lx << " " << ly << ")\">" << label << "</text>\n";
    }

    // legend
    int lx = margin_l, ly = height - 28;
    out << "  <rect class=\"legend\" x=\"" << lx << "\" y=\"" << ly
        << "\" width=\"12\" height=\"12\" fill=\"#4C78A8\"/>\n";
    out << "  <text x=\"" << lx + 16 << "\" y=\"" << ly + 10
        << "\" font-size=\"11\">Accuracy</text>\n";
    out << "  <rect class=\"legend\" x=\"" << lx + 100 << "\" y=\"" << ly
        << "\" width=\"12\" height=\"12\" fill=\"#F58518\"/>\n";
    out << "  <text x=\"" << lx + 116 << "\" y=\"" << ly + 10
        << "\" font-size=\"11\">F1-score</text>\n";
    out << "</svg>\n";
    return out.str();
}

} // namespace

std::string render_report(const ResultTable& table, ReportFormat format) {
    if (table.rows.empty()) throw EmptyTable("render_report: empty table");
    switch (format) {
    case ReportFormat::Csv: return render_csv(table);
    case ReportFormat::Markdown: return render_markdown(table);
    case ReportFormat::SvgBar: return render_svg(table);
    }
    throw Error("unknown report format");
}

void emit_report(const ResultTable& table, ReportFormat format, const std::string& path) {
    std::string body = render_report(table, format);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << body;
    if (!out) throw IoError("failed writing " + path);
}

ResultTable parse_table_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile("cannot open table " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty table file");
    if (strip(line) != kTableHeader)
        throw IoError("unexpected table header in " + path);

    ResultTable table;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (strip(line).empty()) continue;
        std::vector<std::string> cells = split(strip(line), ',');
        if (cells.size() != 12)
            throw MalformedRow(line_no, "expected 12 cells in table row");
        ResultRow row;
        if (cells[0] != "-") {
            for (const std::string& w : split(cells[0], '-'))
                row.architecture.push_back(int(parse_long(w, "Layers")));
        }
        row.optimizer_tag = cells[1];
        row.activation_tag = cells[2];
        bool any = false;
        for (int c = 0; c < 9; ++c) {
            if (cells[3 + c] == "NA") continue;
            metric_ref(row.aggregate.mean, kColumnMetric[c]) =
                parse_double(cells[3 + c], "metric");
            any = true;
        }
        row.failed = !any;
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace tabsae
