// Acceptance suite: runs every acceptance criterion end to end and prints
// one PASS/FAIL line per criterion. argv[1] must be the path to the tabsae
// CLI binary (used by the determinism criterion). Exits nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tabsae/autoencoder.hpp"
#include "tabsae/baselines.hpp"
#include "tabsae/dataset.hpp"
#include "tabsae/experiments.hpp"
#include "tabsae/metrics.hpp"
#include "tabsae/optimizers.hpp"
#include "tabsae/stack.hpp"
#include "test_util.hpp"

using namespace tabsae;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void note(const std::string& line) { g_notes.push_back(line); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void verdict(int criterion, const std::string& name, bool ok, const std::string& detail) {
    for (const auto& line : g_notes) std::printf("         %s\n", line.c_str());
    g_notes.clear();
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

// ---------------------------------------------------------------------------
// criterion 1: gradient suite
// ---------------------------------------------------------------------------

struct AeCase {
    AutoencoderLayer layer;
    Matrix x;
};

AeCase random_ae_case(ActivationKind kind, Rng& rng) {
    AeCase c;
    int h = 2 + rng.uniform_int(4), d = 2 + rng.uniform_int(4), n = 2 + rng.uniform_int(6);
    c.layer.activation = Activation(kind);
    c.layer.lambda = 1e-3;
    c.layer.rho = 0.05;
    c.layer.beta = 0.7;
    c.layer.w1.resize(h, d);
    c.layer.b1.resize(h);
    c.layer.w2.resize(d, h);
    c.layer.b2.resize(d);
    c.x.resize(n, d);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < d; ++j) c.layer.w1(i, j) = 0.6 * rng.normal();
    for (int i = 0; i < h; ++i) c.layer.b1[i] = 0.3 * rng.normal();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < h; ++j) c.layer.w2(i, j) = 0.6 * rng.normal();
    for (int i = 0; i < d; ++i) c.layer.b2[i] = 0.3 * rng.normal();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) c.x(i, j) = rng.normal();

    int kink_count = 0;
    auto kinks = act_kinks(c.layer.activation, &kink_count);
    if (kink_count > 0) {
        for (int attempt = 0; attempt < 50; ++attempt) {
            Matrix z = (c.x * c.layer.w1.transpose()).rowwise() + c.layer.b1.transpose();
            double closest = 1e300;
            for (int i = 0; i < z.rows(); ++i)
                for (int j = 0; j < z.cols(); ++j)
                    for (int k = 0; k < kink_count; ++k)
                        closest = std::min(closest, std::fabs(z(i, j) - kinks[k]));
            if (closest > 5e-3) break;
            c.layer.b1.array() += 0.011;
        }
    }
    return c;
}

bool kind_has_kinks(ActivationKind kind) {
    int count = 0;
    act_kinks(Activation(kind), &count);
    return count > 0;
}

void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string first_failure;

    for (ActivationKind kind : all_activations()) {
        Rng rng(uint64_t(kind) * 1009 + 5);
        double tol = kind_has_kinks(kind) ? 1e-4 : 1e-6;
        for (int trial = 0; trial < 20; ++trial) {
            AeCase c = random_ae_case(kind, rng);
            Objective obj = ae_objective(c.layer, c.x);
            Vector theta = ae_pack(c.layer);
            Vector analytic(theta.size());
            obj.value_grad(theta, analytic);
            Vector numeric = finite_diff_grad(obj, theta, 1e-5);
            if (testutil::rel_err(analytic, numeric) > tol) {
                ok = false;
                if (first_failure.empty()) first_failure = std::string("ae/") + act_name(kind);
            }
        }
    }

    {
        Rng rng(801);
        for (int trial = 0; trial < 20; ++trial) {
            int cc = 2 + rng.uniform_int(3), m = 2 + rng.uniform_int(4);
            int n = cc + rng.uniform_int(6);
            SoftmaxClassifier clf;
            clf.w.resize(cc, m);
            clf.b.resize(cc);
            clf.lambda = 1e-3;
            for (int i = 0; i < cc; ++i)
                for (int j = 0; j < m; ++j) clf.w(i, j) = 0.5 * rng.normal();
            for (int i = 0; i < cc; ++i) clf.b[i] = 0.2 * rng.normal();
            Matrix h(n, m);
            std::vector<int> y(n);
            for (int i = 0; i < n; ++i) {
                y[i] = i < cc ? i : rng.uniform_int(cc);
                for (int j = 0; j < m; ++j) h(i, j) = rng.normal();
            }
            Objective obj;
            obj.dim = cc * m + cc;
            obj.value_grad = [&](const Vector& theta, Vector& grad) {
                SoftmaxClassifier tmp = clf;
                int at = 0;
                for (int i = 0; i < cc; ++i)
                    for (int j = 0; j < m; ++j) tmp.w(i, j) = theta[at++];
                for (int i = 0; i < cc; ++i) tmp.b[i] = theta[at++];
                SoftmaxGradients g;
                double f = softmax_loss_grad(tmp, h, y, &g);
                grad.resize(theta.size());
                at = 0;
                for (int i = 0; i < cc; ++i)
                    for (int j = 0; j < m; ++j) grad[at++] = g.w(i, j);
                for (int i = 0; i < cc; ++i) grad[at++] = g.b[i];
                return f;
            };
            Vector theta(obj.dim);
            int at = 0;
            for (int i = 0; i < cc; ++i)
                for (int j = 0; j < m; ++j) theta[at++] = clf.w(i, j);
            for (int i = 0; i < cc; ++i) theta[at++] = clf.b[i];
            Vector analytic(obj.dim);
            obj.value_grad(theta, analytic);
            Vector numeric = finite_diff_grad(obj, theta, 1e-6);
            if (testutil::rel_err(analytic, numeric) > 1e-6) {
                ok = false;
                if (first_failure.empty()) first_failure = "softmax";
            }
        }
    }

    {
        Rng rng(802);
        for (int trial = 0; trial < 20; ++trial) {
            const int d = 4, n = 6;
            Matrix x(n, d);
            std::vector<int> y(n);
            for (int i = 0; i < n; ++i) {
                y[i] = i % 2;
                for (int j = 0; j < d; ++j) x(i, j) = rng.normal();
            }
            StackedModel model;
            int in = d;
            for (int hsize : {3, 2}) {
                AutoencoderLayer layer;
                layer.activation = Activation(ActivationKind::TanH);
                layer.w1.resize(hsize, in);
                layer.b1.resize(hsize);
                layer.w2 = Matrix::Zero(in, hsize);
                layer.b2 = Vector::Zero(in);
                for (int i = 0; i < hsize; ++i)
                    for (int j = 0; j < in; ++j) layer.w1(i, j) = 0.5 * rng.normal();
                for (int i = 0; i < hsize; ++i) layer.b1[i] = 0.2 * rng.normal();
                model.encoders.push_back(std::move(layer));
                in = hsize;
            }
            model.head.w.resize(2, in);
            model.head.b.resize(2);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < in; ++j) model.head.w(i, j) = 0.5 * rng.normal();
            for (int i = 0; i < 2; ++i) model.head.b[i] = 0.2 * rng.normal();
            model.lambda_stack = 1e-3;

            Objective obj;
            obj.dim = int(stack_pack(model).size());
            obj.value_grad = [&](const Vector& theta, Vector& grad) {
                StackedModel tmp = model;
                stack_unpack(theta, tmp);
                return stack_loss_grad(tmp, x, y, &grad);
            };
            Vector theta = stack_pack(model);
            Vector analytic(theta.size());
            obj.value_grad(theta, analytic);
            Vector numeric = finite_diff_grad(obj, theta, 1e-5);
            if (testutil::rel_err(analytic, numeric) > 1e-6) {
                ok = false;
                if (first_failure.empty()) first_failure = "fine-tune";
            }
        }
    }

    double dt = seconds_since(t0);
    if (dt >= 60.0) ok = false;
    char detail[160];
    std::snprintf(detail, sizeof(detail), "17 activations x 20 + softmax + fine-tune, %.1fs%s%s",
                  dt, first_failure.empty() ? "" : ", first failure: ", first_failure.c_str());
    verdict(1, "gradient suite vs central finite differences", ok, detail);
}

// ---------------------------------------------------------------------------
// criterion 2: optimizer suite
// ---------------------------------------------------------------------------

void criterion_2() {
    auto t0 = std::chrono::steady_clock::now();

    std::string failures;
    int cells = 0, failed_cells = 0;
    for (double cond : {1e1, 1e2, 1e3, 1e4}) {
        for (int p : {20, 50}) {
            Rng rng(uint64_t(cond) * 31 + p);
            testutil::Quadratic quad = testutil::random_quadratic(p, cond, rng);
            Objective obj = quad.objective();
            Vector theta0(p);
            for (int i = 0; i < p; ++i) theta0[i] = rng.normal();
            for (OptimizerKind kind : all_optimizers()) {
                OptimizerOptions options;
                options.max_iter = 500;
                MinimizeResult res = minimize(obj, theta0, kind, options);
                Vector g;
                obj.value_grad(res.theta, g);
                ++cells;
                if (!(g.lpNorm<Eigen::Infinity>() <= 1e-5)) {
                    ++failed_cells;
                    char buf[96];
                    std::snprintf(buf, sizeof(buf), " %s@cond=%.0e/P=%d(|g|=%.1e)",
                                  optimizer_name(kind), cond, p, g.lpNorm<Eigen::Infinity>());
                    failures += buf;
                }
            }
        }
    }
    bool quadratics_ok = failed_cells == 0;
    if (!quadratics_ok) {
        note("SPD quadratic failures (" + std::to_string(failed_cells) + " of " +
             std::to_string(cells) + " method/instance cells):" + failures);
        note("the gradient-only methods cannot close ten orders of magnitude in 500 iterations");
        note("once the condition number reaches ~1e3 (classical ((k-1)/(k+1))^2 rate bound);");
        note("the Newton-type methods pass the whole envelope. This is a property of the");
        note("methods themselves, not of this implementation; details in the build notes.");
    }

    bool rosen_ok = true;
    {
        Objective obj = testutil::rosenbrock();
        Vector start(2);
        start << -1.2, 1.0;
        for (OptimizerKind kind : {OptimizerKind::Lbfgs, OptimizerKind::Qnewton,
                                   OptimizerKind::Mnewton, OptimizerKind::Newton0,
                                   OptimizerKind::Pnewton0}) {
            OptimizerOptions options;
            options.max_iter = 1000;
            options.grad_tol = 1e-6;
            MinimizeResult res = minimize(obj, start, kind, options);
            Vector g;
            obj.value_grad(res.theta, g);
            Vector solution(2);
            solution << 1, 1;
            if (g.lpNorm<Eigen::Infinity>() > 1e-6 || (res.theta - solution).norm() > 1e-4)
                rosen_ok = false;
        }
    }

    bool wolfe_ok = true;
    {
        Rng rng(271);
        testutil::Quadratic quad = testutil::random_quadratic(10, 1000.0, rng);
        testutil::Logistic lg = testutil::random_logistic(40, 6, 99);
        for (int problem = 0; problem < 2; ++problem) {
            Objective obj = problem == 0 ? quad.objective() : lg.objective();
            Vector theta0 = Vector::Zero(obj.dim);
            if (problem == 0)
                for (int i = 0; i < obj.dim; ++i) theta0[i] = rng.normal();
            for (OptimizerKind kind : all_optimizers()) {
                OptimizerOptions options;
                options.max_iter = 200;
                const double c1 = options.wolfe_c1;
                const double c2 = default_wolfe_c2(kind);
                options.step_observer = [&](const StepRecord& step) {
                    if (!step.line_searched) return;
                    if (step.f1 > step.f0 + c1 * step.alpha * step.slope0 + 1e-12)
                        wolfe_ok = false;
                    if (std::fabs(step.slope1) > c2 * std::fabs(step.slope0) + 1e-12)
                        wolfe_ok = false;
                };
                minimize(obj, theta0, kind, options);
            }
        }
    }

    double dt = seconds_since(t0);
    bool ok = quadratics_ok && rosen_ok && wolfe_ok && dt < 120.0;
    char detail[200];
    std::snprintf(
        detail, sizeof(detail),
        "quadratic envelope %s (%d/%d cells), Rosenbrock %s, Wolfe-instrumented %s, %.1fs",
        quadratics_ok ? "pass" : "FAIL", cells - failed_cells, cells,
        rosen_ok ? "pass" : "FAIL", wolfe_ok ? "pass" : "FAIL", dt);
    verdict(2, "optimizer suite", ok, detail);
}

// ---------------------------------------------------------------------------
// criterion 3: metric oracle
// ---------------------------------------------------------------------------

void criterion_3() {
    bool ok = true;
    Rng rng(33);
    for (int trial = 0; trial < 1000; ++trial) {
        ConfusionMatrix cm{rng.uniform_int(30), rng.uniform_int(30), rng.uniform_int(30),
                           rng.uniform_int(30)};
        if (cm.total() == 0) continue;
        MetricsReport r = metrics_report(cm);
        double tp = double(cm.tp), fp = double(cm.fp), tn = double(cm.tn), fn = double(cm.fn);
        double total = tp + fp + tn + fn;
        auto close = [](double a, double b) { return std::fabs(a - b) <= 1e-12; };
        if (!close(*r.accuracy, (tp + tn) / total)) ok = false;
        if (!close(*r.error_rate, 1.0 - (tp + tn) / total)) ok = false;
        if (tp + fn > 0 && !close(*r.sensitivity, tp / (tp + fn))) ok = false;
        if (tp + fn == 0 && r.sensitivity) ok = false;
        if (tn + fp > 0 && !close(*r.specificity, tn / (tn + fp))) ok = false;
        if (tp + fp > 0 && !close(*r.precision, tp / (tp + fp))) ok = false;
        double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
        double mcc = denom > 0 ? (tp * tn - fp * fn) / std::sqrt(denom) : 0.0;
        if (!close(*r.mcc, mcc)) ok = false;
        double f1 = 0.0;
        if (tp + fp > 0 && tp + fn > 0) {
            double prec = tp / (tp + fp), sens = tp / (tp + fn);
            f1 = (prec + sens) > 0 ? 2 * prec * sens / (prec + sens) : 0.0;
        }
        if (!close(*r.f1, f1)) ok = false;
    }

    for (int trial = 0; trial < 100; ++trial) {
        int n = 25 + rng.uniform_int(30);
        Vector scores(n);
        std::vector<int> labels(n);
        for (int i = 0; i < n; ++i) {
            scores[i] = rng.uniform_int(10) / 10.0; // ties on purpose
            labels[i] = rng.uniform_int(2);
        }
        labels[0] = 0;
        labels[1] = 1;
        double fast = roc_auc(scores, labels, 1).auc;
        double slow = testutil::pairwise_auc(scores, labels, 1);
        if (std::fabs(fast - slow) > 1e-12) ok = false;
    }
    verdict(3, "metric oracle (1000 confusion matrices, 100 AUC sets)", ok, "");
}

// ---------------------------------------------------------------------------
// criterion 4: baseline oracles
// ---------------------------------------------------------------------------

std::vector<int> brute_knn(const Matrix& train_x, const std::vector<int>& train_y,
                           const Matrix& query_x, int k) {
    std::vector<int> out(query_x.rows());
    for (int q = 0; q < query_x.rows(); ++q) {
        std::vector<std::pair<double, int>> all;
        for (int i = 0; i < train_x.rows(); ++i)
            all.push_back({(train_x.row(i) - query_x.row(q)).squaredNorm(), i});
        std::sort(all.begin(), all.end());
        std::vector<int> votes;
        for (int i = 0; i < k; ++i) votes.push_back(train_y[all[i].second]);
        int best_class = -1, best_count = -1;
        for (int i = 0; i < k; ++i) {
            int count = 0;
            for (int v : votes) count += v == votes[i];
            if (count > best_count) {
                best_count = count;
                best_class = votes[i];
            }
        }
        out[q] = best_class;
    }
    return out;
}

bool svm_kkt_ok(const SvmModel& model, double tol) {
    for (int s = 0; s < model.dual_coefs.size(); ++s)
        if (std::fabs(model.dual_coefs[s]) > model.c + 1e-12) return false;
    if (std::fabs(model.dual_coefs.sum()) > 1e-6) return false;
    Vector decision = svm_decision(model, model.support_vectors);
    for (int s = 0; s < model.dual_coefs.size(); ++s) {
        double a = std::fabs(model.dual_coefs[s]);
        if (a > 1e-8 * model.c && a < model.c * (1.0 - 1e-8)) {
            double y = model.dual_coefs[s] > 0 ? 1.0 : -1.0;
            if (std::fabs(y * decision[s] - 1.0) > 10 * tol) return false;
        }
    }
    return true;
}

void criterion_4() {
    bool knn_ok = true, pca_ok = true, svm_ok = true, xor_ok = true;
    Rng rng(44);

    for (int trial = 0; trial < 100; ++trial) {
        int n = 15 + rng.uniform_int(20);
        Matrix train(n, 3), query(6, 3);
        std::vector<int> y(n);
        for (int i = 0; i < n; ++i) {
            y[i] = rng.uniform_int(3);
            for (int j = 0; j < 3; ++j) train(i, j) = rng.uniform_int(5);
        }
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 3; ++j) query(i, j) = rng.uniform_int(5);
        int k = (trial % 2 == 0) ? 3 : 5;
        if (knn_predict(train, y, query, k) != brute_knn(train, y, query, k)) knn_ok = false;
    }

    for (int trial = 0; trial < 20; ++trial) {
        int n = 25 + rng.uniform_int(25), d = 4 + rng.uniform_int(3);
        Matrix x(n, d);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < d; ++j) x(i, j) = rng.normal() * (1.0 + j);
        int k = 1 + rng.uniform_int(d);
        PcaModel model = pca_fit(x, 0.95, k);
        Matrix centered = x.rowwise() - x.colwise().mean();
        Matrix cov = centered.transpose() * centered / double(n - 1);
        Vector evals;
        Matrix evecs;
        testutil::jacobi_eigen(cov, evals, evecs);
        for (int i = 0; i < k; ++i) {
            Vector a = model.components.row(i).transpose();
            Vector b = evecs.col(i);
            double err = std::min((a - b).lpNorm<Eigen::Infinity>(),
                                  (a + b).lpNorm<Eigen::Infinity>());
            if (err > 1e-8) pca_ok = false;
        }
    }

    {
        auto blobs = [&](int n, double gap, Matrix& x, std::vector<int>& y) {
            x.resize(n, 2);
            y.resize(n);
            for (int i = 0; i < n; ++i) {
                y[i] = (i % 2 == 0) ? 1 : -1;
                x(i, 0) = y[i] * gap / 2 + 0.5 * rng.normal();
                x(i, 1) = 0.5 * rng.normal();
            }
        };
        Matrix x;
        std::vector<int> y;
        for (double gap : {1.0, 3.0, 6.0}) {
            blobs(50, gap, x, y);
            if (!svm_kkt_ok(svm_train(x, y, SvmKernel::Linear, 1.0, 0.0, 1e-3, 3), 1e-3))
                svm_ok = false;
            if (!svm_kkt_ok(svm_train(x, y, SvmKernel::Rbf, 2.0, 0.7, 1e-3, 3), 1e-3))
                svm_ok = false;
        }
    }

    {
        Matrix x(4, 2);
        x << 0, 0, 1, 1, 0, 1, 1, 0;
        std::vector<int> y = {1, 1, -1, -1};
        SvmModel linear = svm_train(x, y, SvmKernel::Linear, 1.0, 0.0, 1e-3, 1);
        auto lp = svm_predict(linear, x);
        int lc = 0;
        for (int i = 0; i < 4; ++i) lc += lp[i] == y[i];
        if (double(lc) / 4 > 0.75) xor_ok = false;
        SvmModel rbf = svm_train(x, y, SvmKernel::Rbf, 10.0, 1.0, 1e-3, 1);
        auto rp = svm_predict(rbf, x);
        for (int i = 0; i < 4; ++i)
            if (rp[i] != y[i]) xor_ok = false;
    }

    char detail[120];
    std::snprintf(detail, sizeof(detail), "knn %s, pca %s, svm-kkt %s, xor %s",
                  knn_ok ? "pass" : "FAIL", pca_ok ? "pass" : "FAIL",
                  svm_ok ? "pass" : "FAIL", xor_ok ? "pass" : "FAIL");
    verdict(4, "baseline oracles", knn_ok && pca_ok && svm_ok && xor_ok, detail);
}

// ---------------------------------------------------------------------------
// criterion 5: fold law
// ---------------------------------------------------------------------------

void criterion_5() {
    bool ok = true;
    for (uint64_t seed : {1ull, 42ull, 20250809ull, 0xDEADBEEFull}) {
        FoldPlan plan = kfold_split(1745, 5, seed);
        std::vector<int> sizes(5, 0);
        std::vector<bool> seen(1745, false);
        for (int i = 0; i < 1745; ++i) {
            int f = plan.assignments[i];
            if (f < 0 || f >= 5) ok = false;
            sizes[f]++;
            if (seen[i]) ok = false;
            seen[i] = true;
        }
        for (int s : sizes)
            if (s != 349) ok = false;
        for (bool b : seen)
            if (!b) ok = false;
    }
    verdict(5, "fold law: kfold_split(1745, 5) gives five folds of 349", ok, "");
}

// ---------------------------------------------------------------------------
// criterion 6: end-to-end desk scale
// ---------------------------------------------------------------------------

void criterion_6() {
    auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig config;
    config.synth.n_samples = 400;
    config.synth.n_continuous = 22;
    config.synth.n_binary = 16;
    config.synth.class_separation = 8.0;
    config.synth.seed = 7;
    config.seed = 7;
    config.architectures = {{30, 15}};
    config.activations = {ActivationKind::ArcTan};
    config.optimizers = {OptimizerKind::Scg};
    config.k_folds = 5;
    config.epochs = 100;
    config.baselines = {"pca-softmax"};

    Dataset ds = config_dataset(config);
    ResultTable table = compare_baselines(ds, config); // pca-softmax then proposed, shared plan
    bool ok = table.rows.size() == 2;
    double proposed_acc = 0, baseline_acc = 0;
    if (ok) {
        const ResultRow& baseline = table.rows[0];
        const ResultRow& proposed = table.rows[1];
        ok = !baseline.failed && !proposed.failed;
        if (ok) {
            proposed_acc = *proposed.aggregate.mean.accuracy;
            baseline_acc = *baseline.aggregate.mean.accuracy;
            if (!(proposed_acc >= 0.95)) ok = false;
            if (!(proposed_acc >= baseline_acc)) ok = false;
            for (const ResultRow& row : table.rows) {
                if (*row.aggregate.mean.error_rate != 1.0 - *row.aggregate.mean.accuracy)
                    ok = false;
                for (const MetricsReport& fold : row.folds)
                    if (*fold.error_rate != 1.0 - *fold.accuracy) ok = false;
            }
        }
    }
    double dt = seconds_since(t0);
    if (dt >= 300.0) ok = false;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "[30,15] scg+arctan acc=%.4f vs pca-softmax %.4f, RMSE=1-acc exact, %.1fs",
                  proposed_acc, baseline_acc, dt);
    verdict(6, "end-to-end desk-scale synthetic run", ok, detail);
}

// ---------------------------------------------------------------------------
// criterion 7: grid shape
// ---------------------------------------------------------------------------

void criterion_7() {
    auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig config;
    config.synth.n_samples = 200;
    config.synth.n_continuous = 8;
    config.synth.n_binary = 2;
    config.synth.class_separation = 6.0;
    config.synth.seed = 21;
    config.seed = 21;
    config.architectures = {{5, 3}};
    config.activations = {ActivationKind::ArcTan, ActivationKind::TanH,
                          ActivationKind::Sigmoid};
    config.optimizers = {OptimizerKind::Scg, OptimizerKind::Lbfgs, OptimizerKind::Cg};
    config.k_folds = 5;
    config.epochs = 50;

    config.workers = 1;
    ResultTable serial = run_grid(config);
    config.workers = 4;
    ResultTable parallel = run_grid(config);

    bool ok = serial.rows.size() == 9 && parallel.rows.size() == 9;
    if (render_report(serial, ReportFormat::Csv) != render_report(parallel, ReportFormat::Csv))
        ok = false;
    for (const auto& row : serial.rows)
        if (row.failed) ok = false;

    ResultTable ranked = rank_table(serial, "accuracy", 5);
    if (ranked.rows.size() != 5) ok = false;
    for (size_t i = 1; i < ranked.rows.size(); ++i) {
        double prev = *ranked.rows[i - 1].aggregate.mean.accuracy;
        double cur = *ranked.rows[i].aggregate.mean.accuracy;
        if (cur > prev) ok = false;
        if (cur == prev) { // documented tie-break: (optimizer, activation)
            auto a = std::make_pair(ranked.rows[i - 1].optimizer_tag,
                                    ranked.rows[i - 1].activation_tag);
            auto b = std::make_pair(ranked.rows[i].optimizer_tag,
                                    ranked.rows[i].activation_tag);
            if (!(a <= b)) ok = false;
        }
    }
    double dt = seconds_since(t0);
    if (dt >= 300.0) ok = false;
    char detail[120];
    std::snprintf(detail, sizeof(detail), "9 rows, serial == 4-worker bytes, ranked top-5, %.1fs",
                  dt);
    verdict(7, "grid shape and parallel equivalence", ok, detail);
}

// ---------------------------------------------------------------------------
// criterion 8: CLI determinism
// ---------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool run_cli(const std::string& cli, const std::string& args) {
    std::string cmd = cli + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
}

void criterion_8(const std::string& cli) {
    fs::path dir = fs::temp_directory_path() / "tabsae_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto p = [&](const std::string& name) { return (dir / name).string(); };

    bool ok = true;
    std::string failing;
    auto twice_same = [&](const std::string& what, const std::string& args_a,
                          const std::string& args_b, const std::vector<std::string>& outputs_a,
                          const std::vector<std::string>& outputs_b) {
        if (!run_cli(cli, args_a) || !run_cli(cli, args_b)) {
            ok = false;
            failing += " " + what + "(exit)";
            return;
        }
        for (size_t i = 0; i < outputs_a.size(); ++i) {
            std::string a = slurp(outputs_a[i]);
            std::string b = slurp(outputs_b[i]);
            if (a.empty() || a != b) {
                ok = false;
                failing += " " + what;
                return;
            }
        }
    };

    twice_same("synth",
               "synth --out " + p("a.csv") + " --samples 120 --separation 6 --seed 5",
               "synth --out " + p("b.csv") + " --samples 120 --separation 6 --seed 5",
               {p("a.csv")}, {p("b.csv")});

    std::string train_common =
        " --samples 120 --separation 6 --arch 5,3 --activation arctan --optimizer scg"
        " --epochs 30 --seed 5";
    twice_same("train", "train --out " + p("model_a.txt") + train_common,
               "train --out " + p("model_b.txt") + train_common, {p("model_a.txt")},
               {p("model_b.txt")});

    twice_same("evaluate",
               "evaluate --model " + p("model_a.txt") + " --csv " + p("a.csv") + " --out " +
                   p("eval_a.csv"),
               "evaluate --model " + p("model_a.txt") + " --csv " + p("a.csv") + " --out " +
                   p("eval_b.csv"),
               {p("eval_a.csv")}, {p("eval_b.csv")});

    {
        std::ofstream cfg(p("config.txt"));
        cfg << "synth_samples=120\nsynth_continuous=6\nsynth_binary=2\n"
               "synth_separation=6\narchitectures=4,3\nactivations=arctan,tanh\n"
               "optimizers=scg,lbfgs\nk_folds=3\nepochs=20\nseed=5\nrbf_centers=6\n";
    }
    twice_same("gridsearch",
               "gridsearch --config " + p("config.txt") + " --seed 5 --workers 2 --out " +
                   p("grid_a"),
               "gridsearch --config " + p("config.txt") + " --seed 5 --workers 1 --out " +
                   p("grid_b"),
               {p("grid_a") + "/grid.csv", p("grid_a") + "/grid_top10.csv"},
               {p("grid_b") + "/grid.csv", p("grid_b") + "/grid_top10.csv"});

    twice_same("baselines",
               "baselines --config " + p("config.txt") + " --seed 5 --out " + p("base_a"),
               "baselines --config " + p("config.txt") + " --seed 5 --out " + p("base_b"),
               {p("base_a") + "/baselines.csv"}, {p("base_b") + "/baselines.csv"});

    twice_same("report-md",
               "report --table " + p("grid_a") + "/grid.csv --format markdown --out " +
                   p("report_a.md"),
               "report --table " + p("grid_a") + "/grid.csv --format markdown --out " +
                   p("report_b.md"),
               {p("report_a.md")}, {p("report_b.md")});
    twice_same("report-svg",
               "report --table " + p("grid_a") + "/grid.csv --format svg-bar --out " +
                   p("report_a.svg"),
               "report --table " + p("grid_a") + "/grid.csv --format svg-bar --out " +
                   p("report_b.svg"),
               {p("report_a.svg")}, {p("report_b.svg")});

    char detail[200];
    std::snprintf(detail, sizeof(detail), "synth/train/evaluate/gridsearch/baselines/report%s%s",
                  failing.empty() ? " all byte-identical" : " FAILED:", failing.c_str());
    verdict(8, "CLI determinism under --seed", ok, detail);
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path-to-tabsae-cli>\n");
        return 2;
    }
    std::printf("tabsae acceptance suite\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8(argv[1]);
    std::printf("%d of 8 criteria passed\n", 8 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
