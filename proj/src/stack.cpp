#include "tabsae/stack.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <set>
#include <sstream>

#include "tabsae/errors.hpp"

namespace tabsae {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void check_labels(const std::vector<int>& y, int n_classes, int n_rows) {
    if (int(y.size()) != n_rows) throw DimensionMismatch("labels do not match row count");
    for (int v : y)
        if (v < 0 || v >= n_classes) throw BadSpec("label out of range");
}

// stable row softmax
Matrix row_softmax(const Matrix& z) {
    Matrix p(z.rows(), z.cols());
    for (int i = 0; i < z.rows(); ++i) {
        double m = z.row(i).maxCoeff();
        Eigen::RowVectorXd e = (z.row(i).array() - m).exp();
        p.row(i) = e / e.sum();
    }
    return p;
}

double softmax_core(const SoftmaxClassifier& clf, const Matrix& h, const std::vector<int>& y,
                    SoftmaxGradients* grads) {
    const int n = int(h.rows());
    Matrix z = (h * clf.w.transpose()).rowwise() + clf.b.transpose();
    double ce = 0;
    Matrix p(z.rows(), z.cols());
    for (int i = 0; i < n; ++i) {
        double m = z.row(i).maxCoeff();
        Eigen::RowVectorXd shifted = z.row(i).array() - m;
        double lse = std::log(shifted.array().exp().sum());
        ce -= shifted[y[i]] - lse;
        p.row(i) = (shifted.array() - lse).exp();
    }
    ce /= n;
    double penalty = 0.5 * clf.lambda * clf.w.squaredNorm();
    if (grads) {
        Matrix dz = p;
        for (int i = 0; i < n; ++i) dz(i, y[i]) -= 1.0;
        dz /= double(n);
        grads->w = dz.transpose() * h + clf.lambda * clf.w;
        grads->b = dz.colwise().sum();
    }
    return ce + penalty;
}

} // namespace

double softmax_loss_grad(const SoftmaxClassifier& clf, const Matrix& h,
                         const std::vector<int>& y, SoftmaxGradients* grads) {
    if (int(h.cols()) != clf.inputs())
        throw DimensionMismatch("softmax_loss_grad: feature width mismatch");
    check_labels(y, clf.classes(), int(h.rows()));
    double j = softmax_core(clf, h, y, grads);
    if (!std::isfinite(j)) throw NonFiniteLoss("softmax loss is not finite");
    return j;
}

Matrix softmax_probs(const SoftmaxClassifier& clf, const Matrix& h) {
    if (int(h.cols()) != clf.inputs())
        throw DimensionMismatch("softmax_probs: feature width mismatch");
    return row_softmax((h * clf.w.transpose()).rowwise() + clf.b.transpose());
}

SoftmaxClassifier softmax_train(const Matrix& h, const std::vector<int>& y, int n_classes,
                                OptimizerKind optimizer, const OptimizerOptions& options,
                                double lambda, uint64_t seed, OptimizerTrace* trace) {
    (void)seed; // zero initialization: training is deterministic without it
    const int n = int(h.rows()), m = int(h.cols());
    if (n < n_classes) throw BadSpec("softmax_train: need at least one sample per class");
    check_labels(y, n_classes, n);
    std::set<int> distinct(y.begin(), y.end());
    if (distinct.size() < 2) throw SingleClass("softmax_train: only one class present");

    SoftmaxClassifier clf;
    clf.w = Matrix::Zero(n_classes, m);
    clf.b = Vector::Zero(n_classes);
    clf.lambda = lambda;

    Objective obj;
    obj.dim = n_classes * m + n_classes;
    auto proto = std::make_shared<SoftmaxClassifier>(clf);
    auto data = std::make_shared<Matrix>(h);
    auto labels = std::make_shared<std::vector<int>>(y);
    obj.value_grad = [proto, data, labels](const Vector& theta, Vector& grad) {
        const int c = proto->classes(), mm = proto->inputs();
        int at = 0;
        for (int i = 0; i < c; ++i)
            for (int j = 0; j < mm; ++j) proto->w(i, j) = theta[at++];
        for (int i = 0; i < c; ++i) proto->b[i] = theta[at++];
        SoftmaxGradients g;
        double j = softmax_core(*proto, *data, *labels, &g);
        grad.resize(theta.size());
        at = 0;
        for (int i = 0; i < c; ++i)
            for (int jj = 0; jj < mm; ++jj) grad[at++] = g.w(i, jj);
        for (int i = 0; i < c; ++i) grad[at++] = g.b[i];
        if (!std::isfinite(j)) return std::numeric_limits<double>::infinity();
        return j;
    };

    Vector theta0 = Vector::Zero(obj.dim);
    MinimizeResult res = minimize(obj, theta0, optimizer, options);
    int at = 0;
    for (int i = 0; i < n_classes; ++i)
        for (int j = 0; j < m; ++j) clf.w(i, j) = res.theta[at++];
    for (int i = 0; i < n_classes; ++i) clf.b[i] = res.theta[at++];
    if (trace) *trace = std::move(res.trace);
    return clf;
}

void StackedModel::check_shapes() const {
    for (size_t i = 1; i < encoders.size(); ++i)
        if (encoders[i].input() != encoders[i - 1].hidden())
            throw DimensionMismatch("stack: layer " + std::to_string(i) +
                                    " input width does not match previous hidden width");
    if (!encoders.empty() && head.inputs() != encoders.back().hidden())
        throw DimensionMismatch("stack: softmax input width does not match last hidden width");
    if (input_norm && input_norm->d() != input_dim())
        throw DimensionMismatch("stack: normalization width does not match input width");
}

std::vector<AutoencoderLayer> stack_pretrain(const Matrix& x, const std::vector<int>& layer_sizes,
                                             Activation activation, OptimizerKind optimizer,
                                             const OptimizerOptions& options, double lambda,
                                             double rho, double beta, uint64_t seed,
                                             std::vector<AeTrainReport>* reports) {
    if (layer_sizes.empty()) throw BadSpec("stack_pretrain: layer_sizes must be nonempty");
    for (int s : layer_sizes)
        if (s < 1) throw BadSpec("stack_pretrain: layer sizes must be >= 1");

    std::vector<AutoencoderLayer> encoders;
    Matrix cur = x;
    for (size_t i = 0; i < layer_sizes.size(); ++i) {
        AeTrainReport rep;
        AutoencoderLayer layer = ae_train(cur, layer_sizes[i], activation, optimizer, options,
                                          lambda, rho, beta, mix_seed(seed, i), &rep);
        cur = encode(layer, cur);
        encoders.push_back(std::move(layer));
        if (reports) reports->push_back(std::move(rep));
    }
    return encoders;
}

Vector stack_pack(const StackedModel& model) {
    int size = 0;
    for (const auto& e : model.encoders) size += e.hidden() * e.input() + e.hidden();
    size += model.head.classes() * model.head.inputs() + model.head.classes();
    Vector theta(size);
    int at = 0;
    for (const auto& e : model.encoders) {
        for (int i = 0; i < e.hidden(); ++i)
            for (int j = 0; j < e.input(); ++j) theta[at++] = e.w1(i, j);
        for (int i = 0; i < e.hidden(); ++i) theta[at++] = e.b1[i];
    }
    for (int i = 0; i < model.head.classes(); ++i)
        for (int j = 0; j < model.head.inputs(); ++j) theta[at++] = model.head.w(i, j);
    for (int i = 0; i < model.head.classes(); ++i) theta[at++] = model.head.b[i];
    return theta;
}

void stack_unpack(const Vector& theta, StackedModel& model) {
    int at = 0;
    for (auto& e : model.encoders) {
        for (int i = 0; i < e.hidden(); ++i)
            for (int j = 0; j < e.input(); ++j) e.w1(i, j) = theta[at++];
        for (int i = 0; i < e.hidden(); ++i) e.b1[i] = theta[at++];
    }
    for (int i = 0; i < model.head.classes(); ++i)
        for (int j = 0; j < model.head.inputs(); ++j) model.head.w(i, j) = theta[at++];
    for (int i = 0; i < model.head.classes(); ++i) model.head.b[i] = theta[at++];
    if (at != theta.size()) throw DimensionMismatch("stack_unpack: parameter size mismatch");
}

double stack_loss_grad(const StackedModel& model, const Matrix& x, const std::vector<int>& y,
                       Vector* grad) {
    model.check_shapes();
    if (int(x.cols()) != model.input_dim())
        throw DimensionMismatch("stack_loss_grad: input width mismatch");
    check_labels(y, model.head.classes(), int(x.rows()));
    const int n = int(x.rows());
    const size_t nl = model.encoders.size();

    // forward
    std::vector<Matrix> hs(nl + 1), zs(nl);
    hs[0] = x;
    for (size_t l = 0; l < nl; ++l) {
        const auto& e = model.encoders[l];
        zs[l] = (hs[l] * e.w1.transpose()).rowwise() + e.b1.transpose();
        hs[l + 1] = act_eval(e.activation, zs[l]);
    }

    Matrix z = (hs[nl] * model.head.w.transpose()).rowwise() + model.head.b.transpose();
    double ce = 0;
    Matrix p(z.rows(), z.cols());
    for (int i = 0; i < n; ++i) {
        double m = z.row(i).maxCoeff();
        Eigen::RowVectorXd shifted = z.row(i).array() - m;
        double lse = std::log(shifted.array().exp().sum());
        ce -= shifted[y[i]] - lse;
        p.row(i) = (shifted.array() - lse).exp();
    }
    ce /= n;

    double penalty = model.head.w.squaredNorm();
    for (const auto& e : model.encoders) penalty += e.w1.squaredNorm();
    penalty *= 0.5 * model.lambda_stack;
    double total = ce + penalty;

    if (grad) {
        StackedModel g = model; // same shapes, gradient storage
        Matrix dz = p;
        for (int i = 0; i < n; ++i) dz(i, y[i]) -= 1.0;
        dz /= double(n);
        g.head.w = dz.transpose() * hs[nl] + model.lambda_stack * model.head.w;
        g.head.b = dz.colwise().sum();

        Matrix dh = dz * model.head.w; // N x m
        for (int l = int(nl) - 1; l >= 0; --l) {
            const auto& e = model.encoders[l];
            Matrix dzl = dh.array() * act_deriv(e.activation, zs[l]).array();
            g.encoders[l].w1 = dzl.transpose() * hs[l] + model.lambda_stack * e.w1;
            g.encoders[l].b1 = dzl.colwise().sum();
            if (l > 0) dh = dzl * e.w1;
        }
        *grad = stack_pack(g);
    }
    return total;
}

StackedModel fine_tune(StackedModel model, const Matrix& x, const std::vector<int>& y,
                       OptimizerKind optimizer, const OptimizerOptions& options,
                       double lambda_stack, uint64_t seed, OptimizerTrace* trace) {
    (void)seed; // joint training is deterministic: no randomness to seed
    model.lambda_stack = lambda_stack;
    model.check_shapes();
    if (options.max_iter == 0) return model;

    auto shared = std::make_shared<StackedModel>(model);
    auto data = std::make_shared<Matrix>(x);
    auto labels = std::make_shared<std::vector<int>>(y);
    Objective obj;
    obj.dim = int(stack_pack(model).size());
    obj.value_grad = [shared, data, labels](const Vector& theta, Vector& grad) {
        stack_unpack(theta, *shared);
        double j;
        try {
            j = stack_loss_grad(*shared, *data, *labels, &grad);
        } catch (const NonFiniteLoss&) {
            grad = Vector::Zero(theta.size());
            return std::numeric_limits<double>::infinity();
        }
        if (!std::isfinite(j)) return std::numeric_limits<double>::infinity();
        return j;
    };

    MinimizeResult res = minimize(obj, stack_pack(model), optimizer, options);
    stack_unpack(res.theta, model);
    if (trace) *trace = std::move(res.trace);
    return model;
}

Prediction predict(const StackedModel& model, const Matrix& x) {
    model.check_shapes();
    if (int(x.cols()) != model.input_dim())
        throw DimensionMismatch("predict: input width does not match model");
    Matrix h = model.input_norm ? normalize_apply(*model.input_norm, x) : x;
    for (const auto& e : model.encoders) h = encode(e, h);
    Prediction pred;
    pred.probs = softmax_probs(model.head, h);
    pred.labels.resize(x.rows());
    for (int i = 0; i < x.rows(); ++i) {
        int best = 0;
        for (int c = 1; c < pred.probs.cols(); ++c)
            if (pred.probs(i, c) > pred.probs(i, best)) best = c; // ties keep smaller id
        pred.labels[i] = best;
    }
    return pred;
}

void save_stack(std::ostream& out, const StackedModel& model) {
    out << "stack " << model.encoders.size() << ' ' << g17(model.lambda_stack) << ' '
        << (model.input_norm ? 1 : 0) << '\n';
    if (model.input_norm) {
        const auto& nm = *model.input_norm;
        out << "norm " << norm_method_name(nm.method) << ' ' << nm.d() << '\n';
        for (int i = 0; i < nm.d(); ++i) out << (i ? " " : "") << g17(nm.a[i]);
        out << '\n';
        for (int i = 0; i < nm.d(); ++i) out << (i ? " " : "") << g17(nm.b[i]);
        out << '\n';
    }
    for (const auto& e : model.encoders) save_layer(out, e);
    out << "softmax " << model.head.classes() << ' ' << model.head.inputs() << ' '
        << g17(model.head.lambda) << '\n';
    for (int i = 0; i < model.head.classes(); ++i) {
        for (int j = 0; j < model.head.inputs(); ++j) out << (j ? " " : "") << g17(model.head.w(i, j));
        out << '\n';
    }
    for (int i = 0; i < model.head.classes(); ++i) out << (i ? " " : "") << g17(model.head.b[i]);
    out << '\n';
}

StackedModel load_stack(std::istream& in) {
    std::string tag;
    in >> tag;
    if (tag != "stack") throw IoError("load_stack: expected 'stack' header");
    size_t n_layers = 0;
    int has_norm = 0;
    StackedModel model;
    in >> n_layers >> model.lambda_stack >> has_norm;
    if (!in) throw IoError("load_stack: malformed header");
    if (has_norm) {
        std::string norm_tag, method;
        int d = 0;
        in >> norm_tag >> method >> d;
        if (!in || norm_tag != "norm" || d < 1) throw IoError("load_stack: malformed norm block");
        NormalizationParams nm;
        nm.method = norm_method_parse(method);
        nm.a.resize(d);
        nm.b.resize(d);
        for (int i = 0; i < d; ++i) in >> nm.a[i];
        for (int i = 0; i < d; ++i) in >> nm.b[i];
        model.input_norm = std::move(nm);
    }
    for (size_t l = 0; l < n_layers; ++l) model.encoders.push_back(load_layer(in));
    in >> tag;
    if (tag != "softmax") throw IoError("load_stack: expected 'softmax' block");
    int c = 0, m = 0;
    in >> c >> m >> model.head.lambda;
    if (!in || c < 2 || m < 1) throw IoError("load_stack: malformed softmax header");
    model.head.w.resize(c, m);
    model.head.b.resize(c);
    for (int i = 0; i < c; ++i)
        for (int j = 0; j < m; ++j) in >> model.head.w(i, j);
    for (int i = 0; i < c; ++i) in >> model.head.b[i];
    if (!in) throw IoError("load_stack: truncated softmax block");
    model.check_shapes();
    return model;
}

void save_stack_file(const StackedModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    save_stack(out, model);
    if (!out) throw IoError("failed writing " + path);
}

StackedModel load_stack_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile("cannot open " + path);
    return load_stack(in);
}

} // namespace tabsae
