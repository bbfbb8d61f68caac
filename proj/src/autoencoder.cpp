#include "tabsae/autoencoder.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>

#include "tabsae/errors.hpp"

namespace tabsae {

namespace {

constexpr double kClampLo = 1e-8;
constexpr double kClampHi = 1.0 - 1e-8;

double logistic(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

// core loss; returns non-finite values instead of throwing
double loss_core(const AutoencoderLayer& layer, const Matrix& x, AeGradients* grads,
                 AeLossTerms* terms) {
    const int n = int(x.rows());
    const int h = layer.hidden();

    Matrix z1 = (x * layer.w1.transpose()).rowwise() + layer.b1.transpose();
    Matrix a = act_eval(layer.activation, z1);
    Matrix xhat = (a * layer.w2.transpose()).rowwise() + layer.b2.transpose();
    Matrix r = xhat - x;

    double j_rec = r.squaredNorm() / (2.0 * n);
    double j_wt = 0.5 * layer.lambda * (layer.w1.squaredNorm() + layer.w2.squaredNorm());

    // sparsity on logistic-squashed activations, so it is well defined for
    // unbounded or signed activation kinds
    Matrix s = a.unaryExpr([](double v) { return logistic(v); });
    Vector rho_hat = s.colwise().mean();
    double j_sp = 0;
    Vector kl_grad = Vector::Zero(h);
    const double rho = layer.rho;
    for (int j = 0; j < h; ++j) {
        double q = std::clamp(rho_hat[j], kClampLo, kClampHi);
        j_sp += rho * std::log(rho / q) + (1.0 - rho) * std::log((1.0 - rho) / (1.0 - q));
        bool clamped = rho_hat[j] < kClampLo || rho_hat[j] > kClampHi;
        kl_grad[j] = clamped ? 0.0 : (-rho / q + (1.0 - rho) / (1.0 - q));
    }
    j_sp *= layer.beta;

    if (terms) {
        terms->reconstruction = j_rec;
        terms->weight_penalty = j_wt;
        terms->sparsity_penalty = j_sp;
    }
    double total = j_rec + j_wt + j_sp;

    if (grads) {
        Matrix dr = r / double(n);
        grads->w2 = dr.transpose() * a + layer.lambda * layer.w2;
        grads->b2 = dr.colwise().sum();

        Matrix da = dr * layer.w2; // N x h
        // sparsity path: d rho_hat_j / d a_nj = s'(a_nj)/N
        Matrix sprime = s.array() * (1.0 - s.array());
        for (int j = 0; j < h; ++j)
            da.col(j) += (layer.beta * kl_grad[j] / double(n)) * sprime.col(j);

        Matrix dz1 = da.array() * act_deriv(layer.activation, z1).array();
        grads->w1 = dz1.transpose() * x + layer.lambda * layer.w1;
        grads->b1 = dz1.colwise().sum();
    }
    return total;
}

void check_shapes(const AutoencoderLayer& layer, const Matrix& x) {
    if (int(x.cols()) != layer.input())
        throw DimensionMismatch("autoencoder: input has " + std::to_string(x.cols()) +
                                " columns, layer expects " + std::to_string(layer.input()));
    if (layer.w2.rows() != layer.input() || layer.w2.cols() != layer.hidden() ||
        layer.b1.size() != layer.hidden() || layer.b2.size() != layer.input())
        throw DimensionMismatch("autoencoder: inconsistent layer shapes");
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

double ae_loss_grad(const AutoencoderLayer& layer, const Matrix& x, AeGradients* grads,
                    AeLossTerms* terms) {
    check_shapes(layer, x);
    if (x.rows() < 1) throw DimensionMismatch("ae_loss_grad: empty input");
    double j = loss_core(layer, x, grads, terms);
    if (!std::isfinite(j)) throw NonFiniteLoss("autoencoder loss is not finite");
    return j;
}

Vector ae_pack(const AutoencoderLayer& layer) {
    const int h = layer.hidden(), d = layer.input();
    Vector theta(2 * h * d + h + d);
    int at = 0;
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < d; ++j) theta[at++] = layer.w1(i, j);
    for (int i = 0; i < h; ++i) theta[at++] = layer.b1[i];
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < h; ++j) theta[at++] = layer.w2(i, j);
    for (int i = 0; i < d; ++i) theta[at++] = layer.b2[i];
    return theta;
}

void ae_unpack(const Vector& theta, AutoencoderLayer& layer) {
    const int h = layer.hidden(), d = layer.input();
    if (theta.size() != 2 * h * d + h + d)
        throw DimensionMismatch("ae_unpack: parameter vector size mismatch");
    int at = 0;
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < d; ++j) layer.w1(i, j) = theta[at++];
    for (int i = 0; i < h; ++i) layer.b1[i] = theta[at++];
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < h; ++j) layer.w2(i, j) = theta[at++];
    for (int i = 0; i < d; ++i) layer.b2[i] = theta[at++];
}

Objective ae_objective(const AutoencoderLayer& proto, const Matrix& x) {
    auto layer = std::make_shared<AutoencoderLayer>(proto);
    auto data = std::make_shared<Matrix>(x);
    Objective obj;
    obj.dim = int(ae_pack(proto).size());
    obj.value_grad = [layer, data](const Vector& theta, Vector& grad) {
        ae_unpack(theta, *layer);
        AeGradients g;
        double j = loss_core(*layer, *data, &g, nullptr);
        AutoencoderLayer tmp = *layer;
        tmp.w1 = g.w1;
        tmp.b1 = g.b1;
        tmp.w2 = g.w2;
        tmp.b2 = g.b2;
        grad = ae_pack(tmp);
        if (!std::isfinite(j)) return std::numeric_limits<double>::infinity();
        return j;
    };
    return obj;
}

AutoencoderLayer ae_train(const Matrix& x, int hidden, Activation activation,
                          OptimizerKind optimizer, const OptimizerOptions& options,
                          double lambda, double rho, double beta, uint64_t seed,
                          AeTrainReport* report) {
    if (hidden < 1) throw BadSpec("ae_train: hidden size must be >= 1");
    if (x.rows() < 1 || x.cols() < 1) throw DimensionMismatch("ae_train: empty input");
    if (!(lambda >= 0) || !(beta >= 0) || !(rho > 0 && rho < 1))
        throw BadSpec("ae_train: bad hyperparameters");

    const int d = int(x.cols());
    AutoencoderLayer layer;
    layer.activation = activation;
    layer.lambda = lambda;
    layer.rho = rho;
    layer.beta = beta;
    layer.w1.resize(hidden, d);
    layer.b1 = Vector::Zero(hidden);
    layer.w2.resize(d, hidden);
    layer.b2 = Vector::Zero(d);

    const double scale = 1.0 / std::sqrt(double(d));
    Rng rng(seed);
    for (int i = 0; i < hidden; ++i)
        for (int j = 0; j < d; ++j) layer.w1(i, j) = rng.uniform(-scale, scale);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < hidden; ++j) layer.w2(i, j) = rng.uniform(-scale, scale);

    Objective obj = ae_objective(layer, x);
    MinimizeResult res = minimize(obj, ae_pack(layer), optimizer, options);
    ae_unpack(res.theta, layer);

    if (report) {
        ae_loss_grad(layer, x, nullptr, &report->terms);
        report->reconstruction_rmse = reconstruction_rmse(layer, x);
        report->trace = std::move(res.trace);
    }
    return layer;
}

Matrix encode(const AutoencoderLayer& layer, const Matrix& x) {
    if (int(x.cols()) != layer.input())
        throw DimensionMismatch("encode: input width does not match layer");
    Matrix z1 = (x * layer.w1.transpose()).rowwise() + layer.b1.transpose();
    return act_eval(layer.activation, z1);
}

double reconstruction_rmse(const AutoencoderLayer& layer, const Matrix& x) {
    check_shapes(layer, x);
    if (x.rows() < 1) throw DimensionMismatch("reconstruction_rmse: empty input");
    Matrix a = encode(layer, x);
    Matrix xhat = (a * layer.w2.transpose()).rowwise() + layer.b2.transpose();
    return std::sqrt((xhat - x).squaredNorm() / double(x.rows() * x.cols()));
}

void save_layer(std::ostream& out, const AutoencoderLayer& layer) {
    const ActivationParams& p = layer.activation.params;
    out << "ae " << layer.hidden() << ' ' << layer.input() << ' '
        << act_name(layer.activation.kind) << ' ' << g17(layer.lambda) << ' ' << g17(layer.rho)
        << ' ' << g17(layer.beta) << ' ' << g17(p.leaky_slope) << ' ' << g17(p.prelu_slope)
        << ' ' << g17(p.rrelu_slope) << ' ' << g17(p.elu_alpha) << ' ' << g17(p.srelu_tl) << ' '
        << g17(p.srelu_al) << ' ' << g17(p.srelu_tr) << ' ' << g17(p.srelu_ar) << ' '
        << g17(p.apl_slope) << ' ' << g17(p.softexp_alpha) << '\n';
    auto write_matrix = [&](const Matrix& m) {
        for (int i = 0; i < m.rows(); ++i) {
            for (int j = 0; j < m.cols(); ++j) out << (j ? " " : "") << g17(m(i, j));
            out << '\n';
        }
    };
    auto write_vector = [&](const Vector& v) {
        for (int i = 0; i < v.size(); ++i) out << (i ? " " : "") << g17(v[i]);
        out << '\n';
    };
    write_matrix(layer.w1);
    write_vector(layer.b1);
    write_matrix(layer.w2);
    write_vector(layer.b2);
}

AutoencoderLayer load_layer(std::istream& in) {
    std::string tag;
    in >> tag;
    if (tag != "ae") throw IoError("load_layer: expected 'ae' block, got '" + tag + "'");
    int h = 0, d = 0;
    std::string act;
    AutoencoderLayer layer;
    ActivationParams& p = layer.activation.params;
    in >> h >> d >> act >> layer.lambda >> layer.rho >> layer.beta >> p.leaky_slope >>
        p.prelu_slope >> p.rrelu_slope >> p.elu_alpha >> p.srelu_tl >> p.srelu_al >>
        p.srelu_tr >> p.srelu_ar >> p.apl_slope >> p.softexp_alpha;
    if (!in || h < 1 || d < 1) throw IoError("load_layer: malformed header");
    layer.activation.kind = act_parse(act);
    layer.w1.resize(h, d);
    layer.b1.resize(h);
    layer.w2.resize(d, h);
    layer.b2.resize(d);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < d; ++j) in >> layer.w1(i, j);
    for (int i = 0; i < h; ++i) in >> layer.b1[i];
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < h; ++j) in >> layer.w2(i, j);
    for (int i = 0; i < d; ++i) in >> layer.b2[i];
    if (!in) throw IoError("load_layer: truncated weight blocks");
    return layer;
}

} // namespace tabsae
