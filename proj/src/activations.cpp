#include "tabsae/activations.hpp"

#include <cmath>
#include <limits>

#include "tabsae/errors.hpp"

namespace tabsae {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logistic(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

// ln(1+e^x) without overflow
double softplus(double x) {
    return std::fmax(x, 0.0) + std::log1p(std::exp(-std::fabs(x)));
}

// global minimum of sin(x)/x, attained at the first positive root of tan x = x
constexpr double kSincMin = -0.21723362821122166;

} // namespace

double act_eval(const Activation& act, double x) {
    const ActivationParams& p = act.params;
    switch (act.kind) {
    case ActivationKind::Sigmoid: return logistic(x);
    case ActivationKind::TanH: return std::tanh(x);
    case ActivationKind::ArcTan: return std::atan(x);
    case ActivationKind::Softsign: return x / (1.0 + std::fabs(x));
    case ActivationKind::Softplus: return softplus(x);
    case ActivationKind::BentIdentity: return (std::sqrt(x * x + 1.0) - 1.0) / 2.0 + x;
    case ActivationKind::Gaussian: return std::exp(-x * x);
    case ActivationKind::Sinc:
        if (std::fabs(x) < 1e-4) {
            double x2 = x * x;
            return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
        }
        return std::sin(x) / x;
    case ActivationKind::Sinusoid: return std::sin(x);
    case ActivationKind::ReLU: return x > 0 ? x : 0.0;
    case ActivationKind::LeakyReLU: return x > 0 ? x : p.leaky_slope * x;
    case ActivationKind::PReLU: return x > 0 ? x : p.prelu_slope * x;
    case ActivationKind::RReLU: return x > 0 ? x : p.rrelu_slope * x;
    case ActivationKind::ELU: return x > 0 ? x : p.elu_alpha * (std::exp(x) - 1.0);
    case ActivationKind::SReLU:
        if (x <= p.srelu_tl) return p.srelu_tl + p.srelu_al * (x - p.srelu_tl);
        if (x >= p.srelu_tr) return p.srelu_tr + p.srelu_ar * (x - p.srelu_tr);
        return x;
    case ActivationKind::APL:
        return std::fmax(0.0, x) + p.apl_slope * std::fmax(0.0, -x);
    case ActivationKind::SoftExponential:
        return (std::exp(p.softexp_alpha * x) - 1.0) / p.softexp_alpha + p.softexp_alpha;
    }
    throw Error("unknown activation kind");
}

double act_deriv(const Activation& act, double x) {
    const ActivationParams& p = act.params;
    switch (act.kind) {
    case ActivationKind::Sigmoid: {
        double s = logistic(x);
        return s * (1.0 - s);
    }
    case ActivationKind::TanH: {
        double t = std::tanh(x);
        return 1.0 - t * t;
    }
    case ActivationKind::ArcTan: return 1.0 / (1.0 + x * x);
    case ActivationKind::Softsign: {
        double d = 1.0 + std::fabs(x);
        return 1.0 / (d * d);
    }
    case ActivationKind::Softplus: return logistic(x);
    case ActivationKind::BentIdentity: return x / (2.0 * std::sqrt(x * x + 1.0)) + 1.0;
    case ActivationKind::Gaussian: return -2.0 * x * std::exp(-x * x);
    case ActivationKind::Sinc:
        if (std::fabs(x) < 1e-4) {
            // derivative of the Taylor polynomial
            return -x / 3.0 + x * x * x / 30.0;
        }
        return (x * std::cos(x) - std::sin(x)) / (x * x);
    case ActivationKind::Sinusoid: return std::cos(x);
    case ActivationKind::ReLU: return x >= 0 ? 1.0 : 0.0;
    case ActivationKind::LeakyReLU: return x >= 0 ? 1.0 : p.leaky_slope;
    case ActivationKind::PReLU: return x >= 0 ? 1.0 : p.prelu_slope;
    case ActivationKind::RReLU: return x >= 0 ? 1.0 : p.rrelu_slope;
    case ActivationKind::ELU: return x >= 0 ? 1.0 : p.elu_alpha * std::exp(x);
    case ActivationKind::SReLU:
        if (x < p.srelu_tl) return p.srelu_al;
        if (x >= p.srelu_tr) return p.srelu_ar;
        return 1.0; // right-hand derivative at both thresholds
    case ActivationKind::APL:
        return x >= 0 ? 1.0 : -p.apl_slope;
    case ActivationKind::SoftExponential:
        return std::exp(p.softexp_alpha * x);
    }
    throw Error("unknown activation kind");
}

ActRange act_range(const Activation& act) {
    const ActivationParams& p = act.params;
    switch (act.kind) {
    case ActivationKind::Sigmoid: return {0.0, 1.0, true, true};
    case ActivationKind::TanH: return {-1.0, 1.0, true, true};
    case ActivationKind::ArcTan: return {-M_PI / 2.0, M_PI / 2.0, true, true};
    case ActivationKind::Softsign: return {-1.0, 1.0, true, true};
    case ActivationKind::Softplus: return {0.0, kInf, true, true};
    case ActivationKind::BentIdentity: return {-kInf, kInf, true, true};
    case ActivationKind::Gaussian: return {0.0, 1.0, true, false};
    case ActivationKind::Sinc: return {kSincMin, 1.0, false, false};
    case ActivationKind::Sinusoid: return {-1.0, 1.0, false, false};
    case ActivationKind::ReLU: return {0.0, kInf, false, true};
    case ActivationKind::LeakyReLU: return {-kInf, kInf, true, true};
    case ActivationKind::PReLU: return {-kInf, kInf, true, true};
    case ActivationKind::RReLU: return {-kInf, kInf, true, true};
    case ActivationKind::ELU: return {-p.elu_alpha, kInf, true, true};
    case ActivationKind::SReLU: return {-kInf, kInf, true, true};
    case ActivationKind::APL: return {0.0, kInf, false, true};
    case ActivationKind::SoftExponential:
        // limit x -> -inf is alpha - 1/alpha
        return {p.softexp_alpha - 1.0 / p.softexp_alpha, kInf, true, true};
    }
    throw Error("unknown activation kind");
}

Matrix act_eval(const Activation& act, const Matrix& x) {
    return x.unaryExpr([&](double v) { return act_eval(act, v); });
}

Matrix act_deriv(const Activation& act, const Matrix& x) {
    return x.unaryExpr([&](double v) { return act_deriv(act, v); });
}

const char* act_name(ActivationKind kind) {
    switch (kind) {
    case ActivationKind::Sigmoid: return "sigmoid";
    case ActivationKind::TanH: return "tanh";
    case ActivationKind::ArcTan: return "arctan";
    case ActivationKind::Softsign: return "softsign";
    case ActivationKind::Softplus: return "softplus";
    case ActivationKind::BentIdentity: return "bentidentity";
    case ActivationKind::Gaussian: return "gaussian";
    case ActivationKind::Sinc: return "sinc";
    case ActivationKind::Sinusoid: return "sinusoid";
    case ActivationKind::ReLU: return "relu";
    case ActivationKind::LeakyReLU: return "leakyrelu";
    case ActivationKind::PReLU: return "prelu";
    case ActivationKind::RReLU: return "rrelu";
    case ActivationKind::ELU: return "elu";
    case ActivationKind::SReLU: return "srelu";
    case ActivationKind::APL: return "apl";
    case ActivationKind::SoftExponential: return "softexponential";
    }
    return "?";
}

ActivationKind act_parse(std::string_view name) {
    for (ActivationKind k : all_activations()) {
        if (name == act_name(k)) return k;
    }
    throw BadConfig("unknown activation function: " + std::string(name));
}

const std::array<ActivationKind, kActivationCount>& all_activations() {
    static const std::array<ActivationKind, kActivationCount> kinds = {
        ActivationKind::Sigmoid,       ActivationKind::TanH,
        ActivationKind::ArcTan,        ActivationKind::Softsign,
        ActivationKind::Softplus,      ActivationKind::BentIdentity,
        ActivationKind::Gaussian,      ActivationKind::Sinc,
        ActivationKind::Sinusoid,      ActivationKind::ReLU,
        ActivationKind::LeakyReLU,     ActivationKind::PReLU,
        ActivationKind::RReLU,         ActivationKind::ELU,
        ActivationKind::SReLU,         ActivationKind::APL,
        ActivationKind::SoftExponential,
    };
    return kinds;
}

std::array<double, 2> act_kinks(const Activation& act, int* count) {
    switch (act.kind) {
    case ActivationKind::ReLU:
    case ActivationKind::LeakyReLU:
    case ActivationKind::PReLU:
    case ActivationKind::RReLU:
    case ActivationKind::ELU: // smooth in value but derivative definition splits at 0
    case ActivationKind::APL:
        *count = 1;
        return {0.0, 0.0};
    case ActivationKind::SReLU:
        *count = 2;
        return {act.params.srelu_tl, act.params.srelu_tr};
    default:
        *count = 0;
        return {0.0, 0.0};
    }
}

} // namespace tabsae
