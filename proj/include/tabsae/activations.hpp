#pragma once

#include <array>
#include <string>
#include <string_view>

#include "tabsae/types.hpp"

namespace tabsae {

/// The 17 hidden-layer activation functions. Parameters are fixed at
/// construction (non-adaptive); defaults below, overridable per instance.
enum class ActivationKind {
    Sigmoid,
    TanH,
    ArcTan,
    Softsign,
    Softplus,
    BentIdentity,
    Gaussian,
    Sinc,
    Sinusoid,
    ReLU,
    LeakyReLU,
    PReLU,
    RReLU,
    ELU,
    SReLU,
    APL,
    SoftExponential,
};

constexpr int kActivationCount = 17;

struct ActivationParams {
    double leaky_slope = 0.01;     // LeakyReLU
    double prelu_slope = 0.25;     // PReLU
    double rrelu_slope = 0.2292;   // RReLU, midpoint of the usual [1/8,1/3]
    double elu_alpha = 1.0;        // ELU
    double srelu_tl = -1.0;        // SReLU thresholds / slopes
    double srelu_al = 0.1;
    double srelu_tr = 1.0;
    double srelu_ar = 0.1;
    double apl_slope = 0.2;        // APL: max(0,x) + a*max(0,-x)
    double softexp_alpha = 0.5;    // SoftExponential
};

struct Activation {
    ActivationKind kind = ActivationKind::Sigmoid;
    ActivationParams params{};

    Activation() = default;
    Activation(ActivationKind k) : kind(k) {}
    Activation(ActivationKind k, ActivationParams p) : kind(k), params(p) {}
};

/// Output range; lo/hi may be +-infinity. lo_open/hi_open tell whether the
/// bound is attained.
struct ActRange {
    double lo, hi;
    bool lo_open, hi_open;
};

double act_eval(const Activation& act, double x);

/// Analytic derivative. At kinks (ReLU family breakpoints) returns the
/// right-hand derivative, so act_deriv(relu, 0) == 1.
double act_deriv(const Activation& act, double x);

ActRange act_range(const Activation& act);

/// Elementwise application.
Matrix act_eval(const Activation& act, const Matrix& x);
Matrix act_deriv(const Activation& act, const Matrix& x);

/// CLI/config names: sigmoid, tanh, arctan, softsign, softplus, bentidentity,
/// gaussian, sinc, sinusoid, relu, leakyrelu, prelu, rrelu, elu, srelu, apl,
/// softexponential.
const char* act_name(ActivationKind kind);
ActivationKind act_parse(std::string_view name);

const std::array<ActivationKind, kActivationCount>& all_activations();

/// Kink locations (x where the derivative jumps); empty for smooth kinds.
/// Tests use this to keep finite-difference probes away from breakpoints.
std::array<double, 2> act_kinks(const Activation& act, int* count);

} // namespace tabsae
