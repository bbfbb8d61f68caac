#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabsae/types.hpp"

namespace tabsae {

/// A smooth unconstrained minimization problem. value_grad is required and
/// must be deterministic; hess_vec / hessian are optional accelerators for
/// the Newton-type methods (finite differences fill in when absent).
struct Objective {
    int dim = 0;
    std::function<double(const Vector& theta, Vector& grad)> value_grad;
    std::function<Vector(const Vector& theta, const Vector& v)> hess_vec;
    std::function<Matrix(const Vector& theta)> hessian;

    double eval(const Vector& theta, Vector& grad) const { return value_grad(theta, grad); }
};

/// The 11 full-batch minimization methods.
enum class OptimizerKind { Sd, Csd, Bb, Cg, Scg, Pcg, Newton0, Pnewton0, Lbfgs, Qnewton, Mnewton };

constexpr int kOptimizerCount = 11;

const char* optimizer_name(OptimizerKind kind);
OptimizerKind optimizer_parse(std::string_view name);
const std::array<OptimizerKind, kOptimizerCount>& all_optimizers();

enum class StopReason { GradTol, MaxIter, StepTol, LineSearchFail };

const char* stop_reason_name(StopReason r);

struct IterationRecord {
    double f;         // objective after the step (or at theta0 for record 0)
    double grad_inf;  // infinity norm of the gradient
    double step;      // accepted step length alpha (0 for the initial record)
    int fevals;       // objective evaluations spent on this iteration
};

/// Per-step instrumentation record; enough to re-check the line-search
/// conditions without storing iterates.
struct StepRecord {
    int iter;
    double alpha;
    double f0, f1;       // objective before/after
    double slope0;       // g0' d
    double slope1;       // g1' d
    double step_inf;     // |alpha*d|_inf
    bool line_searched;  // true when accepted through the Wolfe search
};

struct OptimizerOptions {
    int max_iter = 100;
    double grad_tol = 1e-5;             // on |g|_inf
    double step_tol = 1e-9;             // on |alpha*d|_inf
    double wolfe_c1 = 1e-4;
    std::optional<double> wolfe_c2;     // default 0.9 Newton-type/lbfgs/qnewton, 0.2 otherwise
    int line_search_max_evals = 50;
    int lbfgs_memory = 10;
    int csd_cycle_length = 3;
    int inner_cg_max = 250;
    std::optional<double> fd_epsilon;   // default sqrt(macheps)*(1+|theta|)
    std::function<void(const StepRecord&)> step_observer; // instrumentation hook
};

double default_wolfe_c2(OptimizerKind kind);

struct OptimizerTrace {
    std::vector<IterationRecord> iterations; // [0] is the starting point
    StopReason reason = StopReason::MaxIter;
    int total_fevals = 0;
};

struct MinimizeResult {
    Vector theta;  // best iterate found (lowest f)
    double f = 0;
    OptimizerTrace trace;
};

/// Minimize obj from theta0 with the chosen method. Line-search failures are
/// reported in the trace (best-so-far is returned), not thrown. Throws
/// NonFiniteObjective if f or g is NaN/Inf at theta0.
MinimizeResult minimize(const Objective& obj, const Vector& theta0, OptimizerKind kind,
                        const OptimizerOptions& options = {});

struct WolfeResult {
    bool success = false;
    double alpha = 0;
    double f = 0;
    Vector g;
    int evals = 0;
};

/// Strong Wolfe line search (bracket + zoom with cubic interpolation).
/// Requires g0' d < 0 (throws Error otherwise). On failure returns
/// success=false with the evaluation count; never throws for budget
/// exhaustion.
WolfeResult wolfe_line_search(const Objective& obj, const Vector& theta, const Vector& dir,
                              double f0, const Vector& g0, double c1, double c2,
                              double alpha0 = 1.0, int max_evals = 50);

/// Central-difference Hessian-vector product: (g(x+eps v) - g(x-eps v)) / (2 eps).
Vector hess_vec_fd(const Objective& obj, const Vector& theta, const Vector& v, double eps);

/// Central-difference gradient, one coordinate at a time.
Vector finite_diff_grad(const Objective& obj, const Vector& theta, double h);

} // namespace tabsae
