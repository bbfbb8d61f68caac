#include "tabsae/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "tabsae/errors.hpp"

namespace tabsae {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite(double x) { return std::isfinite(x); }

// Minimizer of the cubic Hermite interpolant through (a, fa, da), (b, fb, db)
// (Nocedal & Wright eq. 3.59). Falls back to secant-on-derivatives, then to
// bisection.
double interp_step(double a, double fa, double da, double b, double fb, double db) {
    if (finite(fb) && finite(db)) {
        double d1 = da + db - 3.0 * (fa - fb) / (a - b);
        double disc = d1 * d1 - da * db;
        if (disc >= 0) {
            double d2 = std::sqrt(disc) * (b > a ? 1.0 : -1.0);
            double denom = db - da + 2.0 * d2;
            if (denom != 0) {
                double t = b - (b - a) * (db + d2 - d1) / denom;
                if (finite(t)) return t;
            }
        }
        if (db != da) {
            double t = a - da * (b - a) / (db - da);
            if (finite(t)) return t;
        }
    }
    return 0.5 * (a + b);
}

struct ProbePoint {
    double alpha;
    double f;
    double slope;
    Vector g;
};

} // namespace

const char* optimizer_name(OptimizerKind kind) {
    switch (kind) {
    case OptimizerKind::Sd: return "sd";
    case OptimizerKind::Csd: return "csd";
    case OptimizerKind::Bb: return "bb";
    case OptimizerKind::Cg: return "cg";
    case OptimizerKind::Scg: return "scg";
    case OptimizerKind::Pcg: return "pcg";
    case OptimizerKind::Newton0: return "newton0";
    case OptimizerKind::Pnewton0: return "pnewton0";
    case OptimizerKind::Lbfgs: return "lbfgs";
    case OptimizerKind::Qnewton: return "qnewton";
    case OptimizerKind::Mnewton: return "mnewton";
    }
    return "?";
}

OptimizerKind optimizer_parse(std::string_view name) {
    for (OptimizerKind k : all_optimizers()) {
        if (name == optimizer_name(k)) return k;
    }
    throw BadConfig("unknown optimizer: " + std::string(name));
}

const std::array<OptimizerKind, kOptimizerCount>& all_optimizers() {
    static const std::array<OptimizerKind, kOptimizerCount> kinds = {
        OptimizerKind::Sd,      OptimizerKind::Csd,      OptimizerKind::Bb,
        OptimizerKind::Cg,      OptimizerKind::Scg,      OptimizerKind::Pcg,
        OptimizerKind::Newton0, OptimizerKind::Pnewton0, OptimizerKind::Lbfgs,
        OptimizerKind::Qnewton, OptimizerKind::Mnewton,
    };
    return kinds;
}

const char* stop_reason_name(StopReason r) {
    switch (r) {
    case StopReason::GradTol: return "grad_tol";
    case StopReason::MaxIter: return "max_iter";
    case StopReason::StepTol: return "step_tol";
    case StopReason::LineSearchFail: return "line_search_fail";
    }
    return "?";
}

double default_wolfe_c2(OptimizerKind kind) {
    switch (kind) {
    case OptimizerKind::Newton0:
    case OptimizerKind::Pnewton0:
    case OptimizerKind::Lbfgs:
    case OptimizerKind::Qnewton:
    case OptimizerKind::Mnewton:
        return 0.9;
    default:
        return 0.2;
    }
}

WolfeResult wolfe_line_search(const Objective& obj, const Vector& theta, const Vector& dir,
                              double f0, const Vector& g0, double c1, double c2,
                              double alpha0, int max_evals) {
    const double slope0 = g0.dot(dir);
    if (!(slope0 < 0)) throw Error("wolfe_line_search: direction is not a descent direction");

    WolfeResult result;
    Vector gbuf(theta.size());

    auto probe = [&](double alpha) -> ProbePoint {
        double f = obj.eval(theta + alpha * dir, gbuf);
        ++result.evals;
        double slope = kInf;
        if (finite(f) && gbuf.allFinite()) {
            slope = gbuf.dot(dir);
        } else {
            f = kInf; // rejectable trial point
        }
        return {alpha, f, slope, gbuf};
    };

    auto accept = [&](const ProbePoint& p) {
        result.success = true;
        result.alpha = p.alpha;
        result.f = p.f;
        result.g = p.g;
    };

    auto armijo_ok = [&](const ProbePoint& p) { return p.f <= f0 + c1 * p.alpha * slope0; };
    auto curvature_ok = [&](const ProbePoint& p) { return std::fabs(p.slope) <= -c2 * slope0; };

    // zoom: lo always has the lowest accepted-so-far value and
    // slope(lo)*(hi-lo) < 0
    auto zoom = [&](ProbePoint lo, ProbePoint hi) -> WolfeResult {
        while (result.evals < max_evals) {
            double width = std::fabs(hi.alpha - lo.alpha);
            if (width <= 1e-16 * std::max(1.0, std::fabs(lo.alpha))) break;
            double trial;
            if (!finite(hi.f) || !finite(hi.slope)) {
                trial = lo.alpha + 0.5 * (hi.alpha - lo.alpha);
            } else {
                trial = interp_step(lo.alpha, lo.f, lo.slope, hi.alpha, hi.f, hi.slope);
            }
            double amin = std::min(lo.alpha, hi.alpha), amax = std::max(lo.alpha, hi.alpha);
            double margin = 0.1 * width;
            trial = std::clamp(trial, amin + margin, amax - margin);

            ProbePoint p = probe(trial);
            if (!armijo_ok(p) || p.f >= lo.f) {
                hi = p;
            } else {
                if (curvature_ok(p)) {
                    accept(p);
                    return result;
                }
                if (p.slope * (hi.alpha - lo.alpha) >= 0) hi = lo;
                lo = p;
            }
        }
        return result; // failure
    };

    ProbePoint prev{0.0, f0, slope0, g0};
    double alpha = std::max(alpha0, 1e-16);
    bool first = true;
    const double alpha_max = 1e10;

    while (result.evals < max_evals) {
        ProbePoint p = probe(alpha);
        if (!armijo_ok(p) || (!first && p.f >= prev.f)) {
            return zoom(prev, p);
        }
        if (curvature_ok(p)) {
            accept(p);
            return result;
        }
        if (p.slope >= 0) {
            return zoom(p, prev);
        }
        if (alpha >= alpha_max) break;
        prev = p;
        alpha = std::min(2.0 * alpha, alpha_max);
        first = false;
    }
    return result; // failure
}

Vector hess_vec_fd(const Objective& obj, const Vector& theta, const Vector& v, double eps) {
    if (!(eps > 0)) throw Error("hess_vec_fd: eps must be positive");
    if (v.norm() == 0) return Vector::Zero(theta.size());
    Vector gp(theta.size()), gm(theta.size());
    double fp = obj.eval(theta + eps * v, gp);
    double fm = obj.eval(theta - eps * v, gm);
    if (!finite(fp) || !finite(fm) || !gp.allFinite() || !gm.allFinite())
        throw NonFiniteObjective("hess_vec_fd: objective not finite at probe points");
    return (gp - gm) / (2.0 * eps);
}

Vector finite_diff_grad(const Objective& obj, const Vector& theta, double h) {
    if (!(h > 0)) throw Error("finite_diff_grad: h must be positive");
    Vector g(theta.size()), gbuf(theta.size());
    Vector t = theta;
    for (int i = 0; i < theta.size(); ++i) {
        double saved = t[i];
        t[i] = saved + h;
        double fp = obj.eval(t, gbuf);
        t[i] = saved - h;
        double fm = obj.eval(t, gbuf);
        t[i] = saved;
        if (!finite(fp) || !finite(fm))
            throw NonFiniteObjective("finite_diff_grad: objective not finite at probe points");
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

namespace {

// ---------------------------------------------------------------------------
// minimize
// ---------------------------------------------------------------------------

struct Pair {
    Vector s, y;
    double rho; // 1/(s'y)
};

class Minimizer {
public:
    Minimizer(const Objective& obj, OptimizerKind kind, const OptimizerOptions& opts)
        : user_obj_(obj), kind_(kind), opts_(opts) {
        counted_.dim = obj.dim;
        counted_.value_grad = [this](const Vector& t, Vector& g) {
            ++fevals_;
            return user_obj_.value_grad(t, g);
        };
        counted_.hess_vec = obj.hess_vec;
        counted_.hessian = obj.hessian;
        c2_ = opts.wolfe_c2 ? *opts.wolfe_c2 : default_wolfe_c2(kind);
    }

    MinimizeResult run(const Vector& theta0) {
        const int n = int(theta0.size());
        theta_ = theta0;
        g_.resize(n);
        f_ = counted_.eval(theta_, g_);
        if (!finite(f_) || !g_.allFinite())
            throw NonFiniteObjective("objective is not finite at the starting point");

        MinimizeResult res;
        res.trace.iterations.push_back({f_, g_.lpNorm<Eigen::Infinity>(), 0.0, fevals_});
        best_f_ = f_;
        best_theta_ = theta_;
        fwindow_.push_back(f_);

        StopReason reason = StopReason::MaxIter;
        if (g_.lpNorm<Eigen::Infinity>() <= opts_.grad_tol) {
            reason = StopReason::GradTol;
        } else {
            for (int iter = 1; iter <= opts_.max_iter; ++iter) {
                int evals_before = fevals_;
                Step step = take_step(iter);
                if (!step.ok) {
                    reason = StopReason::LineSearchFail;
                    break;
                }
                // bookkeeping for quasi-Newton state
                Vector s = step.theta_new - theta_;
                Vector y = step.g_new - g_;
                update_pairs(s, y);

                if (opts_.step_observer) {
                    StepRecord rec;
                    rec.iter = iter;
                    rec.alpha = step.alpha;
                    rec.f0 = f_;
                    rec.f1 = step.f_new;
                    rec.slope0 = step.slope0;
                    rec.slope1 = step.g_new.dot(step.dir);
                    rec.step_inf = (step.alpha * step.dir).lpNorm<Eigen::Infinity>();
                    rec.line_searched = step.line_searched;
                    opts_.step_observer(rec);
                }

                theta_ = step.theta_new;
                f_ = step.f_new;
                g_ = step.g_new;
                prev_alpha_ = step.alpha;
                prev_slope_ = step.slope0;
                fwindow_.push_back(f_);
                while (fwindow_.size() > 10) fwindow_.pop_front();
                if (f_ < best_f_) {
                    best_f_ = f_;
                    best_theta_ = theta_;
                }
                res.trace.iterations.push_back(
                    {f_, g_.lpNorm<Eigen::Infinity>(), step.alpha, fevals_ - evals_before});

                if (g_.lpNorm<Eigen::Infinity>() <= opts_.grad_tol) {
                    reason = StopReason::GradTol;
                    break;
                }
                if ((step.alpha * step.dir).lpNorm<Eigen::Infinity>() <= opts_.step_tol) {
                    reason = StopReason::StepTol;
                    break;
                }
            }
        }
        res.trace.reason = reason;
        res.trace.total_fevals = fevals_;
        res.theta = best_theta_;
        res.f = best_f_;
        return res;
    }

private:
    struct Step {
        bool ok = false;
        Vector theta_new, g_new, dir;
        double f_new = 0, alpha = 0, slope0 = 0;
        bool line_searched = false;
    };

    // one outer iteration; returns ok=false only on an unrecoverable
    // line-search failure
    Step take_step(int iter) {
        switch (kind_) {
        case OptimizerKind::Sd: return step_line_search(-g_, first_alpha(-g_), iter);
        case OptimizerKind::Csd: return step_csd(iter);
        case OptimizerKind::Bb: return step_bb(iter);
        case OptimizerKind::Cg:
        case OptimizerKind::Scg:
        case OptimizerKind::Pcg: return step_cg(iter);
        case OptimizerKind::Lbfgs: return step_line_search(lbfgs_direction(), 1.0, iter);
        case OptimizerKind::Qnewton: return step_line_search(qnewton_direction(), 1.0, iter);
        case OptimizerKind::Newton0:
        case OptimizerKind::Pnewton0: return step_line_search(newton_cg_direction(), 1.0, iter);
        case OptimizerKind::Mnewton: return step_line_search(mnewton_direction(), 1.0, iter);
        }
        throw Error("unknown optimizer kind");
    }

    bool is_cg_family() const {
        return kind_ == OptimizerKind::Sd || kind_ == OptimizerKind::Csd ||
               kind_ == OptimizerKind::Cg || kind_ == OptimizerKind::Scg ||
               kind_ == OptimizerKind::Pcg;
    }

    double first_alpha(const Vector& d) const {
        if (prev_alpha_ > 0 && prev_slope_ < 0) {
            double slope = g_.dot(d);
            if (slope < 0) {
                double a = prev_alpha_ * prev_slope_ / slope;
                return std::clamp(a, 1e-12, 1e12);
            }
        }
        double l1 = g_.lpNorm<1>();
        return std::min(1.0, 1.0 / std::max(l1, 1e-300));
    }

    // line-search step with the spec'd fallback: cg/sd family retries once
    // from -g with alpha = min(1, 1/|g|); everything else terminates.
    Step step_line_search(Vector d, double alpha0, int iter, bool already_restarted = false) {
        double slope = g_.dot(d);
        if (!(slope < 0)) {
            d = -g_ * (scale_hint() > 0 ? scale_hint() : 1.0);
            slope = g_.dot(d);
            reset_cg();
            if (!(slope < 0)) return {}; // gradient is numerically zero
        }
        WolfeResult ls = wolfe_line_search(counted_, theta_, d, f_, g_, opts_.wolfe_c1, c2_,
                                           alpha0, opts_.line_search_max_evals);
        if (!ls.success) {
            if (is_cg_family() && !already_restarted) {
                reset_cg();
                double a0 = std::min(1.0, 1.0 / std::max(g_.norm(), 1e-300));
                return step_line_search(-g_, a0, iter, /*already_restarted=*/true);
            }
            return {};
        }
        Step st;
        st.ok = true;
        st.dir = std::move(d);
        st.alpha = ls.alpha;
        st.f_new = ls.f;
        st.g_new = std::move(ls.g);
        st.theta_new = theta_ + st.alpha * st.dir;
        st.slope0 = slope;
        st.line_searched = true;
        return st;
    }

    // --- cyclic steepest descent -------------------------------------------
    Step step_csd(int iter) {
        Vector d = -g_;
        double slope = g_.dot(d);
        if (csd_have_alpha_ && csd_pos_ % std::max(1, opts_.csd_cycle_length) != 0) {
            // reuse the cached step if it still gives sufficient decrease
            Vector gbuf(theta_.size());
            Vector tnew = theta_ + csd_alpha_ * d;
            double fnew = counted_.eval(tnew, gbuf);
            if (finite(fnew) && gbuf.allFinite() &&
                fnew <= f_ + opts_.wolfe_c1 * csd_alpha_ * slope) {
                ++csd_pos_;
                Step st;
                st.ok = true;
                st.dir = std::move(d);
                st.alpha = csd_alpha_;
                st.f_new = fnew;
                st.g_new = std::move(gbuf);
                st.theta_new = std::move(tnew);
                st.slope0 = slope;
                st.line_searched = false;
                return st;
            }
            // cached step no longer acceptable; fall through to a fresh search
        }
        Step st = step_line_search(std::move(d), first_alpha(-g_), iter);
        if (st.ok) {
            csd_alpha_ = st.alpha;
            csd_have_alpha_ = true;
            csd_pos_ = 1;
        }
        return st;
    }

    // --- Barzilai-Borwein with nonmonotone Armijo safeguard ------------------
    Step step_bb(int iter) {
        Vector d = -g_;
        double slope = g_.dot(d);
        double alpha;
        if (have_pair_) {
            double sy = last_s_.dot(last_y_);
            double ss = last_s_.squaredNorm();
            alpha = (sy > 0) ? ss / sy : 1.0;
            alpha = std::clamp(alpha, 1e-10, 1e10);
        } else {
            alpha = std::min(1.0, 1.0 / std::max(g_.lpNorm<1>(), 1e-300));
        }
        double fref = *std::max_element(fwindow_.begin(), fwindow_.end());
        Vector gbuf(theta_.size());
        double t = alpha;
        for (int back = 0; back < opts_.line_search_max_evals; ++back) {
            Vector tnew = theta_ + t * d;
            double fnew = counted_.eval(tnew, gbuf);
            if (finite(fnew) && gbuf.allFinite() &&
                fnew <= fref + opts_.wolfe_c1 * t * slope) {
                Step st;
                st.ok = true;
                st.dir = std::move(d);
                st.alpha = t;
                st.f_new = fnew;
                st.g_new = gbuf;
                st.theta_new = std::move(tnew);
                st.slope0 = slope;
                st.line_searched = false;
                return st;
            }
            t *= 0.5;
        }
        return {};
    }

    // --- nonlinear conjugate gradient family --------------------------------
    void reset_cg() {
        cg_have_prev_ = false;
        cg_since_restart_ = 0;
    }

    double scale_hint() const {
        if (kind_ == OptimizerKind::Scg && have_pair_) {
            double yy = last_y_.squaredNorm();
            double sy = last_s_.dot(last_y_);
            if (sy > 0 && yy > 0) return sy / yy;
        }
        return 1.0;
    }

    // diagonal of the memory-1 BFGS inverse-Hessian update of tau*I:
    // d_i = tau*(1 - rho*s_i*y_i)^2 + rho*s_i^2
    Vector precond_apply(const Vector& v) const {
        if (kind_ != OptimizerKind::Pcg || !have_pair_) return v;
        double sy = last_s_.dot(last_y_);
        double yy = last_y_.squaredNorm();
        if (!(sy > 0) || !(yy > 0)) return v;
        double tau = sy / yy;
        double rho = 1.0 / sy;
        Vector out(v.size());
        for (int i = 0; i < v.size(); ++i) {
            double t = 1.0 - rho * last_s_[i] * last_y_[i];
            double di = tau * t * t + rho * last_s_[i] * last_s_[i];
            out[i] = di * v[i];
        }
        return out;
    }

    Step step_cg(int iter) {
        // scaled/preconditioned gradient for direction construction
        Vector z;
        if (kind_ == OptimizerKind::Scg) {
            z = scale_hint() * g_;
        } else if (kind_ == OptimizerKind::Pcg) {
            z = precond_apply(g_);
        } else {
            z = g_;
        }

        Vector d;
        bool restart = !cg_have_prev_ || cg_since_restart_ >= int(theta_.size());
        if (restart) {
            d = -z;
            cg_since_restart_ = 0;
        } else {
            // Polak-Ribiere+, preconditioned form: beta = g'(z - z_prev) / (g_prev' z_prev)
            double denom = cg_prev_g_.dot(cg_prev_z_);
            double beta = denom > 0 ? g_.dot(z - cg_prev_z_) / denom : 0.0;
            beta = std::max(beta, 0.0);
            d = -z + beta * cg_prev_d_;
            if (!(g_.dot(d) < 0)) { // non-descent: restart
                d = -z;
                cg_since_restart_ = 0;
            }
        }

        double alpha0;
        if (kind_ == OptimizerKind::Cg) {
            alpha0 = first_alpha(d);
        } else {
            alpha0 = have_pair_ ? 1.0 : first_alpha(d);
        }
        Step st = step_line_search(d, alpha0, iter);
        if (st.ok) {
            // step_line_search may have swapped in a restart direction
            cg_prev_g_ = g_;
            cg_prev_z_ = std::move(z);
            cg_prev_d_ = st.dir;
            cg_have_prev_ = true;
            ++cg_since_restart_;
        }
        return st;
    }

    // --- L-BFGS --------------------------------------------------------------
    Vector lbfgs_direction() const { return -two_loop(g_); }

    Vector two_loop(const Vector& q0) const {
        if (pairs_.empty()) return q0;
        Vector q = q0;
        std::vector<double> a(pairs_.size());
        for (int i = int(pairs_.size()) - 1; i >= 0; --i) {
            a[i] = pairs_[i].rho * pairs_[i].s.dot(q);
            q -= a[i] * pairs_[i].y;
        }
        const Pair& newest = pairs_.back();
        double tau = newest.s.dot(newest.y) / newest.y.squaredNorm();
        q *= tau;
        for (size_t i = 0; i < pairs_.size(); ++i) {
            double b = pairs_[i].rho * pairs_[i].y.dot(q);
            q += (a[i] - b) * pairs_[i].s;
        }
        return q;
    }

    // --- dense BFGS ----------------------------------------------------------
    Vector qnewton_direction() {
        if (hinv_.size() == 0) hinv_ = Matrix::Identity(theta_.size(), theta_.size());
        return -(hinv_ * g_);
    }

    // --- truncated Newton (inner CG) -----------------------------------------
    Vector apply_hessian(const Vector& v) {
        if (counted_.hess_vec) return counted_.hess_vec(theta_, v);
        double vn = v.norm();
        if (vn == 0) return Vector::Zero(v.size());
        double eps = opts_.fd_epsilon ? *opts_.fd_epsilon
                                      : std::sqrt(std::numeric_limits<double>::epsilon()) *
                                            (1.0 + theta_.norm());
        return vn * hess_vec_fd(counted_, theta_, v / vn, eps);
    }

    Vector newton_cg_direction() {
        const bool precond = (kind_ == OptimizerKind::Pnewton0);
        Vector b = -g_;
        Vector x = Vector::Zero(b.size());
        Vector r = b;
        Vector z = precond ? two_loop(r) : r;
        Vector p = z;
        double rz = r.dot(z);
        double gnorm = g_.norm();
        double tol = std::min(0.5, std::sqrt(gnorm)) * gnorm;
        for (int j = 0; j < opts_.inner_cg_max; ++j) {
            Vector hp = apply_hessian(p);
            double php = p.dot(hp);
            if (!(php > 1e-12 * p.squaredNorm())) {
                // negative curvature: truncate
                return j == 0 ? b : x;
            }
            double a = rz / php;
            x += a * p;
            r -= a * hp;
            if (r.norm() <= tol) return x;
            z = precond ? two_loop(r) : r;
            double rz2 = r.dot(z);
            p = z + (rz2 / rz) * p;
            rz = rz2;
        }
        return x;
    }

    // --- exact Newton with Cholesky modification ------------------------------
    Vector mnewton_direction() {
        Matrix h;
        if (counted_.hessian) {
            h = counted_.hessian(theta_);
        } else {
            h = fd_hessian();
        }
        h = ((h + h.transpose()) / 2.0).eval();
        const int n = int(h.rows());
        double hnorm = h.cwiseAbs().rowwise().sum().maxCoeff(); // infinity norm
        double tau = 0.0;
        for (int tries = 0; tries < 200; ++tries) {
            Eigen::LLT<Matrix> llt(tau == 0 ? h : Matrix(h + tau * Matrix::Identity(n, n)));
            if (llt.info() == Eigen::Success) {
                Vector d = llt.solve(-g_);
                if (d.allFinite()) return d;
            }
            tau = (tau == 0) ? std::max(1e-6 * hnorm, 1e-300) : 2.0 * tau;
        }
        return -g_;
    }

    Matrix fd_hessian() {
        const int n = int(theta_.size());
        double eps = opts_.fd_epsilon ? *opts_.fd_epsilon
                                      : std::sqrt(std::numeric_limits<double>::epsilon()) *
                                            (1.0 + theta_.norm());
        Matrix h(n, n);
        Vector gp(n), gm(n), t = theta_;
        for (int j = 0; j < n; ++j) {
            double saved = t[j];
            t[j] = saved + eps;
            counted_.eval(t, gp);
            t[j] = saved - eps;
            counted_.eval(t, gm);
            t[j] = saved;
            h.col(j) = (gp - gm) / (2.0 * eps);
        }
        return h;
    }

    // --- curvature-pair bookkeeping -------------------------------------------
    void update_pairs(const Vector& s, const Vector& y) {
        double sy = s.dot(y);
        bool usable = sy > 1e-10 * s.norm() * y.norm();
        if (usable) {
            last_s_ = s;
            last_y_ = y;
            have_pair_ = true;
        }
        if (kind_ == OptimizerKind::Lbfgs || kind_ == OptimizerKind::Pnewton0) {
            if (usable) {
                pairs_.push_back({s, y, 1.0 / sy});
                while (int(pairs_.size()) > std::max(1, opts_.lbfgs_memory)) {
                    pairs_.erase(pairs_.begin());
                }
            }
        }
        if (kind_ == OptimizerKind::Qnewton && usable) {
            const int n = int(theta_.size());
            if (hinv_.size() == 0) hinv_ = Matrix::Identity(n, n);
            if (!qn_scaled_) {
                hinv_ = (sy / y.squaredNorm()) * Matrix::Identity(n, n);
                qn_scaled_ = true;
            }
            double rho = 1.0 / sy;
            Vector hy = hinv_ * y;
            double yhy = y.dot(hy);
            hinv_ += rho * (1.0 + rho * yhy) * (s * s.transpose()) -
                     rho * (hy * s.transpose() + s * hy.transpose());
        }
    }

    const Objective& user_obj_;
    Objective counted_;
    OptimizerKind kind_;
    OptimizerOptions opts_;
    double c2_;
    int fevals_ = 0;

    Vector theta_, g_;
    double f_ = 0;
    Vector best_theta_;
    double best_f_ = kInf;
    std::deque<double> fwindow_; // last 10 accepted f values (bb safeguard)

    double prev_alpha_ = 0, prev_slope_ = 0;

    // cg family state
    bool cg_have_prev_ = false;
    int cg_since_restart_ = 0;
    Vector cg_prev_g_, cg_prev_z_, cg_prev_d_;

    // csd state
    bool csd_have_alpha_ = false;
    double csd_alpha_ = 0;
    int csd_pos_ = 0;

    // curvature pairs
    bool have_pair_ = false;
    Vector last_s_, last_y_;
    std::vector<Pair> pairs_;

    // dense BFGS
    Matrix hinv_;
    bool qn_scaled_ = false;
};

} // namespace

MinimizeResult minimize(const Objective& obj, const Vector& theta0, OptimizerKind kind,
                        const OptimizerOptions& options) {
    if (obj.dim != theta0.size())
        throw DimensionMismatch("minimize: theta0 size does not match objective dimension");
    if (!theta0.allFinite()) throw NonFiniteObjective("minimize: theta0 is not finite");
    if (options.max_iter < 0) throw Error("minimize: max_iter must be >= 0");
    double c2 = options.wolfe_c2 ? *options.wolfe_c2 : default_wolfe_c2(kind);
    if (!(options.wolfe_c1 > 0) || !(options.wolfe_c1 < c2) || !(c2 < 1))
        throw Error("minimize: requires 0 < c1 < c2 < 1");
    Minimizer m(obj, kind, options);
    return m.run(theta0);
}

} // namespace tabsae
