#pragma once

// DPG / FDPG / GFDPG iteration engines on the dual q~ = F + G.

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "schedule.hpp"

namespace dualprox {

enum class Method { dpg, fdpg, gfdpg };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::dpg: return "dpg";
        case Method::fdpg: return "fdpg";
        case Method::gfdpg: return "gfdpg";
    }
    return "?";
}

struct StepSizeRule {
    enum class Mode { fixed, backtracking };
    Mode mode = Mode::fixed;
    double initial_l = 1.0;  ///< L for fixed mode, L_0 for backtracking
    double eta = 2.0;

    static StepSizeRule fixed(double l) { return {Mode::fixed, l, 2.0}; }
    static StepSizeRule backtracking(double l0, double eta = 2.0) { return {Mode::backtracking, l0, eta}; }
    /// L_0 = max(L_F / 16, tiny), eta = 2.
    static StepSizeRule default_backtracking(const CompositeProblem& p) {
        return backtracking(std::max(p.lipschitz_dual() / 16.0, 1e-12), 2.0);
    }
};

struct DpgStep {
    Vector y;  ///< p_L(y_prev)
    Vector u;  ///< x(y_prev)
    Vector v;  ///< prox_{Lg}(A u - L y_prev) = z(y)
};

/// One alternating-minimization step: u = x(y_prev), v = prox_{Lg}(Au - L y_prev),
/// y = y_prev - (Au - v) / L.
inline DpgStep dpg_step(const CompositeProblem& p, const Vector& y_prev, double step_l) {
    if (!(step_l > 0.0)) throw ArgumentError("step constant L must be positive");
    DpgStep s;
    s.u = primal_from_dual(p, y_prev);
    const Vector au = p.op().apply(s.u);
    s.v = p.g().prox(step_l, au - step_l * y_prev);
    s.y = y_prev - (au - s.v) / step_l;
    return s;
}

/// p_L(y) = prox_{G/L}(y - grad F(y)/L) through the Moreau decomposition
/// prox_{c g*}(w) = w - c prox_{g/c}(w/c), with G(y) = g*(-y).
inline Vector prox_form_step(const CompositeProblem& p, const Vector& y_prev, double step_l) {
    if (!(step_l > 0.0)) throw ArgumentError("step constant L must be positive");
    const Vector bar = y_prev - grad_dual_smooth(p, y_prev) / step_l;
    const Vector w = -bar;
    const double c = 1.0 / step_l;
    const Vector u_star = w - c * p.g().prox(1.0 / c, w / c);
    return -u_star;
}

/// w_k from the GFDPG table.
inline Vector gfdpg_momentum(const Vector& y_k, const Vector& y_prev, const Vector& w_prev, double t_prev,
                             double t_k, double big_t_prev, double big_t_k) {
    const double denom = t_prev * big_t_k;
    const double c_y = (big_t_prev - t_prev) * t_k / denom;
    const double c_w = (t_prev * t_prev - big_t_prev) * t_k / denom;
    return y_k + c_y * (y_k - y_prev) + c_w * (y_k - w_prev);
}

/// Q_L(y, w) = F(w) + <y - w, grad F(w)> + L/2 ||y - w||^2 + G(y), with G(y) supplied.
inline ExtendedReal majorizer_value(const CompositeProblem& p, const Vector& y, const Vector& w, double step_l,
                                    ExtendedReal big_g_at_y) {
    const Vector xw = primal_from_dual(p, w);
    const Vector grad = p.op().apply(xw);
    const Vector d = y - w;
    return dual_smooth_value(p, w, xw) + d.dot(grad) + 0.5 * step_l * d.squaredNorm() + big_g_at_y;
}

/// F(y) - F(w) - <grad F(w), y - w>, which equals the Bregman distance of f
/// between x_w and x_y taken with the subgradient A^T y at x_y.
inline BregmanGap dual_bregman_gap(const CompositeProblem& p, const Vector& y, const Vector& x_y, const Vector& x_w) {
    return p.f().bregman(x_w, x_y, p.op().apply_adjoint(y));
}

struct BacktrackResult {
    double step_l = 0.0;
    DpgStep step;
    double dual_value = 0.0;  ///< q~(y)
    int doublings = 0;
};

inline constexpr int kMaxDoublings = 60;

/// Smallest L in {L_start eta^j} with q~(p_L(w)) <= Q_L(p_L(w), w). Since G(p_L(w))
/// appears on both sides, the test reduces to the Bregman gap of F.
inline BacktrackResult backtracking_search(const CompositeProblem& p, const Vector& w, double l_start, double eta) {
    if (!(l_start > 0.0)) throw ArgumentError("initial L must be positive");
    if (!(eta > 1.0)) throw ArgumentError("backtracking growth factor must exceed 1");
    const Vector x_w = primal_from_dual(p, w);
    const Vector a_xw = p.op().apply(x_w);
    double l = l_start;
    for (int j = 0; j <= kMaxDoublings; ++j, l *= eta) {
        DpgStep s;
        s.u = x_w;
        s.v = p.g().prox(l, a_xw - l * w);
        s.y = w - (a_xw - s.v) / l;
        const Vector x_y = primal_from_dual(p, s.y);
        const BregmanGap gap = dual_bregman_gap(p, s.y, x_y, x_w);
        if (gap.value <= 0.5 * l * (s.y - w).squaredNorm() + gap.roundoff) {
            BacktrackResult r;
            r.step_l = l;
            r.doublings = j;
            const ExtendedReal q = dual_smooth_value(p, s.y, x_y) + dual_nonsmooth_value(p, s.y, s.v);
            r.dual_value = q.is_finite() ? q.value() : kInf;
            r.step = std::move(s);
            return r;
        }
    }
    throw BacktrackingError("sufficient-decrease condition unmet after 60 increases of L");
}

/// Certificate-mode evaluation of p_{L'}(y_k) with L' backtracked from L_k.
struct ProxProbe {
    double l_prime = 0.0;
    Vector p;
    double pg_norm = 0.0;      ///< ||p_{L'}(y_k) - y_k||
    double p_norm = 0.0;       ///< ||p_{L'}(y_k)||
    double dual_value = 0.0;   ///< q~(p)
    ExtendedReal primal_value; ///< H(x(p))
    ExtendedReal pd_gap;       ///< H(x(p)) - q(p)
    ExtendedReal split_gap;    ///< H~(x(p), z(p)) - q(p)
    double descent_lhs = 0.0;  ///< (L'/2) ||p - y_k||^2
    double descent_rhs = 0.0;  ///< q~(y_k) - q~(p)
};

struct IterateRecord {
    long k = 0;
    double step_l = 0.0;
    double t = std::numeric_limits<double>::quiet_NaN();      ///< t_k (NaN for dpg)
    double big_t = std::numeric_limits<double>::quiet_NaN();  ///< T_k (NaN for dpg)
    Vector y;
    Vector w;
    double dual_value = 0.0;    ///< q~(y_k)
    ExtendedReal primal_value;  ///< H(x(y_k))
    ExtendedReal pd_gap;        ///< H(x(y_k)) - q(y_k)
    ExtendedReal split_gap;     ///< H~(x(y_k), z(y_k)) - q(y_k), z(y_k) = v_k
    double step_norm = 0.0;     ///< ||y_k - w_{k-1}||
    double infeasibility = 0.0; ///< ||A u_k - v_k|| = L_k ||y_k - w_{k-1}||
    double lemma2_residual = 0.0;
    double sform_residual = std::numeric_limits<double>::quiet_NaN();
    std::optional<ProxProbe> probe;
};

enum class Termination { max_iters, pg_tolerance, stagnation, aborted };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::max_iters: return "max-iters";
        case Termination::pg_tolerance: return "prox-grad tolerance";
        case Termination::stagnation: return "stagnation";
        case Termination::aborted: return "aborted";
    }
    return "?";
}

struct ProblemConstants {
    double lipschitz_dual = 0.0;
    double sigma = 0.0;
    double op_norm = 0.0;
    double gamma_g = kInf;
    double gamma_h = kInf;

    static ProblemConstants of(const CompositeProblem& p) {
        return {p.lipschitz_dual(), p.sigma(), p.op().norm(), p.gamma_g(), p.gamma_h()};
    }
};

struct SolverOptions {
    Method method = Method::fdpg;
    Schedule schedule = Schedule::fista();
    StepSizeRule step;
    std::optional<Vector> y0;
    long max_iters = 100;
    double pg_tol = 0.0;
    bool certificate_mode = false;
    /// Stop once an iteration reproduces the previous state bit for bit.
    bool stop_on_stagnation = false;
};

struct SolverReport {
    Method method = Method::fdpg;
    Schedule schedule = Schedule::fista();
    StepSizeRule step;
    ProblemConstants constants;
    Vector y0;
    double dual_value_y0 = 0.0;
    /// t_0..t_K and T_0..T_K actually used (fista for fdpg, empty for dpg).
    MomentumSequence momentum;
    std::vector<IterateRecord> records;
    Termination termination = Termination::max_iters;
    std::string abort_message;
    double wall_seconds = 0.0;
};

inline ProxProbe probe_prox_gradient(const CompositeProblem& p, const Vector& y, double dual_at_y, double l_start,
                                     double eta) {
    const BacktrackResult bt = backtracking_search(p, y, l_start, eta);
    ProxProbe pr;
    pr.l_prime = bt.step_l;
    pr.p = bt.step.y;
    pr.pg_norm = (bt.step.y - y).norm();
    pr.p_norm = bt.step.y.norm();
    pr.dual_value = bt.dual_value;
    const Vector x_p = primal_from_dual(p, bt.step.y);
    pr.primal_value = eval_primal(p, x_p);
    pr.pd_gap = pr.primal_value + bt.dual_value;
    pr.split_gap = eval_split_primal(p, x_p, bt.step.v) + bt.dual_value;
    pr.descent_lhs = 0.5 * bt.step_l * pr.pg_norm * pr.pg_norm;
    pr.descent_rhs = dual_at_y - bt.dual_value;
    return pr;
}

namespace detail {

inline double dual_value_at_y0(const CompositeProblem& p, const Vector& y0) {
    if (p.g().has_conjugate()) {
        const ExtendedReal q = eval_dual(p, y0);
        return q.is_finite() ? q.value() : kInf;
    }
    // Without g*, y0 is only evaluable when it is its own prox output.
    return kInf;
}

}  // namespace detail

/// Runs the FDPG / GFDPG table loop (DPG: no momentum) for up to max_iters steps.
/// Oracle or backtracking failures end the run with Termination::aborted and
/// the records gathered so far.
inline SolverReport run_solver(const CompositeProblem& p, const SolverOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    SolverReport rep;
    rep.method = opts.method;
    rep.schedule = opts.method == Method::gfdpg ? opts.schedule : Schedule::fista();
    rep.step = opts.step;
    rep.constants = ProblemConstants::of(p);
    rep.y0 = opts.y0 ? *opts.y0 : Vector::Zero(p.dual_dim());
    if (rep.y0.size() != p.dual_dim()) throw ArgumentError("y0 has the wrong dimension");
    if (opts.max_iters < 0) throw ArgumentError("max_iters must be nonnegative");
    if (!(opts.step.initial_l > 0.0)) throw ArgumentError("step constant L must be positive");
    if (opts.step.mode == StepSizeRule::Mode::backtracking && !(opts.step.eta > 1.0))
        throw ArgumentError("backtracking growth factor must exceed 1");
    if (opts.method != Method::dpg) rep.momentum = rep.schedule.generate(opts.max_iters);
    rep.dual_value_y0 = detail::dual_value_at_y0(p, rep.y0);
    rep.records.reserve(static_cast<std::size_t>(opts.max_iters));

    Vector y_prev = rep.y0;
    Vector w_prev = rep.y0;
    Vector s = rep.y0;
    double l = opts.step.initial_l;
    const bool fixed = opts.step.mode == StepSizeRule::Mode::fixed;

    try {
        for (long k = 1; k <= opts.max_iters; ++k) {
            IterateRecord rec;
            rec.k = k;
            DpgStep step;
            double dual_value = 0.0;
            if (fixed) {
                step = dpg_step(p, w_prev, l);
                const ExtendedReal q = eval_dual(p, step.y, step.v);
                dual_value = q.is_finite() ? q.value() : kInf;
            } else {
                BacktrackResult bt = backtracking_search(p, w_prev, l, opts.step.eta);
                l = bt.step_l;
                dual_value = bt.dual_value;
                step = std::move(bt.step);
            }
            rec.step_l = l;
            rec.y = step.y;
            rec.dual_value = dual_value;

            const Vector au = p.op().apply(step.u);
            rec.step_norm = (step.y - w_prev).norm();
            rec.infeasibility = (au - step.v).norm();
            rec.lemma2_residual = (au - step.v + l * (step.y - w_prev)).norm() / (1.0 + au.norm());

            const Vector x_y = primal_from_dual(p, step.y);
            rec.primal_value = eval_primal(p, x_y);
            rec.pd_gap = rec.primal_value + dual_value;
            rec.split_gap = eval_split_primal(p, x_y, step.v) + dual_value;

            const auto kk = static_cast<std::size_t>(k);
            switch (opts.method) {
                case Method::dpg:
                    rec.w = step.y;
                    break;
                case Method::fdpg: {
                    const double t_prev = rep.momentum.t[kk - 1];
                    const double t_k = rep.momentum.t[kk];
                    rec.t = t_k;
                    rec.big_t = rep.momentum.big_t[kk];
                    rec.w = step.y + ((t_prev - 1.0) / t_k) * (step.y - y_prev);
                    break;
                }
                case Method::gfdpg: {
                    const double t_prev = rep.momentum.t[kk - 1];
                    const double t_k = rep.momentum.t[kk];
                    const double big_t_prev = rep.momentum.big_t[kk - 1];
                    const double big_t_k = rep.momentum.big_t[kk];
                    rec.t = t_k;
                    rec.big_t = big_t_k;
                    rec.w = gfdpg_momentum(step.y, y_prev, w_prev, t_prev, t_k, big_t_prev, big_t_k);
                    s += t_prev * (step.y - w_prev);
                    const Vector w_sform = (big_t_prev / big_t_k) * step.y + (t_k / big_t_k) * s;
                    rec.sform_residual = (w_sform - rec.w).norm() / (1.0 + rec.w.norm());
                    break;
                }
            }

            if (opts.certificate_mode) {
                rec.probe = probe_prox_gradient(p, step.y, dual_value, l, fixed ? 2.0 : opts.step.eta);
            }

            const bool stagnant = opts.stop_on_stagnation && rec.y == y_prev && rec.w == w_prev;
            const double pg = rec.probe ? rec.probe->pg_norm : rec.step_norm;
            y_prev = step.y;
            w_prev = rec.w;
            rep.records.push_back(std::move(rec));
            if (opts.pg_tol > 0.0 && pg <= opts.pg_tol) {
                rep.termination = Termination::pg_tolerance;
                break;
            }
            if (stagnant) {
                rep.termination = Termination::stagnation;
                break;
            }
        }
    } catch (const Error& e) {
        rep.termination = Termination::aborted;
        rep.abort_message = e.what();
    }
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

}  // namespace dualprox
