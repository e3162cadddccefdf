#pragma once

// Reference dual/primal optima computed independently of the iteration engines
// the certificates check: an exact active-set enumeration of the dual QP, and a
// long fixed-step accelerated run for problems the enumeration cannot handle.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "core.hpp"
#include "solvers.hpp"

namespace dualprox {

enum class Provenance { closed_form, enumeration, long_run };

inline const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::closed_form: return "closed-form";
        case Provenance::enumeration: return "active-set enumeration";
        case Provenance::long_run: return "long-run";
    }
    return "?";
}

struct ReferenceSolution {
    Vector y_star;
    Vector x_star;
    double dual_value = 0.0;    ///< q~(y*)
    ExtendedReal primal_value;  ///< H(x*)
    Provenance provenance = Provenance::closed_form;
    double residual = 0.0;      ///< KKT violation (enumeration) or final prox-grad norm (long run)
    bool low_precision = false;
    std::string note;
};

enum class ReferenceMode { enumerate, longrun };

struct ReferenceOptions {
    double tol = 1e-12;
    long max_iters = 1000000;
};

inline constexpr Index kMaxEnumerationDim = 14;

namespace detail {

/// One admissible location of a dual coordinate: pinned at a breakpoint, or
/// free inside an open piece with constant slope.
struct CoordinateState {
    bool fixed = false;
    double value = 0.0;                 // fixed
    double sub_lo = -kInf, sub_hi = kInf;  // fixed: subdifferential of G_i there
    double slope = 0.0;                 // free
    double lo = -kInf, hi = kInf;       // free: piece interval
};

inline std::vector<CoordinateState> coordinate_states(const DualPiece& piece) {
    std::vector<CoordinateState> states;
    auto fixed_at = [&](double v, double lo, double hi) {
        CoordinateState s;
        s.fixed = true;
        s.value = v;
        s.sub_lo = lo;
        s.sub_hi = hi;
        states.push_back(s);
    };
    auto free_on = [&](double lo, double hi, double slope) {
        CoordinateState s;
        s.lo = lo;
        s.hi = hi;
        s.slope = slope;
        states.push_back(s);
    };
    if (piece.lo == piece.hi) {
        fixed_at(piece.lo, -kInf, kInf);
        return states;
    }
    if (std::isfinite(piece.lo)) fixed_at(piece.lo, -kInf, piece.slope_left);
    if (piece.kink) {
        free_on(piece.lo, *piece.kink, piece.slope_left);
        fixed_at(*piece.kink, piece.slope_left, piece.slope_right);
        free_on(*piece.kink, piece.hi, piece.slope_right);
    } else {
        free_on(piece.lo, piece.hi, piece.slope_left);
    }
    const double last_slope = piece.kink ? piece.slope_right : piece.slope_left;
    if (std::isfinite(piece.hi)) fixed_at(piece.hi, last_slope, kInf);
    return states;
}

inline double piece_value(const DualPiece& piece, double y) {
    if (piece.kink) return y < *piece.kink ? piece.slope_left * (y - *piece.kink) : piece.slope_right * (y - *piece.kink);
    return piece.slope_left * y;
}

}  // namespace detail

/// Exact dual optimum for quadratic f with a separable piecewise-linear dual
/// part G: enumerates every combination of coordinate states, solves the
/// reduced stationarity system, keeps KKT-feasible patterns and returns the
/// one with smallest q~ (first pattern on ties).
inline ReferenceSolution reference_enumerate(const CompositeProblem& p) {
    const auto form = p.f().quadratic_form();
    const Index m = p.dual_dim();
    const auto pieces = p.g().dual_pieces(m);
    if (!form || !pieces) throw CapabilityError("enumeration needs a quadratic f and a separable dual part");
    if (m > kMaxEnumerationDim) throw CapabilityError("enumeration refused: dual dimension exceeds 14");

    // F(y) = 0.5 y^T M y + c^T y + c0.
    const Matrix a = p.op().to_dense();
    const Vector qinv = form->q.cwiseInverse();
    const Matrix mm = a * qinv.asDiagonal() * a.transpose();
    const Vector c = a * qinv.cwiseProduct(form->b);
    const double c0 = 0.5 * form->b.dot(qinv.cwiseProduct(form->b)) - form->offset;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(mm);
    if (eig.eigenvalues().minCoeff() <= 1e-12 * std::max(1.0, eig.eigenvalues().maxCoeff()))
        throw CapabilityError("enumeration refused: A Q^-1 A^T is singular (dual optimum not unique)");

    std::vector<std::vector<detail::CoordinateState>> states;
    std::uint64_t total = 1;
    for (const auto& piece : *pieces) {
        states.push_back(detail::coordinate_states(piece));
        total *= states.back().size();
    }

    const double scale = 1.0 + mm.cwiseAbs().maxCoeff() + c.cwiseAbs().maxCoeff();
    const double tol = 1e-9 * scale;
    std::optional<Vector> best;
    double best_value = kInf;
    double best_violation = 0.0;
    std::vector<std::size_t> choice(static_cast<std::size_t>(m));
    for (std::uint64_t pattern = 0; pattern < total; ++pattern) {
        std::uint64_t rest = pattern;
        std::vector<Index> free_idx, fixed_idx;
        Vector y = Vector::Zero(m);
        Vector slope = Vector::Zero(m);
        for (Index i = 0; i < m; ++i) {
            const auto& si = states[static_cast<std::size_t>(i)];
            choice[static_cast<std::size_t>(i)] = rest % si.size();
            rest /= si.size();
            const auto& st = si[choice[static_cast<std::size_t>(i)]];
            if (st.fixed) {
                fixed_idx.push_back(i);
                y[i] = st.value;
            } else {
                free_idx.push_back(i);
                slope[i] = st.slope;
            }
        }
        if (!free_idx.empty()) {
            const auto nf = static_cast<Index>(free_idx.size());
            Matrix mff(nf, nf);
            Vector rhs(nf);
            for (Index r = 0; r < nf; ++r) {
                const Index i = free_idx[static_cast<std::size_t>(r)];
                double acc = c[i] + slope[i];
                for (Index j : fixed_idx) acc += mm(i, j) * y[j];
                rhs[r] = -acc;
                for (Index s = 0; s < nf; ++s) mff(r, s) = mm(i, free_idx[static_cast<std::size_t>(s)]);
            }
            const Vector yf = mff.llt().solve(rhs);
            for (Index r = 0; r < nf; ++r) y[free_idx[static_cast<std::size_t>(r)]] = yf[r];
        }
        const Vector grad = mm * y + c;
        double violation = 0.0;
        for (Index i = 0; i < m; ++i) {
            const auto& st = states[static_cast<std::size_t>(i)][choice[static_cast<std::size_t>(i)]];
            if (st.fixed) {
                const double need = -grad[i];
                violation = std::max({violation, st.sub_lo - need, need - st.sub_hi});
            } else {
                violation = std::max({violation, st.lo - y[i], y[i] - st.hi, std::abs(grad[i] + st.slope)});
            }
        }
        if (violation > tol) continue;
        double value = 0.5 * y.dot(mm * y) + c.dot(y) + c0;
        for (Index i = 0; i < m; ++i) value += detail::piece_value((*pieces)[static_cast<std::size_t>(i)], y[i]);
        if (value < best_value) {
            best_value = value;
            best = y;
            best_violation = violation;
        }
    }
    if (!best) throw Error("enumeration found no KKT point");

    ReferenceSolution ref;
    ref.y_star = *best;
    ref.x_star = (form->b + a.transpose() * ref.y_star).cwiseQuotient(form->q);
    ref.dual_value = best_value;
    ref.primal_value = eval_primal(p, ref.x_star);
    ref.provenance = Provenance::enumeration;
    ref.residual = best_violation;
    ref.note = std::to_string(total) + " patterns";
    return ref;
}

/// FDPG with fixed L = L_F until ||p_{L_F}(y_k) - y_k|| <= tol or max_iters.
/// The returned y* is the last prox output, so z(y*) is available for q~(y*).
inline ReferenceSolution reference_longrun(const CompositeProblem& p, const ReferenceOptions& opts = {}) {
    const double l = p.lipschitz_dual();
    Vector y = Vector::Zero(p.dual_dim());
    Vector w = y;
    double t = 1.0;
    double residual = kInf;
    DpgStep last = dpg_step(p, y, l);
    long k = 0;
    for (; k < opts.max_iters; ++k) {
        DpgStep s = dpg_step(p, w, l);
        const double t_next = fista_momentum(t);
        const Vector w_next = s.y + ((t - 1.0) / t_next) * (s.y - y);
        y = s.y;
        w = w_next;
        t = t_next;
        if (k % 10 == 0 || k + 1 == opts.max_iters) {
            last = dpg_step(p, y, l);
            residual = (last.y - y).norm();
            if (residual <= opts.tol) break;
        }
    }
    ReferenceSolution ref;
    ref.y_star = last.y;
    ref.x_star = primal_from_dual(p, ref.y_star);
    const ExtendedReal q = eval_dual(p, ref.y_star, last.v);
    ref.dual_value = q.is_finite() ? q.value() : kInf;
    ref.primal_value = eval_primal(p, ref.x_star);
    ref.provenance = Provenance::long_run;
    ref.residual = residual;
    ref.low_precision = !(residual <= opts.tol);
    ref.note = std::to_string(k + 1) + " iterations";
    return ref;
}

inline ReferenceSolution reference_solve(const CompositeProblem& p, ReferenceMode mode, const ReferenceOptions& opts = {}) {
    return mode == ReferenceMode::enumerate ? reference_enumerate(p) : reference_longrun(p, opts);
}

}  // namespace dualprox
