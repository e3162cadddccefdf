#pragma once

// Closed-form oracles used by the problem gallery.

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "core.hpp"

namespace dualprox {

/// f(x) = 0.5 x^T diag(q) x - b^T x + offset, sigma = min q.
namespace detail {

/// sum_j 0.5 c_j d_j^2 + r_j d_j with d = x - x_at and r = grad(x_at) - s_at.
/// The roundoff scale covers d itself being at the resolution of x and x_at.
inline BregmanGap separable_quadratic_bregman(const Vector& c, const Vector& x, const Vector& x_at, const Vector& r) {
    const Vector d = x - x_at;
    const double quad = 0.5 * d.dot(c.cwiseProduct(d));
    const double lin = r.dot(d);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const auto n = static_cast<double>(d.size());
    const double resolution = 16.0 * eps * (x.cwiseAbs().maxCoeff() + x_at.cwiseAbs().maxCoeff());
    const double noise = 0.5 * c.maxCoeff() * n * resolution * resolution;
    return {quad + lin, (8.0 + n) * eps * (quad + r.cwiseAbs().dot(d.cwiseAbs())) + noise};
}

}  // namespace detail

class DiagonalQuadraticOracle final : public StronglyConvexOracle {
public:
    DiagonalQuadraticOracle(Vector q, Vector b, double offset = 0.0)
        : form_{std::move(q), std::move(b), offset} {
        if (form_.q.size() != form_.b.size()) throw ArgumentError("quadratic: q and b differ in length");
        if (form_.q.size() == 0 || !(form_.q.minCoeff() > 0.0)) throw ArgumentError("quadratic: q must be positive");
    }

    /// 0.5 ||x - d||^2.
    static DiagonalQuadraticOracle squared_distance(const Vector& d) {
        return {Vector::Ones(d.size()), d, 0.5 * d.squaredNorm()};
    }

    [[nodiscard]] double modulus() const override { return form_.q.minCoeff(); }
    [[nodiscard]] ExtendedReal value(const Vector& x) const override {
        return 0.5 * x.dot(form_.q.cwiseProduct(x)) - form_.b.dot(x) + form_.offset;
    }
    [[nodiscard]] Vector conjugate_argmax(const Vector& u) const override {
        return (form_.b + u).cwiseQuotient(form_.q);
    }
    [[nodiscard]] std::optional<Vector> subgradient(const Vector& x) const override {
        return Vector(form_.q.cwiseProduct(x) - form_.b);
    }
    [[nodiscard]] std::optional<DiagonalQuadratic> quadratic_form() const override { return form_; }
    [[nodiscard]] BregmanGap bregman(const Vector& x, const Vector& x_at, const Vector& s_at) const override {
        // The only subgradient of a smooth quadratic is its gradient, so the
        // linear term vanishes; evaluating it would add pure roundoff.
        (void)s_at;
        return detail::separable_quadratic_bregman(form_.q, x, x_at, Vector::Zero(x.size()));
    }

private:
    DiagonalQuadratic form_;
};

/// Negative separable quadratic utility on a box:
/// f(x) = sum_j (0.5 beta_j x_j^2 - alpha_j x_j) + indicator{lo <= x <= hi}.
class BoxedUtilityOracle final : public StronglyConvexOracle {
public:
    BoxedUtilityOracle(Vector alpha, Vector beta, Vector lo, Vector hi)
        : alpha_(std::move(alpha)), beta_(std::move(beta)), lo_(std::move(lo)), hi_(std::move(hi)) {
        const Index n = alpha_.size();
        if (beta_.size() != n || lo_.size() != n || hi_.size() != n) throw ArgumentError("utility: size mismatch");
        if (n == 0 || !(beta_.minCoeff() > 0.0)) throw ArgumentError("utility: beta must be positive");
        if ((lo_.array() > hi_.array()).any()) throw ArgumentError("utility: empty box");
    }

    [[nodiscard]] double modulus() const override { return beta_.minCoeff(); }
    [[nodiscard]] ExtendedReal value(const Vector& x) const override {
        if ((x.array() < lo_.array()).any() || (x.array() > hi_.array()).any()) return ExtendedReal::infinity();
        return 0.5 * x.dot(beta_.cwiseProduct(x)) - alpha_.dot(x);
    }
    [[nodiscard]] Vector conjugate_argmax(const Vector& u) const override {
        return (alpha_ + u).cwiseQuotient(beta_).cwiseMax(lo_).cwiseMin(hi_);
    }
    /// Gradient of the smooth part, a subgradient everywhere on the box.
    [[nodiscard]] std::optional<Vector> subgradient(const Vector& x) const override {
        return Vector(beta_.cwiseProduct(x) - alpha_);
    }
    [[nodiscard]] BregmanGap bregman(const Vector& x, const Vector& x_at, const Vector& s_at) const override {
        if (!value(x).is_finite() || !value(x_at).is_finite()) return {kInf, 0.0};
        // Off the box boundary the subgradient is the gradient; only clipped
        // coordinates carry a normal-cone component.
        Vector r = beta_.cwiseProduct(x_at) - alpha_ - s_at;
        for (Index j = 0; j < r.size(); ++j)
            if (x_at[j] > lo_[j] && x_at[j] < hi_[j]) r[j] = 0.0;
        return detail::separable_quadratic_bregman(beta_, x, x_at, r);
    }

    [[nodiscard]] const Vector& alpha() const { return alpha_; }
    [[nodiscard]] const Vector& beta() const { return beta_; }
    [[nodiscard]] const Vector& lo() const { return lo_; }
    [[nodiscard]] const Vector& hi() const { return hi_; }

private:
    Vector alpha_, beta_, lo_, hi_;
};

/// g(z) = lambda ||z||_1 on R^m.
class L1NormOracle final : public ProxOracle {
public:
    L1NormOracle(double lambda, Index m) : lambda_(lambda), m_(m) {
        if (!(lambda > 0.0)) throw ArgumentError("l1: lambda must be positive");
    }

    [[nodiscard]] ExtendedReal value(const Vector& z) const override { return lambda_ * z.lpNorm<1>(); }
    [[nodiscard]] Vector prox(double c, const Vector& w) const override {
        const double thr = c * lambda_;
        return w.unaryExpr([thr](double v) { return std::copysign(std::max(std::abs(v) - thr, 0.0), v); });
    }
    [[nodiscard]] double subgradient_bound() const override { return lambda_ * std::sqrt(static_cast<double>(m_)); }
    [[nodiscard]] bool has_conjugate() const override { return true; }
    /// Indicator of ||u||_inf <= lambda, with one part in 1e12 of slack for prox outputs.
    [[nodiscard]] ExtendedReal conjugate(const Vector& u) const override {
        if (u.size() > 0 && u.lpNorm<Eigen::Infinity>() > lambda_ * (1.0 + 1e-12)) return ExtendedReal::infinity();
        return 0.0;
    }
    [[nodiscard]] Vector conjugate_argmax(const Vector& u) const override {
        if (u.size() > 0 && u.lpNorm<Eigen::Infinity>() > lambda_ * (1.0 + 1e-12))
            throw UnboundedError("l1: |u_i| > lambda, argmin of <y, z> + g(z) is unbounded below");
        return Vector::Zero(u.size());
    }
    [[nodiscard]] std::optional<std::vector<DualPiece>> dual_pieces(Index m) const override {
        DualPiece piece;
        piece.lo = -lambda_;
        piece.hi = lambda_;
        return std::vector<DualPiece>(static_cast<std::size_t>(m), piece);
    }
    [[nodiscard]] double lambda() const { return lambda_; }

private:
    double lambda_;
    Index m_;
};

/// g(z) = w sum_i max(0, z_i - b_i): a linear penalty on exceeding b.
class OverrunPenaltyOracle final : public ProxOracle {
public:
    OverrunPenaltyOracle(double weight, Vector cap) : weight_(weight), cap_(std::move(cap)) {
        if (!(weight > 0.0)) throw ArgumentError("overrun penalty: weight must be positive");
        if (!cap_.allFinite()) throw ArgumentError("overrun penalty: caps must be finite");
    }

    [[nodiscard]] ExtendedReal value(const Vector& z) const override {
        return weight_ * (z - cap_).cwiseMax(0.0).sum();
    }
    [[nodiscard]] Vector prox(double c, const Vector& w) const override {
        const double thr = c * weight_;
        Vector out = w;
        for (Index i = 0; i < w.size(); ++i) {
            if (w[i] > cap_[i] + thr) out[i] = w[i] - thr;
            else if (w[i] > cap_[i]) out[i] = cap_[i];
        }
        return out;
    }
    [[nodiscard]] double subgradient_bound() const override {
        return weight_ * std::sqrt(static_cast<double>(cap_.size()));
    }
    [[nodiscard]] bool has_conjugate() const override { return true; }
    /// <u, b> on 0 <= u <= w, with one part in 1e12 of slack for prox outputs.
    [[nodiscard]] ExtendedReal conjugate(const Vector& u) const override {
        if (!in_domain(u)) return ExtendedReal::infinity();
        return u.dot(cap_);
    }
    [[nodiscard]] Vector conjugate_argmax(const Vector& u) const override {
        if (!in_domain(u)) throw UnboundedError("overrun penalty: u outside [0, weight]");
        return cap_;
    }
    [[nodiscard]] std::optional<std::vector<DualPiece>> dual_pieces(Index m) const override {
        std::vector<DualPiece> pieces;
        for (Index i = 0; i < m; ++i) {
            DualPiece piece;
            piece.lo = -weight_;
            piece.hi = 0.0;
            piece.slope_left = -cap_[i];
            pieces.push_back(piece);
        }
        return pieces;
    }
    [[nodiscard]] double weight() const { return weight_; }

private:
    [[nodiscard]] bool in_domain(const Vector& u) const {
        const double tol = 1e-12 * weight_;
        return (u.array() >= -tol).all() && (u.array() <= weight_ + tol).all();
    }

    double weight_;
    Vector cap_;
};

namespace detail {

inline double box_support(double u, double lo, double hi) {
    if (u > 0.0) return std::isfinite(hi) ? u * hi : kInf;
    if (u < 0.0) return std::isfinite(lo) ? u * lo : kInf;
    return 0.0;
}

inline double box_support_argmax(double u, double lo, double hi) {
    if (u > 0.0) {
        if (!std::isfinite(hi)) throw UnboundedError("box: support unattained toward +inf");
        return hi;
    }
    if (u < 0.0) {
        if (!std::isfinite(lo)) throw UnboundedError("box: support unattained toward -inf");
        return lo;
    }
    return std::clamp(0.0, lo, hi);
}

/// G_i(y) = sup_{z in [lo, hi]} (-y) z.
inline DualPiece box_dual_piece(double lo, double hi) {
    DualPiece piece;
    piece.lo = std::isfinite(hi) ? -kInf : 0.0;
    piece.hi = std::isfinite(lo) ? kInf : 0.0;
    piece.slope_left = -hi;
    piece.slope_right = -lo;
    if (std::isfinite(lo) && std::isfinite(hi)) {
        piece.kink = 0.0;
    } else if (std::isfinite(lo)) {
        piece.slope_left = -lo;
    } else if (std::isfinite(hi)) {
        piece.slope_right = -hi;
    } else {
        piece.slope_left = piece.slope_right = 0.0;
    }
    return piece;
}

}  // namespace detail

/// Indicator of the box {lo <= z <= hi}; bounds may be infinite.
class BoxIndicatorOracle final : public ProxOracle {
public:
    BoxIndicatorOracle(Vector lo, Vector hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
        if (lo_.size() != hi_.size()) throw ArgumentError("box: bound sizes differ");
        if ((lo_.array() > hi_.array()).any()) throw ArgumentError("box: empty");
    }

    [[nodiscard]] ExtendedReal value(const Vector& z) const override {
        if ((z.array() < lo_.array()).any() || (z.array() > hi_.array()).any()) return ExtendedReal::infinity();
        return 0.0;
    }
    [[nodiscard]] Vector prox(double /*c*/, const Vector& w) const override { return w.cwiseMax(lo_).cwiseMin(hi_); }
    [[nodiscard]] bool has_conjugate() const override { return true; }
    [[nodiscard]] ExtendedReal conjugate(const Vector& u) const override {
        double s = 0.0;
        for (Index i = 0; i < u.size(); ++i) {
            const double v = detail::box_support(u[i], lo_[i], hi_[i]);
            if (!std::isfinite(v)) return ExtendedReal::infinity();
            s += v;
        }
        return s;
    }
    [[nodiscard]] Vector conjugate_argmax(const Vector& u) const override {
        Vector z(u.size());
        for (Index i = 0; i < u.size(); ++i) z[i] = detail::box_support_argmax(u[i], lo_[i], hi_[i]);
        return z;
    }
    [[nodiscard]] std::optional<std::vector<DualPiece>> dual_pieces(Index m) const override {
        std::vector<DualPiece> pieces;
        for (Index i = 0; i < m; ++i) pieces.push_back(detail::box_dual_piece(lo_[i], hi_[i]));
        return pieces;
    }

private:
    Vector lo_, hi_;
};

struct BoxSet {
    Vector lo, hi;
};

/// {z : <a, z> <= beta}.
struct HalfspaceSet {
    Vector a;
    double beta = 0.0;
};

using ConvexSet = std::variant<BoxSet, HalfspaceSet>;

/// g(z_1, ..., z_r) = sum_i indicator_{C_i}(z_i), each block of length n.
class IntersectionIndicatorOracle final : public ProxOracle {
public:
    IntersectionIndicatorOracle(std::vector<ConvexSet> sets, Index n) : sets_(std::move(sets)), n_(n) {
        if (sets_.empty()) throw ArgumentError("intersection: no sets");
        for (const auto& s : sets_) {
            if (const auto* box = std::get_if<BoxSet>(&s)) {
                if (box->lo.size() != n || box->hi.size() != n) throw ArgumentError("intersection: box size mismatch");
                if ((box->lo.array() > box->hi.array()).any()) throw ArgumentError("intersection: empty box");
            } else {
                const auto& h = std::get<HalfspaceSet>(s);
                if (h.a.size() != n) throw ArgumentError("intersection: halfspace size mismatch");
                if (!(h.a.norm() > 0.0)) throw ArgumentError("intersection: halfspace normal is zero");
            }
        }
    }

    [[nodiscard]] ExtendedReal value(const Vector& z) const override {
        for (std::size_t i = 0; i < sets_.size(); ++i) {
            const Vector zi = block(z, i);
            if (const auto* box = std::get_if<BoxSet>(&sets_[i])) {
                if ((zi.array() < box->lo.array()).any() || (zi.array() > box->hi.array()).any())
                    return ExtendedReal::infinity();
            } else {
                const auto& h = std::get<HalfspaceSet>(sets_[i]);
                // Projections land on the hyperplane only up to roundoff.
                const double slack = 1e-12 * (1.0 + std::abs(h.beta) + h.a.norm() * zi.norm());
                if (h.a.dot(zi) > h.beta + slack) return ExtendedReal::infinity();
            }
        }
        return 0.0;
    }

    [[nodiscard]] Vector prox(double /*c*/, const Vector& w) const override {
        Vector out(w.size());
        for (std::size_t i = 0; i < sets_.size(); ++i) {
            const Vector wi = block(w, i);
            Vector zi;
            if (const auto* box = std::get_if<BoxSet>(&sets_[i])) {
                zi = wi.cwiseMax(box->lo).cwiseMin(box->hi);
            } else {
                const auto& h = std::get<HalfspaceSet>(sets_[i]);
                const double excess = h.a.dot(wi) - h.beta;
                zi = excess > 0.0 ? Vector(wi - (excess / h.a.squaredNorm()) * h.a) : wi;
            }
            out.segment(static_cast<Index>(i) * n_, n_) = zi;
        }
        return out;
    }

    [[nodiscard]] bool has_conjugate() const override { return true; }

    [[nodiscard]] ExtendedReal conjugate(const Vector& u) const override {
        double total = 0.0;
        for (std::size_t i = 0; i < sets_.size(); ++i) {
            const Vector ui = block(u, i);
            if (const auto* box = std::get_if<BoxSet>(&sets_[i])) {
                for (Index j = 0; j < n_; ++j) {
                    const double v = detail::box_support(ui[j], box->lo[j], box->hi[j]);
                    if (!std::isfinite(v)) return ExtendedReal::infinity();
                    total += v;
                }
            } else {
                const auto scale = halfspace_multiplier(std::get<HalfspaceSet>(sets_[i]), ui);
                if (!scale) return ExtendedReal::infinity();
                total += *scale * std::get<HalfspaceSet>(sets_[i]).beta;
            }
        }
        return total;
    }

    [[nodiscard]] Vector conjugate_argmax(const Vector& u) const override {
        Vector z(u.size());
        for (std::size_t i = 0; i < sets_.size(); ++i) {
            const Vector ui = block(u, i);
            Vector zi(n_);
            if (const auto* box = std::get_if<BoxSet>(&sets_[i])) {
                for (Index j = 0; j < n_; ++j) zi[j] = detail::box_support_argmax(ui[j], box->lo[j], box->hi[j]);
            } else {
                const auto& h = std::get<HalfspaceSet>(sets_[i]);
                if (!halfspace_multiplier(h, ui))
                    throw UnboundedError("halfspace: support unattained for a direction not along the normal");
                // Any point of the boundary hyperplane attains it; use the one closest to 0.
                zi = (h.beta / h.a.squaredNorm()) * h.a;
                if (ui.norm() == 0.0 && h.beta >= 0.0) zi.setZero();
            }
            z.segment(static_cast<Index>(i) * n_, n_) = zi;
        }
        return z;
    }

    [[nodiscard]] std::optional<std::vector<DualPiece>> dual_pieces(Index /*m*/) const override {
        std::vector<DualPiece> pieces;
        for (const auto& s : sets_) {
            const auto* box = std::get_if<BoxSet>(&s);
            if (!box) return std::nullopt;
            for (Index j = 0; j < n_; ++j) pieces.push_back(detail::box_dual_piece(box->lo[j], box->hi[j]));
        }
        return pieces;
    }

    [[nodiscard]] const std::vector<ConvexSet>& sets() const { return sets_; }

private:
    [[nodiscard]] Vector block(const Vector& v, std::size_t i) const {
        return v.segment(static_cast<Index>(i) * n_, n_);
    }

    /// s >= 0 with u = s a (relative tolerance 1e-12), if any.
    static std::optional<double> halfspace_multiplier(const HalfspaceSet& h, const Vector& u) {
        const double s = h.a.dot(u) / h.a.squaredNorm();
        if (s < 0.0) return std::nullopt;
        if ((u - s * h.a).norm() > 1e-12 * (1.0 + u.norm())) return std::nullopt;
        return s;
    }

    std::vector<ConvexSet> sets_;
    Index n_;
};

}  // namespace dualprox
