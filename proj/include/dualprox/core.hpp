#pragma once

// Problem model for min_x f(x) + g(Ax) and the dual-side calculus built on it:
// primal recovery x(y), z(y), the smooth dual part F(y) = f*(A^T y) and its
// gradient, and the primal / dual objective evaluations.

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "extended_real.hpp"
#include "operator_norm.hpp"

namespace dualprox {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class LinearOperator {
public:
    using Apply = std::function<Vector(const Vector&)>;

    /// `m` x `n` operator given by closures. When `exact_norm` is absent the
    /// spectral norm is estimated once here by power iteration.
    LinearOperator(Index m, Index n, Apply forward, Apply adjoint,
                   std::optional<double> exact_norm = std::nullopt,
                   const NormEstimateOptions& norm_opts = {})
        : m_(m), n_(n), forward_(std::move(forward)), adjoint_(std::move(adjoint)) {
        if (m < 1 || n < 1) throw ArgumentError("operator dimensions must be >= 1");
        if (exact_norm) {
            norm_ = *exact_norm;
            norm_exact_ = true;
        } else {
            norm_ = estimate_operator_norm(*this, norm_opts);
        }
    }

    static LinearOperator dense(const Matrix& a, std::optional<double> exact_norm = std::nullopt) {
        auto shared = std::make_shared<const Matrix>(a);
        return LinearOperator(
            a.rows(), a.cols(), [shared](const Vector& x) -> Vector { return (*shared) * x; },
            [shared](const Vector& y) -> Vector { return shared->transpose() * y; }, exact_norm);
    }

    [[nodiscard]] Index rows() const { return m_; }
    [[nodiscard]] Index cols() const { return n_; }
    [[nodiscard]] Vector apply(const Vector& x) const { return forward_(x); }
    [[nodiscard]] Vector apply_adjoint(const Vector& y) const { return adjoint_(y); }
    [[nodiscard]] double norm() const { return norm_; }
    [[nodiscard]] bool norm_is_exact() const { return norm_exact_; }

    /// Materializes the operator column by column.
    [[nodiscard]] Matrix to_dense() const {
        Matrix a(m_, n_);
        for (Index j = 0; j < n_; ++j) a.col(j) = apply(Vector::Unit(n_, j));
        return a;
    }

private:
    Index m_;
    Index n_;
    Apply forward_;
    Apply adjoint_;
    double norm_ = 0.0;
    bool norm_exact_ = false;
};

/// f(x) = 0.5 x^T diag(q) x - b^T x + offset. Exposed by oracles whose f is a
/// plain separable quadratic so reference solvers can work in closed form.
struct DiagonalQuadratic {
    Vector q;
    Vector b;
    double offset = 0.0;
};

/// A Bregman distance together with a roundoff scale for comparisons against it.
struct BregmanGap {
    double value;
    double roundoff;
};

class StronglyConvexOracle {
public:
    virtual ~StronglyConvexOracle() = default;

    [[nodiscard]] virtual double modulus() const = 0;
    [[nodiscard]] virtual ExtendedReal value(const Vector& x) const = 0;
    /// argmax_x { <u, x> - f(x) }, single valued by strong convexity.
    [[nodiscard]] virtual Vector conjugate_argmax(const Vector& u) const = 0;
    [[nodiscard]] virtual std::optional<Vector> subgradient(const Vector& /*x*/) const { return std::nullopt; }
    [[nodiscard]] virtual std::optional<DiagonalQuadratic> quadratic_form() const { return std::nullopt; }

    /// f(x) - f(x_at) - <s_at, x - x_at> for s_at a subgradient at x_at. The
    /// default differences function values; closed forms avoid the cancellation.
    [[nodiscard]] virtual BregmanGap bregman(const Vector& x, const Vector& x_at, const Vector& s_at) const {
        const double f_x = value(x).value();
        const double f_at = value(x_at).value();
        const double lin = s_at.dot(x - x_at);
        constexpr double eps = std::numeric_limits<double>::epsilon();
        const auto n = static_cast<double>(x.size());
        return {f_x - f_at - lin, (8.0 + n) * eps * (std::abs(f_x) + std::abs(f_at) + std::abs(lin))};
    }
};

/// One coordinate of the dual nonsmooth part G(y) = g*(-y) when it separates:
/// a convex piecewise-linear function on [lo, hi] with at most one kink.
/// Without a kink the slope is `slope_left` throughout.
struct DualPiece {
    double lo = -kInf;
    double hi = kInf;
    std::optional<double> kink;
    double slope_left = 0.0;
    double slope_right = 0.0;
};

class ProxOracle {
public:
    virtual ~ProxOracle() = default;

    [[nodiscard]] virtual ExtendedReal value(const Vector& z) const = 0;
    /// argmin_z { c g(z) + 0.5 ||z - w||^2 }, c > 0.
    [[nodiscard]] virtual Vector prox(double c, const Vector& w) const = 0;
    /// Supremum of subgradient norms; +inf when unbounded.
    [[nodiscard]] virtual double subgradient_bound() const { return kInf; }
    [[nodiscard]] virtual bool has_conjugate() const { return false; }
    /// g*(u). Only meaningful when has_conjugate().
    [[nodiscard]] virtual ExtendedReal conjugate(const Vector& /*u*/) const {
        throw CapabilityError("conjugate of g is not available for this problem");
    }
    /// One element of argmax_z { <u, z> - g(z) }; throws UnboundedError when
    /// the supremum is not attained.
    [[nodiscard]] virtual Vector conjugate_argmax(const Vector& /*u*/) const {
        throw CapabilityError("conjugate argmax of g is not available for this problem");
    }
    [[nodiscard]] virtual std::optional<std::vector<DualPiece>> dual_pieces(Index /*m*/) const {
        return std::nullopt;
    }
};

class CompositeProblem {
public:
    CompositeProblem(LinearOperator op, std::shared_ptr<const StronglyConvexOracle> f,
                     std::shared_ptr<const ProxOracle> g, double gamma_h = kInf, std::string name = {})
        : op_(std::move(op)), f_(std::move(f)), g_(std::move(g)), gamma_h_(gamma_h), name_(std::move(name)) {
        if (!(f_->modulus() > 0.0)) throw ArgumentError("strong convexity modulus must be positive");
        lipschitz_ = op_.norm() * op_.norm() / f_->modulus();
    }

    [[nodiscard]] const LinearOperator& op() const { return op_; }
    [[nodiscard]] const StronglyConvexOracle& f() const { return *f_; }
    [[nodiscard]] const ProxOracle& g() const { return *g_; }
    [[nodiscard]] Index primal_dim() const { return op_.cols(); }
    [[nodiscard]] Index dual_dim() const { return op_.rows(); }
    [[nodiscard]] double sigma() const { return f_->modulus(); }
    /// L_F = ||A||^2 / sigma.
    [[nodiscard]] double lipschitz_dual() const { return lipschitz_; }
    [[nodiscard]] double gamma_g() const { return g_->subgradient_bound(); }
    [[nodiscard]] double gamma_h() const { return gamma_h_; }
    [[nodiscard]] const std::string& name() const { return name_; }

private:
    LinearOperator op_;
    std::shared_ptr<const StronglyConvexOracle> f_;
    std::shared_ptr<const ProxOracle> g_;
    double gamma_h_;
    std::string name_;
    double lipschitz_ = 0.0;
};

/// x(y) = argmax_x { <A^T y, x> - f(x) }.
inline Vector primal_from_dual(const CompositeProblem& p, const Vector& y) {
    return p.f().conjugate_argmax(p.op().apply_adjoint(y));
}

/// grad F(y) = A x(y).
inline Vector grad_dual_smooth(const CompositeProblem& p, const Vector& y) {
    return p.op().apply(primal_from_dual(p, y));
}

/// F(y) = <A^T y, x> - f(x) evaluated at a precomputed x = x(y).
inline double dual_smooth_value(const CompositeProblem& p, const Vector& y, const Vector& x_of_y) {
    const ExtendedReal fx = p.f().value(x_of_y);
    if (!fx.is_finite()) throw Error("f is infinite at its own conjugate maximizer");
    return p.op().apply_adjoint(y).dot(x_of_y) - fx.value();
}

inline double dual_smooth_value(const CompositeProblem& p, const Vector& y) {
    return dual_smooth_value(p, y, primal_from_dual(p, y));
}

/// z(y) in argmin_z { <y, z> + g(z) }, through the conjugate oracle of g.
inline Vector z_from_dual(const CompositeProblem& p, const Vector& y) {
    return p.g().conjugate_argmax(-y);
}

/// z at a prox output without touching the conjugate:
/// z(p_L(y)) = A x(y) + L (p_L(y) - y).
inline Vector z_at_prox_output(const CompositeProblem& p, const Vector& y_base, double step_l,
                               const Vector& y_out) {
    return grad_dual_smooth(p, y_base) + step_l * (y_out - y_base);
}

/// G(y) = g*(-y) from a companion z = z(y): -<y, z> - g(z).
inline ExtendedReal dual_nonsmooth_value(const CompositeProblem& p, const Vector& y, const Vector& z_of_y) {
    const ExtendedReal gz = p.g().value(z_of_y);
    if (!gz.is_finite()) return ExtendedReal::infinity();
    return ExtendedReal(-y.dot(z_of_y) - gz.value());
}

/// q~(y) = F(y) + G(y) = -q(y).
inline ExtendedReal eval_dual(const CompositeProblem& p, const Vector& y,
                              const std::optional<Vector>& companion_z = std::nullopt) {
    const double big_f = dual_smooth_value(p, y);
    if (companion_z) return big_f + dual_nonsmooth_value(p, y, *companion_z);
    if (!p.g().has_conjugate())
        throw CapabilityError("dual value needs either the conjugate of g or a companion z(y)");
    return big_f + p.g().conjugate(-y);
}

/// H(x) = f(x) + g(Ax).
inline ExtendedReal eval_primal(const CompositeProblem& p, const Vector& x) {
    return p.f().value(x) + p.g().value(p.op().apply(x));
}

/// H~(x, z) = f(x) + g(z).
inline ExtendedReal eval_split_primal(const CompositeProblem& p, const Vector& x, const Vector& z) {
    return p.f().value(x) + p.g().value(z);
}

struct GapIdentity {
    ExtendedReal lhs;  ///< H~(x(y), z(y)) - q(y)
    double rhs;        ///< <y, A x(y) - z(y)>
};

inline GapIdentity lagrangian_gap_identity(const CompositeProblem& p, const Vector& y, const Vector& x_of_y,
                                           const Vector& z_of_y) {
    const ExtendedReal dual = dual_smooth_value(p, y, x_of_y) + dual_nonsmooth_value(p, y, z_of_y);
    return {eval_split_primal(p, x_of_y, z_of_y) + dual, y.dot(p.op().apply(x_of_y) - z_of_y)};
}

}  // namespace dualprox
