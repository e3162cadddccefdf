#pragma once

// Gallery of concrete composite problems with closed-form oracles.

#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "core.hpp"
#include "oracles.hpp"

namespace dualprox {

/// min 0.5 ||x - d||^2 + lambda ||Dx||_1 with D the (n-1) x n forward difference.
struct Tv1dSpec {
    Vector d;
    double lambda = 1.0;
};

/// Projection of d onto the intersection of boxes / halfspaces.
struct IntersectionProjSpec {
    Vector d;
    std::vector<ConvexSet> sets;
};

/// max sum_j (alpha_j x_j - 0.5 beta_j x_j^2) s.t. lo <= x <= hi, C x <= budget.
/// With `overrun_penalty` set the budget is soft: exceeding it costs
/// penalty * sum_i max(0, (Cx - budget)_i) instead of being infeasible.
struct ResourceAllocSpec {
    Vector alpha, beta, lo, hi;
    Matrix coupling;
    Vector budget;
    std::optional<double> overrun_penalty;
};

struct RandomBoxQpSpec {
    enum class Regularizer { l1, box };

    std::uint64_t seed = 42;
    Index n = 8;
    Index m = 4;
    double sigma = 1.0;
    Regularizer g = Regularizer::l1;
    double lambda = 1.0;
    double box_lo = -1.0;
    double box_hi = 1.0;
};

using ProblemSpec = std::variant<Tv1dSpec, IntersectionProjSpec, ResourceAllocSpec, RandomBoxQpSpec>;

/// ||D||^2 = 2 (1 - cos(pi (n-1) / n)) for the (n-1) x n forward difference.
inline double difference_operator_norm(Index n) {
    return 2.0 * std::sin(std::numbers::pi * static_cast<double>(n - 1) / (2.0 * static_cast<double>(n)));
}

inline CompositeProblem make_tv1d(const Tv1dSpec& spec) {
    const Index n = spec.d.size();
    if (n < 2) throw ArgumentError("tv1d needs at least two samples");
    const Index m = n - 1;
    LinearOperator op(
        m, n,
        [m](const Vector& x) -> Vector { return x.tail(m) - x.head(m); },
        [n, m](const Vector& y) -> Vector {
            Vector out = Vector::Zero(n);
            out.head(m) -= y;
            out.tail(m) += y;
            return out;
        },
        difference_operator_norm(n));
    return {std::move(op), std::make_shared<DiagonalQuadraticOracle>(DiagonalQuadraticOracle::squared_distance(spec.d)),
            std::make_shared<L1NormOracle>(spec.lambda, m), kInf, "tv1d"};
}

inline CompositeProblem make_intersection_projection(const IntersectionProjSpec& spec) {
    const Index n = spec.d.size();
    const auto r = static_cast<Index>(spec.sets.size());
    if (n < 1 || r < 1) throw ArgumentError("intersection projection needs a point and at least one set");
    LinearOperator op(
        r * n, n,
        [n, r](const Vector& x) -> Vector { return x.replicate(r, 1); },
        [n, r](const Vector& y) -> Vector {
            Vector out = Vector::Zero(n);
            for (Index i = 0; i < r; ++i) out += y.segment(i * n, n);
            return out;
        },
        std::sqrt(static_cast<double>(r)));
    return {std::move(op), std::make_shared<DiagonalQuadraticOracle>(DiagonalQuadraticOracle::squared_distance(spec.d)),
            std::make_shared<IntersectionIndicatorOracle>(spec.sets, n), kInf, "intersection"};
}

/// gamma_H for the soft budget: the largest norm of beta .* x - alpha + C^T s
/// over x in the box and s in [0, penalty]^m. The norm is convex in (x, s), so
/// the supremum sits at a vertex; vertices are enumerated (n + m <= 16).
/// A hard budget makes H an indicator on part of E, so gamma_H is infinite.
inline double resource_gamma_h(const ResourceAllocSpec& spec) {
    if (!spec.overrun_penalty) return kInf;
    const Index n = spec.alpha.size();
    const Index m = spec.budget.size();
    if (n + m > 16) throw ArgumentError("resource allocation gamma_H enumeration supports n + m <= 16");
    const Matrix ct = spec.coupling.transpose();
    double best = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << (n + m)); ++mask) {
        Vector grad(n);
        for (Index j = 0; j < n; ++j) {
            const double x = (mask >> j) & 1u ? spec.hi[j] : spec.lo[j];
            grad[j] = spec.beta[j] * x - spec.alpha[j];
        }
        for (Index i = 0; i < m; ++i)
            if ((mask >> (n + i)) & 1u) grad += *spec.overrun_penalty * ct.col(i);
        best = std::max(best, grad.norm());
    }
    return best;
}

inline CompositeProblem make_resource_allocation(const ResourceAllocSpec& spec) {
    const Index n = spec.alpha.size();
    if (spec.coupling.cols() != n || spec.coupling.rows() != spec.budget.size())
        throw ArgumentError("resource allocation: coupling / budget size mismatch");
    if (!spec.lo.allFinite() || !spec.hi.allFinite()) throw ArgumentError("resource allocation: box must be bounded");
    auto f = std::make_shared<BoxedUtilityOracle>(spec.alpha, spec.beta, spec.lo, spec.hi);
    const Index m = spec.budget.size();
    std::shared_ptr<const ProxOracle> g;
    if (spec.overrun_penalty) g = std::make_shared<OverrunPenaltyOracle>(*spec.overrun_penalty, spec.budget);
    else g = std::make_shared<BoxIndicatorOracle>(Vector::Constant(m, -kInf), spec.budget);
    return {LinearOperator::dense(spec.coupling), std::move(f), std::move(g), resource_gamma_h(spec), "resource"};
}

inline CompositeProblem make_random_box_qp(const RandomBoxQpSpec& spec) {
    if (spec.m < 1 || spec.n < spec.m) throw ArgumentError("random box QP needs n >= m >= 1");
    if (!(spec.sigma > 0.0)) throw ArgumentError("random box QP needs sigma > 0");
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    Matrix a(spec.m, spec.n);
    for (Index i = 0; i < spec.m; ++i)
        for (Index j = 0; j < spec.n; ++j) a(i, j) = normal(rng);
    if (Eigen::FullPivLU<Matrix>(a).rank() < spec.m) throw ArgumentError("random box QP: A is rank deficient");
    Vector q(spec.n), b(spec.n);
    for (Index j = 0; j < spec.n; ++j) q[j] = spec.sigma * (1.0 + 4.0 * uniform(rng));
    q[0] = spec.sigma;
    for (Index j = 0; j < spec.n; ++j) b[j] = 3.0 * normal(rng);
    auto f = std::make_shared<DiagonalQuadraticOracle>(q, b);
    std::shared_ptr<const ProxOracle> g;
    if (spec.g == RandomBoxQpSpec::Regularizer::l1) {
        g = std::make_shared<L1NormOracle>(spec.lambda, spec.m);
    } else {
        g = std::make_shared<BoxIndicatorOracle>(Vector::Constant(spec.m, spec.box_lo), Vector::Constant(spec.m, spec.box_hi));
    }
    return {LinearOperator::dense(a), std::move(f), std::move(g), kInf, "random_qp"};
}

inline CompositeProblem make_instance(const ProblemSpec& spec) {
    return std::visit(
        [](const auto& s) -> CompositeProblem {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Tv1dSpec>) return make_tv1d(s);
            else if constexpr (std::is_same_v<T, IntersectionProjSpec>) return make_intersection_projection(s);
            else if constexpr (std::is_same_v<T, ResourceAllocSpec>) return make_resource_allocation(s);
            else return make_random_box_qp(s);
        },
        spec);
}

}  // namespace dualprox
