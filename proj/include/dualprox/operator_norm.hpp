#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "errors.hpp"

namespace dualprox {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

template <typename Op>
concept OperatorLike = requires(const Op& op, const Vector& v) {
    { op.rows() } -> std::convertible_to<Index>;
    { op.cols() } -> std::convertible_to<Index>;
    { op.apply(v) } -> std::convertible_to<Vector>;
    { op.apply_adjoint(v) } -> std::convertible_to<Vector>;
};

struct NormEstimateOptions {
    double tol = 1e-8;
    int max_iters = 10000;
    std::uint64_t seed = 0xDA7A;
};

/// Largest singular value of `op` by power iteration on A^T A.
///
/// Stops once the eigen-residual ||A^T A v - rho v|| drops below tol * rho,
/// which bounds the relative error of sqrt(rho) by roughly tol^2 * rho / gap.
template <OperatorLike Op>
double estimate_operator_norm(const Op& op, const NormEstimateOptions& opts = {}) {
    if (op.rows() < 1 || op.cols() < 1) throw ArgumentError("operator dimensions must be >= 1");
    if (!(opts.tol > 0.0 && opts.tol < 1.0)) throw ArgumentError("norm tolerance must lie in (0, 1)");

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> normal;
    Vector v(op.cols());
    for (Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
    v.normalize();

    double rho = 0.0;
    for (int it = 0; it < opts.max_iters; ++it) {
        Vector w = op.apply_adjoint(op.apply(v));
        rho = v.dot(w);
        const double wn = w.norm();
        if (wn == 0.0) return 0.0;
        if ((w - rho * v).norm() <= opts.tol * rho) return std::sqrt(rho);
        v = w / wn;
    }
    throw NormEstimateError("power iteration did not converge", rho);
}

}  // namespace dualprox
