#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace dualprox {

/// t_k = (1 + sqrt(1 + 4 t_{k-1}^2)) / 2.
inline double fista_momentum(double t_prev) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_prev * t_prev)); }

enum class ScheduleKind { fista, poly, fixed_horizon, custom };

struct ScheduleParams {
    double a = 3.0;            ///< poly: t_k = (k + a) / a
    long horizon = 0;          ///< fixed_horizon: total iteration budget N
    std::vector<double> values;  ///< custom: t_0, t_1, ...
};

/// Momentum parameters t_0..t_K with running sums T_k = t_0 + ... + t_k.
struct MomentumSequence {
    std::vector<double> t;
    std::vector<double> big_t;
};

/// Violates t_k^2 <= T_k beyond roundoff.
inline bool momentum_pair_invalid(double t, double big_t) {
    return !(t > 0.0) || t * t > big_t + 1e-12 * std::max(1.0, big_t);
}

class Schedule {
public:
    static Schedule fista() { return Schedule(ScheduleKind::fista, {}); }
    static Schedule poly(double a) {
        ScheduleParams p;
        p.a = a;
        return Schedule(ScheduleKind::poly, std::move(p));
    }
    static Schedule fixed_horizon(long n) {
        ScheduleParams p;
        p.horizon = n;
        return Schedule(ScheduleKind::fixed_horizon, std::move(p));
    }
    static Schedule custom(std::vector<double> values) {
        ScheduleParams p;
        p.values = std::move(values);
        return Schedule(ScheduleKind::custom, std::move(p));
    }

    [[nodiscard]] ScheduleKind kind() const { return kind_; }
    [[nodiscard]] const ScheduleParams& params() const { return params_; }
    [[nodiscard]] double a() const { return params_.a; }

    /// Largest k for which t_k is defined, if bounded.
    [[nodiscard]] std::optional<long> last_index() const {
        if (kind_ == ScheduleKind::fixed_horizon) return params_.horizon;
        if (kind_ == ScheduleKind::custom) return static_cast<long>(params_.values.size()) - 1;
        return std::nullopt;
    }

    /// t_0..t_last with running sums; throws ScheduleError on any invalid pair.
    [[nodiscard]] MomentumSequence generate(long last) const {
        if (auto bound = last_index(); bound && last > *bound) {
            throw ScheduleError(describe() + " is defined only up to k = " + std::to_string(*bound), *bound + 1);
        }
        MomentumSequence seq;
        seq.t.reserve(static_cast<std::size_t>(last) + 1);
        seq.big_t.reserve(static_cast<std::size_t>(last) + 1);
        double sum = 0.0;
        for (long k = 0; k <= last; ++k) {
            const double t = value_at(k, seq.t);
            sum += t;
            if (k == 0 && !(t > 0.0 && t <= 1.0)) throw ScheduleError("t_0 must lie in (0, 1]", 0);
            if (momentum_pair_invalid(t, sum)) {
                std::ostringstream msg;
                msg << describe() << " violates t_k > 0 and t_k^2 <= T_k first at k = " << k << " (t = " << t
                    << ", T = " << sum << ")";
                throw ScheduleError(msg.str(), k);
            }
            seq.t.push_back(t);
            seq.big_t.push_back(sum);
        }
        return seq;
    }

    [[nodiscard]] std::string describe() const {
        std::ostringstream os;
        switch (kind_) {
            case ScheduleKind::fista: os << "fista"; break;
            case ScheduleKind::poly: os << "poly(a=" << params_.a << ")"; break;
            case ScheduleKind::fixed_horizon: os << "fixed_horizon(N=" << params_.horizon << ")"; break;
            case ScheduleKind::custom: os << "custom(" << params_.values.size() << ")"; break;
        }
        return os.str();
    }

private:
    Schedule(ScheduleKind kind, ScheduleParams params) : kind_(kind), params_(std::move(params)) {}

    [[nodiscard]] double value_at(long k, const std::vector<double>& previous) const {
        switch (kind_) {
            case ScheduleKind::fista:
                return k == 0 ? 1.0 : fista_momentum(previous.back());
            case ScheduleKind::poly:
                return (static_cast<double>(k) + params_.a) / params_.a;
            case ScheduleKind::fixed_horizon: {
                const long half = params_.horizon / 2;
                if (k == 0) return 1.0;
                if (k <= half - 1) return fista_momentum(previous.back());
                return static_cast<double>(params_.horizon - k + 1) / 2.0;
            }
            case ScheduleKind::custom:
                return params_.values[static_cast<std::size_t>(k)];
        }
        return 0.0;
    }

    ScheduleKind kind_;
    ScheduleParams params_;
};

/// Builds and validates a schedule. Unbounded kinds are validated
/// analytically (poly) or by construction (fista); bounded kinds over their
/// whole range.
inline Schedule make_schedule(ScheduleKind kind, const ScheduleParams& params) {
    switch (kind) {
        case ScheduleKind::fista:
            return Schedule::fista();
        case ScheduleKind::poly: {
            if (!(params.a > 0.0)) throw ScheduleError("poly schedule requires a > 0", 0);
            Schedule s = Schedule::poly(params.a);
            // a^2 T_k - (k+a)^2 = k^2 (a/2 - 1) + k (a^2 - 1.5 a), so the
            // schedule is valid for every k iff a >= 2.
            if (params.a < 2.0) {
                const double a = params.a;
                const double root = std::max(0.0, (a * a - 1.5 * a) / (1.0 - 0.5 * a));
                const long k = static_cast<long>(std::floor(root)) + 1;
                throw ScheduleError(s.describe() + " violates t_k^2 <= T_k first at k = " + std::to_string(k), k);
            }
            return s;
        }
        case ScheduleKind::fixed_horizon: {
            if (params.horizon < 2) throw ScheduleError("fixed_horizon schedule requires N >= 2", 0);
            Schedule s = Schedule::fixed_horizon(params.horizon);
            (void)s.generate(params.horizon);
            return s;
        }
        case ScheduleKind::custom: {
            if (params.values.empty()) throw ScheduleError("custom schedule is empty", 0);
            Schedule s = Schedule::custom(params.values);
            (void)s.generate(static_cast<long>(params.values.size()) - 1);
            return s;
        }
    }
    throw ScheduleError("unknown schedule kind", 0);
}

}  // namespace dualprox
