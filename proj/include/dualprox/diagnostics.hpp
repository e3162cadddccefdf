#pragma once

// Machine-checkable certificates for the convergence bounds of dual proximal
// gradient methods, evaluated on a solver trace against a reference optimum.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reference.hpp"
#include "solvers.hpp"

namespace dualprox {

struct CertificateSettings {
    double rel_slack = 1e-9;
    double abs_slack = 1e-12;
    /// Multiplies every bound before comparison; 1 except in fault-injection tests.
    double bound_scale = 1.0;
};

struct BoundCertificate {
    std::string bound_id;
    long k = 0;
    double bound = 0.0;
    double measured = 0.0;
    bool applicable = true;
    bool pass = true;
    std::string note;
    std::map<std::string, double> inputs;

    [[nodiscard]] double margin() const { return bound - measured; }
};

using Certificates = std::vector<BoundCertificate>;

/// M <= B + rel |B| + abs. A +inf bound is vacuous; a +inf measurement fails.
inline bool within_bound(double measured, double bound, double rel, double abs) {
    if (std::isinf(bound) && bound > 0) return true;
    if (std::isnan(measured) || std::isnan(bound)) return false;
    return measured <= bound + rel * std::abs(bound) + abs;
}

namespace detail {

struct CertContext {
    const ReferenceSolution& ref;
    const SolverReport& rep;
    CertificateSettings settings;
    double dist0;      // ||y0 - y*||
    double ystar_norm; // ||y*||

    CertContext(const ReferenceSolution& r, const SolverReport& s, const CertificateSettings& cs)
        : ref(r), rep(s), settings(cs), dist0((s.y0 - r.y_star).norm()), ystar_norm(r.y_star.norm()) {
        if (r.y_star.size() != s.y0.size()) throw ArgumentError("reference and trace dimensions differ");
    }

    [[nodiscard]] double abs_slack() const {
        return settings.abs_slack + (ref.low_precision ? 10.0 * ref.residual : 0.0);
    }

    [[nodiscard]] BoundCertificate make(const std::string& id, long k, double bound, double measured) const {
        BoundCertificate c;
        c.bound_id = id;
        c.k = k;
        c.bound = bound * settings.bound_scale;
        c.measured = measured;
        c.pass = within_bound(c.measured, c.bound, settings.rel_slack, abs_slack());
        c.inputs["dist0"] = dist0;
        if (ref.low_precision) c.note = "low-precision reference: slack widened by 10 x residual";
        return c;
    }

    [[nodiscard]] static BoundCertificate not_applicable(const std::string& id, long k, std::string why) {
        BoundCertificate c;
        c.bound_id = id;
        c.k = k;
        c.applicable = false;
        c.pass = true;
        c.bound = std::numeric_limits<double>::quiet_NaN();
        c.measured = std::numeric_limits<double>::quiet_NaN();
        c.note = std::move(why);
        return c;
    }

    [[nodiscard]] double t_prev(long k) const { return rep.momentum.t[static_cast<std::size_t>(k - 1)]; }
    [[nodiscard]] double big_t_prev(long k) const { return rep.momentum.big_t[static_cast<std::size_t>(k - 1)]; }
};

inline bool uses_fista_momentum(const SolverReport& rep) {
    return rep.method == Method::fdpg || (rep.method == Method::gfdpg && rep.schedule.kind() == ScheduleKind::fista);
}

inline bool has_momentum(const SolverReport& rep) { return rep.method != Method::dpg; }

inline bool corollary_schedule(const SolverReport& rep) {
    return rep.method == Method::gfdpg && rep.schedule.kind() == ScheduleKind::poly && rep.schedule.a() > 2.0;
}

inline const ProxProbe& probe_of(const IterateRecord& r) {
    if (!r.probe) throw CapabilityError("certificate needs a trace recorded in certificate mode");
    return *r.probe;
}

inline double finite_or_inf(ExtendedReal x) { return x.is_finite() ? x.value() : kInf; }

}  // namespace detail

/// q~(y_k) - q~(y*) <= 2 L_k ||y0 - y*||^2 / t_{k-1}^2 and <= 2 L_k ||y0 - y*||^2 / (k+1)^2.
inline Certificates cert_fdpg_dual(const ReferenceSolution& ref, const SolverReport& rep,
                                   const CertificateSettings& cs = {}) {
    detail::CertContext ctx(ref, rep, cs);
    Certificates out;
    for (const auto& r : rep.records) {
        if (!detail::uses_fista_momentum(rep)) {
            out.push_back(ctx.not_applicable("fdpg_dual_t", r.k, "trace does not use FISTA momentum"));
            out.push_back(ctx.not_applicable("fdpg_dual_k", r.k, "trace does not use FISTA momentum"));
            continue;
        }
        const double d2 = ctx.dist0 * ctx.dist0;
        const double measured = r.dual_value - ref.dual_value;
        const double tp = ctx.t_prev(r.k);
        const double kp1 = static_cast<double>(r.k + 1);
        auto c1 = ctx.make("fdpg_dual_t", r.k, 2.0 * r.step_l * d2 / (tp * tp), measured);
        c1.inputs["L"] = r.step_l;
        c1.inputs["t_prev"] = tp;
        auto c2 = ctx.make("fdpg_dual_k", r.k, 2.0 * r.step_l * d2 / (kp1 * kp1), measured);
        c2.inputs["L"] = r.step_l;
        out.push_back(std::move(c1));
        out.push_back(std::move(c2));
    }
    return out;
}

/// q~(y_k) - q~(y*) <= L_k ||y0 - y*||^2 / (2 T_{k-1}).
inline Certificates cert_gfdpg_dual(const ReferenceSolution& ref, const SolverReport& rep,
                                    const CertificateSettings& cs = {}) {
    detail::CertContext ctx(ref, rep, cs);
    Certificates out;
    for (const auto& r : rep.records) {
        if (!detail::has_momentum(rep)) {
            out.push_back(ctx.not_applicable("gfdpg_dual", r.k, "trace has no momentum schedule"));
            continue;
        }
        const double btp = ctx.big_t_prev(r.k);
        auto c = ctx.make("gfdpg_dual", r.k, r.step_l * ctx.dist0 * ctx.dist0 / (2.0 * btp), r.dual_value - ref.dual_value);
        c.inputs["L"] = r.step_l;
        c.inputs["T_prev"] = btp;
        out.push_back(std::move(c));
    }
    return out;
}

/// min{ ||y_i - w_{i-1}||_{i<=k}, ||p_{L'}(y_k) - y_k|| } <= D / sqrt(sum_{i<k}(T_i - t_i^2) + T_{k-1}),
/// plus the L'-free variant without the last term in both the min and the root.
inline Certificates cert_gfdpg_gradnorm(const ReferenceSolution& ref, const SolverReport& rep,
                                        const CertificateSettings& cs = {}) {
    detail::CertContext ctx(ref, rep, cs);
    Certificates out;
    double slack_sum = 0.0;
    double running_min = kInf;
    for (const auto& r : rep.records) {
        running_min = std::min(running_min, r.step_norm);
        if (!detail::has_momentum(rep)) {
            out.push_back(ctx.not_applicable("gfdpg_gradnorm", r.k, "trace has no momentum schedule"));
            out.push_back(ctx.not_applicable("gfdpg_gradnorm_lfree", r.k, "trace has no momentum schedule"));
            continue;
        }
        const double tp = ctx.t_prev(r.k);
        const double btp = ctx.big_t_prev(r.k);
        slack_sum += btp - tp * tp;
        const auto& pr = detail::probe_of(r);
        auto c = ctx.make("gfdpg_gradnorm", r.k, ctx.dist0 / std::sqrt(std::max(0.0, slack_sum) + btp),
                          std::min(running_min, pr.pg_norm));
        c.inputs["slack_sum"] = slack_sum;
        c.inputs["T_prev"] = btp;
        c.inputs["L_prime"] = pr.l_prime;
        out.push_back(std::move(c));
        // Sums of T_i - t_i^2 at roundoff level mean t^2 = T: no L'-free bound.
        if (slack_sum <= 1e-9 * btp) {
            out.push_back(ctx.not_applicable("gfdpg_gradnorm_lfree", r.k, "sum of T_i - t_i^2 is zero"));
        } else {
            auto c2 = ctx.make("gfdpg_gradnorm_lfree", r.k, ctx.dist0 / std::sqrt(slack_sum), running_min);
            c2.inputs["slack_sum"] = slack_sum;
            out.push_back(std::move(c2));
        }
    }
    return out;
}

/// a sqrt(6) / sqrt(a - 2).
inline double corollary_constant(double a) { return a * std::sqrt(6.0) / std::sqrt(a - 2.0); }

/// Prox-gradient norm envelope of t_k = (k + a)/a, a > 2: <= a sqrt 6 / sqrt(a-2) D / k^1.5.
inline Certificates cert_corollary_gradnorm(const ReferenceSolution& ref, const SolverReport& rep, double a,
                                            const CertificateSettings& cs = {}) {
    detail::CertContext ctx(ref, rep, cs);
    Certificates out;
    const bool ok = a > 2.0 && detail::corollary_schedule(rep) && rep.schedule.a() == a;
    double running_min = kInf;
    for (const auto& r : rep.records) {
        running_min = std::min(running_min, r.step_norm);
        if (!ok) {
            out.push_back(ctx.not_applicable("corollary1_gradnorm", r.k, "needs a poly schedule with a > 2"));
            continue;
        }
        const auto& pr = detail::probe_of(r);
        const double kk = static_cast<double>(r.k);
        auto c = ctx.make("corollary1_gradnorm", r.k, corollary_constant(a) * ctx.dist0 / std::pow(kk, 1.5),
                          std::min(running_min, pr.pg_norm));
        c.inputs["a"] = a;
        out.push_back(std::move(c));
    }
    return out;
}

/// ||p_{L'}(y_k) - y_k|| <= 2 ||y0 - y*|| / k for DPG and FDPG.
inline Certificates cert_dpg_gradnorm(const ReferenceSolution& ref, const SolverReport& rep,
                                      const CertificateSettings& cs = {}) {
    detail::CertContext ctx(ref, rep, cs);
    Certificates out;
    const bool ok = rep.method == Method::dpg || detail::uses_fista_momentum(rep);
    for (const auto& r : rep.records) {
        if (!ok) {
            out.push_back(ctx.not_applicable("dpg_gradnorm", r.k, "holds for DPG and FDPG only"));
            continue;
        }
        const auto& pr = detail::probe_of(r);
        auto c = ctx.make("dpg_gradnorm", r.k, 2.0 * ctx.dist0 / static_cast<double>(r.k), pr.pg_norm);
        c.inputs["L_prime"] = pr.l_prime;
        out.push_back(std::move(c));
    }
    return out;
}

/// Split-form gap at prox outputs: H~(x(p), z(p)) - q(p) <= (L + L_F) ||p|| ||p - y||,
/// evaluated at (y_k, L'_k), plus the k^1.5 min-gap bound for poly a > 2.
inline Certificates cert_pd_gap_Pprime(const ReferenceSolution& ref, const SolverReport& rep,
                                       const CertificateSettings& cs = {}) {
    detail::CertContext ctx(ref, rep, cs);
    const double lf = rep.constants.lipschitz_dual;
    Certificates out;
    double running_min = kInf;
    for (const auto& r : rep.records) {
        const auto& pr = detail::probe_of(r);
        auto c = ctx.make("lemma3_gap", r.k, (pr.l_prime + lf) * pr.p_norm * pr.pg_norm, detail::finite_or_inf(pr.split_gap));
        c.inputs["L_prime"] = pr.l_prime;
        out.push_back(std::move(c));

        running_min = std::min(running_min, detail::finite_or_inf(r.split_gap));
        if (detail::corollary_schedule(rep)) {
            const double a = rep.schedule.a();
            const double kk = static_cast<double>(r.k);
            const double bound = corollary_constant(a) * (pr.l_prime + lf) * (ctx.dist0 + ctx.ystar_norm) * ctx.dist0 /
                                 std::pow(kk, 1.5);
            out.push_back(ctx.make("theorem4_gap_split", r.k, bound,
                                   std::min(running_min, detail::finite_or_inf(pr.split_gap))));
        } else {
            out.push_back(ctx.not_applicable("theorem4_gap_split", r.k, "needs a poly schedule with a > 2"));
        }
    }
    return out;
}

/// Gap bounds on the original problem, which need gamma_g < inf: the pointwise
/// bound at prox outputs, the 2 D / k bound for DPG / FDPG, and the k^1.5
/// min-gap bound for poly a > 2.
inline Certificates cert_pd_gap_P(const ReferenceSolution& ref, const SolverReport& rep,
                                  const CertificateSettings& cs = {}) {
    detail::CertContext ctx(ref, rep, cs);
    const double gamma = rep.constants.gamma_g;
    const double lf = rep.constants.lipschitz_dual;
    Certificates out;
    double running_min = kInf;
    for (const auto& r : rep.records) {
        if (!std::isfinite(gamma)) {
            const std::string why = "gamma_g is infinite (g has unbounded subgradients)";
            out.push_back(ctx.not_applicable("lemma4_gap", r.k, why));
            out.push_back(ctx.not_applicable("theorem2_gap", r.k, why));
            out.push_back(ctx.not_applicable("theorem4_gap", r.k, why));
            continue;
        }
        const auto& pr = detail::probe_of(r);
        const double gap_p = detail::finite_or_inf(pr.pd_gap);
        auto c = ctx.make("lemma4_gap", r.k, (pr.l_prime + lf) * (pr.p_norm + gamma) * pr.pg_norm, gap_p);
        c.inputs["gamma_g"] = gamma;
        out.push_back(std::move(c));

        const double kk = static_cast<double>(r.k);
        const double radius = ctx.dist0 + ctx.ystar_norm + gamma;
        if (rep.method == Method::dpg || detail::uses_fista_momentum(rep)) {
            out.push_back(ctx.make("theorem2_gap", r.k, (pr.l_prime + lf) * radius * 2.0 * ctx.dist0 / kk, gap_p));
        } else {
            out.push_back(ctx.not_applicable("theorem2_gap", r.k, "holds for DPG and FDPG only"));
        }
        running_min = std::min(running_min, detail::finite_or_inf(r.pd_gap));
        if (detail::corollary_schedule(rep)) {
            const double bound =
                corollary_constant(rep.schedule.a()) * (pr.l_prime + lf) * radius * ctx.dist0 / std::pow(kk, 1.5);
            out.push_back(ctx.make("theorem4_gap", r.k, bound, std::min(running_min, gap_p)));
        } else {
            out.push_back(ctx.not_applicable("theorem4_gap", r.k, "needs a poly schedule with a > 2"));
        }
    }
    return out;
}

/// max{||p_{L'}(y_k)||, ||y_k||, ||w_k||} <= ||y0 - y*|| + ||y*||.
inline Certificates cert_iterate_bound(const ReferenceSolution& ref, const SolverReport& rep,
                                       const CertificateSettings& cs = {}) {
    detail::CertContext ctx(ref, rep, cs);
    Certificates out;
    for (const auto& r : rep.records) {
        double measured = std::max(r.y.norm(), r.w.norm());
        if (r.probe) measured = std::max(measured, r.probe->p_norm);
        out.push_back(ctx.make("lemma5_iterate", r.k, ctx.dist0 + ctx.ystar_norm, measured));
    }
    return out;
}

/// H(x(y_k)) - H* under a finite gamma_H: 2 gamma_H sqrt(L_k/sigma) D/(k+1) for
/// FDPG and gamma_H sqrt(L_k/sigma) D/sqrt(k) for DPG. H* is taken as -q~(y*).
inline Certificates cert_primal_cost_assumption1(const ReferenceSolution& ref, const SolverReport& rep,
                                                 const CertificateSettings& cs = {}) {
    detail::CertContext ctx(ref, rep, cs);
    const double gamma_h = rep.constants.gamma_h;
    const double sigma = rep.constants.sigma;
    const bool fista = detail::uses_fista_momentum(rep);
    const std::string id = fista ? "assumption1_fdpg" : "assumption1_dpg";
    Certificates out;
    for (const auto& r : rep.records) {
        if (!std::isfinite(gamma_h)) {
            out.push_back(ctx.not_applicable(id, r.k, "gamma_H not declared (unbounded subgradients of H)"));
            continue;
        }
        if (!fista && rep.method != Method::dpg) {
            out.push_back(ctx.not_applicable(id, r.k, "holds for DPG and FDPG only"));
            continue;
        }
        if (!r.primal_value.is_finite()) {
            out.push_back(ctx.not_applicable(id, r.k, "H(x(y_k)) is infinite"));
            continue;
        }
        const double kk = static_cast<double>(r.k);
        const double scale = gamma_h * std::sqrt(r.step_l / sigma) * ctx.dist0;
        const double bound = fista ? 2.0 * scale / (kk + 1.0) : scale / std::sqrt(kk);
        auto c = ctx.make(id, r.k, bound, r.primal_value.value() + ref.dual_value);
        c.inputs["gamma_H"] = gamma_h;
        out.push_back(std::move(c));
    }
    return out;
}

/// sum_{i<k} (T_i - t_i^2)/2 ||y_{i+1} - w_i||^2 + T_{k-1}/L_k (q~(y_k) - q~(y*)) <= ||y0 - y*||^2 / 2,
/// with relative slack 1e-8.
inline Certificates cert_telescoping(const ReferenceSolution& ref, const SolverReport& rep,
                                     const CertificateSettings& cs = {}) {
    CertificateSettings loose = cs;
    loose.rel_slack = std::max(cs.rel_slack, 1e-8);
    detail::CertContext ctx(ref, rep, loose);
    Certificates out;
    double acc = 0.0;
    for (const auto& r : rep.records) {
        if (!detail::has_momentum(rep)) {
            out.push_back(ctx.not_applicable("telescoping", r.k, "trace has no momentum schedule"));
            continue;
        }
        const double tp = ctx.t_prev(r.k);
        const double btp = ctx.big_t_prev(r.k);
        acc += 0.5 * (btp - tp * tp) * r.step_norm * r.step_norm;
        const double measured = acc + btp / r.step_l * (r.dual_value - ref.dual_value);
        out.push_back(ctx.make("telescoping", r.k, 0.5 * ctx.dist0 * ctx.dist0, measured));
    }
    return out;
}

/// Runtime invariants: weak duality H(x(y_k)) >= q(y_k) and the descent
/// inequality (L'/2)||p - y_k||^2 <= q~(y_k) - q~(p) at each probe.
inline Certificates cert_runtime_invariants(const ReferenceSolution& ref, const SolverReport& rep,
                                            const CertificateSettings& cs = {}) {
    detail::CertContext ctx(ref, rep, cs);
    Certificates out;
    for (const auto& r : rep.records) {
        out.push_back(ctx.make("weak_duality", r.k, detail::finite_or_inf(r.primal_value), -r.dual_value));
        if (r.probe) {
            const double roundoff = 1e-9 * (std::abs(r.dual_value) + std::abs(r.probe->dual_value));
            auto c = ctx.make("descent", r.k, r.probe->descent_rhs + roundoff, r.probe->descent_lhs);
            out.push_back(std::move(c));
        }
    }
    return out;
}

enum class CertificateFamily {
    fdpg_dual, gfdpg_dual, gfdpg_gradnorm, corollary, dpg_gradnorm, lemma3, gap_p, iterate_bound, assumption1,
    telescoping, invariants
};

inline const std::vector<std::pair<std::string, CertificateFamily>>& certificate_families() {
    static const std::vector<std::pair<std::string, CertificateFamily>> all = {
        {"fdpg_dual", CertificateFamily::fdpg_dual},       {"gfdpg_dual", CertificateFamily::gfdpg_dual},
        {"gfdpg_gradnorm", CertificateFamily::gfdpg_gradnorm}, {"corollary1", CertificateFamily::corollary},
        {"dpg_gradnorm", CertificateFamily::dpg_gradnorm}, {"lemma3", CertificateFamily::lemma3},
        {"lemma4", CertificateFamily::gap_p},              {"lemma5", CertificateFamily::iterate_bound},
        {"assumption1", CertificateFamily::assumption1},   {"telescoping", CertificateFamily::telescoping},
        {"invariants", CertificateFamily::invariants},
    };
    return all;
}

inline Certificates evaluate_family(CertificateFamily fam, const ReferenceSolution& ref, const SolverReport& rep,
                                    const CertificateSettings& cs = {}) {
    switch (fam) {
        case CertificateFamily::fdpg_dual: return cert_fdpg_dual(ref, rep, cs);
        case CertificateFamily::gfdpg_dual: return cert_gfdpg_dual(ref, rep, cs);
        case CertificateFamily::gfdpg_gradnorm: return cert_gfdpg_gradnorm(ref, rep, cs);
        case CertificateFamily::corollary: return cert_corollary_gradnorm(ref, rep, rep.schedule.a(), cs);
        case CertificateFamily::dpg_gradnorm: return cert_dpg_gradnorm(ref, rep, cs);
        case CertificateFamily::lemma3: return cert_pd_gap_Pprime(ref, rep, cs);
        case CertificateFamily::gap_p: return cert_pd_gap_P(ref, rep, cs);
        case CertificateFamily::iterate_bound: return cert_iterate_bound(ref, rep, cs);
        case CertificateFamily::assumption1: return cert_primal_cost_assumption1(ref, rep, cs);
        case CertificateFamily::telescoping: return cert_telescoping(ref, rep, cs);
        case CertificateFamily::invariants: return cert_runtime_invariants(ref, rep, cs);
    }
    return {};
}

inline Certificates evaluate_all(const ReferenceSolution& ref, const SolverReport& rep, const CertificateSettings& cs = {}) {
    Certificates out;
    for (const auto& [name, fam] : certificate_families()) {
        auto part = evaluate_family(fam, ref, rep, cs);
        out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return out;
}

struct CertificateSummary {
    std::size_t applicable = 0;
    std::size_t failed = 0;
    std::size_t not_applicable = 0;
    std::optional<BoundCertificate> first_failure;

    [[nodiscard]] bool all_pass() const { return failed == 0; }
};

inline CertificateSummary summarize(const Certificates& certs) {
    CertificateSummary s;
    for (const auto& c : certs) {
        if (!c.applicable) {
            ++s.not_applicable;
            continue;
        }
        ++s.applicable;
        if (!c.pass) {
            ++s.failed;
            if (!s.first_failure) s.first_failure = c;
        }
    }
    return s;
}

struct RateFit {
    std::string metric;
    long k_first = 0;
    long k_last = 0;
    double slope = 0.0;
    double residual = 0.0;  ///< RMS residual of the log-log fit
    bool truncated = false;
    std::string notice;
};

inline constexpr long kMinRateWindow = 10;

/// Least-squares slope of log(value) against log(k) over k in [k_lo, k_hi].
/// The window is cut at the first value <= floor (0 by default: exact zeros).
inline RateFit fit_rate(std::span<const long> ks, std::span<const double> values, const std::string& metric,
                        long k_lo, long k_hi, double floor = 0.0) {
    if (ks.size() != values.size()) throw ArgumentError("fit_rate: k and value series differ in length");
    RateFit fit;
    fit.metric = metric;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (ks[i] < k_lo || ks[i] > k_hi) continue;
        if (!(values[i] > floor)) {
            fit.truncated = true;
            fit.notice = "window truncated at k = " + std::to_string(ks[i]) + " (metric reached floor)";
            break;
        }
        if (!std::isfinite(values[i])) throw ArgumentError("fit_rate: metric is not finite at k = " + std::to_string(ks[i]));
        if (lx.empty()) fit.k_first = ks[i];
        fit.k_last = ks[i];
        lx.push_back(std::log(static_cast<double>(ks[i])));
        ly.push_back(std::log(values[i]));
    }
    if (static_cast<long>(lx.size()) < kMinRateWindow)
        throw ArgumentError("fit_rate: window holds fewer than 10 usable points");
    const auto n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    fit.slope = sxy / sxx;
    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double e = ly[i] - (my + fit.slope * (lx[i] - mx));
        ss += e * e;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

inline std::vector<double> running_min(std::span<const double> values) {
    std::vector<double> out(values.begin(), values.end());
    for (std::size_t i = 1; i < out.size(); ++i) out[i] = std::min(out[i], out[i - 1]);
    return out;
}

}  // namespace dualprox
