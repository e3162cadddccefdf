#include <gtest/gtest.h>

#include <cmath>

#include <dualprox/diagnostics.hpp>
#include <dualprox/problems.hpp>

#include "support/generators.hpp"

using namespace dualprox;
using testsupport::vec;

namespace {

CompositeProblem toy() { return make_tv1d({vec({0.0, 4.0}), 1.0}); }

CompositeProblem box_qp(std::uint64_t seed) {
    RandomBoxQpSpec spec;
    spec.seed = seed;
    return make_random_box_qp(spec);
}

SolverReport run(const CompositeProblem& p, Method m, const Schedule& s, long iters,
                 std::optional<Vector> y0 = std::nullopt, bool backtrack = false) {
    SolverOptions o;
    o.method = m;
    o.schedule = s;
    o.step = backtrack ? StepSizeRule::default_backtracking(p) : StepSizeRule::fixed(p.lipschitz_dual());
    o.max_iters = iters;
    o.certificate_mode = true;
    o.y0 = std::move(y0);
    return run_solver(p, o);
}

const BoundCertificate& find(const Certificates& cs, const std::string& id, long k) {
    for (const auto& c : cs)
        if (c.bound_id == id && c.k == k) return c;
    throw std::runtime_error("missing certificate " + id);
}

void expect_all_pass(const Certificates& cs, const std::string& what) {
    const auto s = summarize(cs);
    EXPECT_TRUE(s.all_pass()) << what << ": " << s.first_failure->bound_id << " k=" << s.first_failure->k
                              << " B=" << s.first_failure->bound << " M=" << s.first_failure->measured;
}

}  // namespace

TEST(WithinBound, SlackRule) {
    EXPECT_TRUE(within_bound(1.0, 1.0, 1e-9, 1e-12));
    EXPECT_TRUE(within_bound(1.0 + 5e-10, 1.0, 1e-9, 1e-12));
    EXPECT_FALSE(within_bound(1.0 + 2e-9, 1.0, 1e-9, 1e-12));
    EXPECT_TRUE(within_bound(0.0, 0.0, 1e-9, 1e-12));
    EXPECT_TRUE(within_bound(5e-13, 0.0, 1e-9, 1e-12));
    // Negative bounds get slack on |B|, not a tightening.
    EXPECT_TRUE(within_bound(-1.0, -1.0, 1e-9, 1e-12));
    EXPECT_FALSE(within_bound(-0.5, -1.0, 1e-9, 1e-12));
    EXPECT_TRUE(within_bound(1e300, kInf, 1e-9, 1e-12));
    EXPECT_FALSE(within_bound(kInf, 1.0, 1e-9, 1e-12));
    EXPECT_FALSE(within_bound(std::nan(""), 1.0, 1e-9, 1e-12));
}

TEST(FdpgDual, ToyOneStep) {
    const auto p = toy();
    const auto ref = reference_enumerate(p);
    const auto rep = run(p, Method::fdpg, Schedule::fista(), 1);
    const auto cs = cert_fdpg_dual(ref, rep);
    const auto& c = find(cs, "fdpg_dual_k", 1);
    EXPECT_NEAR(c.bound, 1.0, 1e-12);
    EXPECT_NEAR(c.measured, 0.0, 1e-14);
    EXPECT_TRUE(c.pass);
    // t_0 = 1: the t-form is 2 L D^2.
    EXPECT_NEAR(find(cs, "fdpg_dual_t", 1).bound, 4.0, 1e-12);
}

TEST(FdpgDual, StartAtOptimum) {
    const auto p = box_qp(42);
    const auto ref = reference_enumerate(p);
    const auto rep = run(p, Method::fdpg, Schedule::fista(), 30, ref.y_star);
    for (const auto& c : cert_fdpg_dual(ref, rep)) {
        EXPECT_GE(c.bound, 0.0);
        EXPECT_TRUE(c.pass) << c.bound_id << " k=" << c.k << " M=" << c.measured;
    }
}

TEST(FdpgDual, NotApplicableWithoutFistaMomentum) {
    const auto p = toy();
    const auto ref = reference_enumerate(p);
    const auto cs = cert_fdpg_dual(ref, run(p, Method::gfdpg, Schedule::poly(3), 3));
    for (const auto& c : cs) EXPECT_FALSE(c.applicable);
}

TEST(GfdpgDual, FirstIterationBound) {
    const auto p = toy();
    const auto ref = reference_enumerate(p);
    const auto rep = run(p, Method::gfdpg, Schedule::poly(3), 50);
    const auto cs = cert_gfdpg_dual(ref, rep);
    EXPECT_NEAR(find(cs, "gfdpg_dual", 1).bound, rep.records[0].step_l / 2.0, 1e-15);
    expect_all_pass(cs, "toy poly3");
    for (const auto& c : cert_gfdpg_dual(ref, run(p, Method::dpg, Schedule::fista(), 3))) EXPECT_FALSE(c.applicable);
}

TEST(GfdpgDual, FistaTraceSatisfiesBothForms) {
    const auto p = box_qp(5);
    const auto ref = reference_enumerate(p);
    const auto rep = run(p, Method::gfdpg, Schedule::fista(), 300);
    const auto a = cert_fdpg_dual(ref, rep);
    const auto b = cert_gfdpg_dual(ref, rep);
    expect_all_pass(a, "fdpg form");
    expect_all_pass(b, "gfdpg form");
    EXPECT_EQ(summarize(a).not_applicable, 0u);
    // Independently evaluated: 2L/t^2 and L/(2T) differ by exactly 4 when t^2 = T.
    for (long k : {1L, 10L, 100L}) {
        EXPECT_NEAR(find(a, "fdpg_dual_t", k).bound, 4.0 * find(b, "gfdpg_dual", k).bound,
                    1e-9 * find(a, "fdpg_dual_t", k).bound);
    }
}

TEST(GfdpgGradnorm, FistaHasNoLFreeVariant) {
    const auto p = box_qp(42);
    const auto ref = reference_enumerate(p);
    const auto rep = run(p, Method::fdpg, Schedule::fista(), 40);
    const auto cs = cert_gfdpg_gradnorm(ref, rep);
    for (const auto& c : cs) {
        if (c.bound_id == "gfdpg_gradnorm_lfree") {
            EXPECT_FALSE(c.applicable);
        } else {
            EXPECT_TRUE(c.pass);
            const double dist0 = (rep.y0 - ref.y_star).norm();
            EXPECT_NEAR(c.bound, dist0 / std::sqrt(rep.momentum.big_t[static_cast<std::size_t>(c.k - 1)]),
                        1e-6 * c.bound);
        }
    }
}

TEST(GfdpgGradnorm, PolyOnToyAndZeroStart) {
    const auto p = toy();
    const auto ref = reference_enumerate(p);
    const auto cs = cert_gfdpg_gradnorm(ref, run(p, Method::gfdpg, Schedule::poly(3), 1000));
    expect_all_pass(cs, "toy poly3");
    EXPECT_GT(summarize(cs).applicable, 1000u);
    const auto at = cert_gfdpg_gradnorm(ref, run(p, Method::gfdpg, Schedule::poly(3), 5, ref.y_star));
    for (const auto& c : at) {
        if (!c.applicable) continue;
        EXPECT_EQ(c.bound, 0.0);
        EXPECT_TRUE(c.pass);
    }
}

TEST(PolyScheduleBound, Constants) {
    EXPECT_NEAR(corollary_constant(3.0), 3.0 * std::sqrt(6.0), 1e-14);
    EXPECT_NEAR(corollary_constant(3.0), 7.34847, 1e-5);
    EXPECT_NEAR(corollary_constant(4.0), 2.0 * std::sqrt(12.0), 1e-14);
    EXPECT_NEAR(corollary_constant(4.0), 6.92820, 1e-5);
}

TEST(PolyScheduleBound, RequiresPolyAboveTwo) {
    const auto p = toy();
    const auto ref = reference_enumerate(p);
    for (const auto& c : cert_corollary_gradnorm(ref, run(p, Method::gfdpg, Schedule::poly(2), 5), 2.0))
        EXPECT_FALSE(c.applicable);
    for (const auto& c : cert_corollary_gradnorm(ref, run(p, Method::fdpg, Schedule::fista(), 5), 3.0))
        EXPECT_FALSE(c.applicable);
    const auto qp = box_qp(42);
    const auto qref = reference_enumerate(qp);
    const auto cs = cert_corollary_gradnorm(qref, run(qp, Method::gfdpg, Schedule::poly(3), 1000), 3.0);
    EXPECT_EQ(summarize(cs).applicable, 1000u);
    expect_all_pass(cs, "box-QP poly3");
}

TEST(DpgGradnorm, ToyAndOptimumStart) {
    const auto p = toy();
    const auto ref = reference_enumerate(p);
    const auto cs = cert_dpg_gradnorm(ref, run(p, Method::dpg, Schedule::fista(), 1));
    EXPECT_NEAR(find(cs, "dpg_gradnorm", 1).bound, 2.0, 1e-15);
    EXPECT_NEAR(find(cs, "dpg_gradnorm", 1).measured, 0.0, 1e-14);
    for (const auto& c : cert_dpg_gradnorm(ref, run(p, Method::dpg, Schedule::fista(), 4, ref.y_star))) {
        EXPECT_EQ(c.bound, 0.0);
        EXPECT_TRUE(c.pass);
    }
    const auto qp = box_qp(42);
    expect_all_pass(cert_dpg_gradnorm(reference_enumerate(qp), run(qp, Method::fdpg, Schedule::fista(), 1000)),
                    "fdpg box-QP");
    for (const auto& c : cert_dpg_gradnorm(ref, run(p, Method::gfdpg, Schedule::poly(3), 2))) EXPECT_FALSE(c.applicable);
}

TEST(SplitGap, ToyProbeHandValues) {
    const auto p = toy();
    const double lf = p.lipschitz_dual();
    const auto pr = probe_prox_gradient(p, vec({0.0}), eval_dual(p, vec({0.0})).value(), lf, 2.0);
    EXPECT_NEAR(pr.p[0], -1.0, 1e-15);
    EXPECT_NEAR((pr.l_prime + lf) * pr.p_norm * pr.pg_norm, 4.0, 1e-12);
    EXPECT_NEAR(pr.split_gap.value(), 0.0, 1e-14);
    // At y* both sides vanish.
    const auto at = probe_prox_gradient(p, vec({-1.0}), -3.0, lf, 2.0);
    EXPECT_NEAR(at.pg_norm, 0.0, 1e-15);
    EXPECT_NEAR(at.split_gap.value(), 0.0, 1e-14);
}

TEST(SplitGap, IntersectionProjectionPasses) {
    const auto problems = testsupport::gallery(11);
    const auto& p = problems[2];
    const auto ref = reference_longrun(p);
    const auto cs = cert_pd_gap_Pprime(ref, run(p, Method::fdpg, Schedule::fista(), 100));
    EXPECT_EQ(summarize(cs).applicable, 100u);
    expect_all_pass(cs, "intersection");
}

TEST(GapP, FdpgRateOnToy) {
    const auto p = toy();
    const auto ref = reference_enumerate(p);
    const auto rep = run(p, Method::dpg, Schedule::fista(), 1);
    const auto cs = cert_pd_gap_P(ref, rep);
    const auto& c = find(cs, "theorem2_gap", 1);
    const double lp = rep.records[0].probe->l_prime;
    EXPECT_NEAR(lp, p.lipschitz_dual(), 0.0);
    EXPECT_NEAR(c.bound, 24.0, 1e-12);
    EXPECT_NEAR(c.measured, 0.0, 1e-14);
    EXPECT_TRUE(c.pass);
    EXPECT_FALSE(find(cs, "theorem4_gap", 1).applicable);
}

TEST(GapP, NotApplicableForIndicators) {
    const auto problems = testsupport::gallery();
    const auto& p = problems[2];
    const auto ref = reference_longrun(p);
    const auto cs = cert_pd_gap_P(ref, run(p, Method::fdpg, Schedule::fista(), 5));
    EXPECT_EQ(summarize(cs).applicable, 0u);
    EXPECT_EQ(summarize(cs).not_applicable, 15u);
}

TEST(IterateBound, ToyAndDegenerateOptimum) {
    const auto p = toy();
    const auto ref = reference_enumerate(p);
    const auto cs = cert_iterate_bound(ref, run(p, Method::gfdpg, Schedule::poly(3), 30));
    EXPECT_NEAR(find(cs, "lemma5_iterate", 1).bound, 2.0, 1e-14);
    expect_all_pass(cs, "toy");
    const auto flat = make_tv1d({Vector::Constant(4, 1.0), 2.0});
    const auto fref = reference_enumerate(flat);
    for (Method m : {Method::dpg, Method::fdpg, Method::gfdpg}) {
        const auto rep = run(flat, m, Schedule::poly(3), 10);
        for (const auto& c : cert_iterate_bound(fref, rep)) {
            EXPECT_LE(c.bound, 1e-14);
            EXPECT_EQ(c.measured, 0.0);
        }
    }
}

TEST(PrimalCostBound, SoftBudgetPassesAndIndicatorsAreNotApplicable) {
    const auto res = make_resource_allocation(testsupport::resource_spec(1.5));
    ASSERT_TRUE(std::isfinite(res.gamma_h()));
    const auto ref = reference_longrun(res);
    for (Method m : {Method::dpg, Method::fdpg}) {
        const auto cs = cert_primal_cost_assumption1(ref, run(res, m, Schedule::fista(), 300));
        expect_all_pass(cs, to_string(m));
        EXPECT_EQ(summarize(cs).applicable, 300u);
        const auto at = cert_primal_cost_assumption1(ref, run(res, m, Schedule::fista(), 5, ref.y_star));
        for (const auto& c : at) EXPECT_LE(c.measured, 1e-9);
    }
    const auto hard = make_resource_allocation(testsupport::resource_spec());
    for (const auto& c : cert_primal_cost_assumption1(reference_longrun(hard), run(hard, Method::dpg, Schedule::fista(), 3)))
        EXPECT_FALSE(c.applicable);
    const auto tv = toy();
    for (const auto& c : cert_primal_cost_assumption1(reference_enumerate(tv), run(tv, Method::dpg, Schedule::fista(), 3)))
        EXPECT_FALSE(c.applicable);
}

TEST(Telescoping, PolyTracesPass) {
    for (std::uint64_t seed : {42u, 1u}) {
        const auto p = box_qp(seed);
        const auto ref = reference_enumerate(p);
        for (double a : {3.0, 8.0}) {
            expect_all_pass(cert_telescoping(ref, run(p, Method::gfdpg, Schedule::poly(a), 500)), "poly");
            expect_all_pass(cert_telescoping(ref, run(p, Method::gfdpg, Schedule::poly(a), 500, std::nullopt, true)),
                            "poly backtracking");
        }
    }
}

TEST(Evaluation, PassFlagsAreConsistentAndPure) {
    const auto p = box_qp(42);
    const auto ref = reference_enumerate(p);
    const auto rep = run(p, Method::gfdpg, Schedule::poly(4), 200, std::nullopt, true);
    const auto a = evaluate_all(ref, rep);
    const auto b = evaluate_all(ref, rep);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].bound_id, b[i].bound_id);
        EXPECT_EQ(a[i].k, b[i].k);
        if (!a[i].applicable) {
            EXPECT_TRUE(a[i].pass);
            continue;
        }
        EXPECT_EQ(a[i].bound, b[i].bound);
        EXPECT_EQ(a[i].measured, b[i].measured);
        EXPECT_EQ(a[i].margin(), a[i].bound - a[i].measured);
        const double rel = a[i].bound_id == "telescoping" ? 1e-8 : 1e-9;
        EXPECT_EQ(a[i].pass, within_bound(a[i].measured, a[i].bound, rel, 1e-12)) << a[i].bound_id;
    }
    expect_all_pass(a, "gfdpg poly4 backtracking");
}

TEST(Evaluation, BoundScaleInjectsFailures) {
    const auto p = box_qp(42);
    const auto ref = reference_enumerate(p);
    const auto rep = run(p, Method::fdpg, Schedule::fista(), 50);
    CertificateSettings cs;
    cs.bound_scale = 0.5;
    const auto s = summarize(evaluate_family(CertificateFamily::iterate_bound, ref, rep, cs));
    EXPECT_GT(s.failed, 0u);
    ASSERT_TRUE(s.first_failure.has_value());
    EXPECT_FALSE(s.first_failure->pass);
}

TEST(Evaluation, LowPrecisionReferenceWidensSlack) {
    const auto p = toy();
    auto ref = reference_enumerate(p);
    const auto rep = run(p, Method::fdpg, Schedule::fista(), 3);
    // Understating q~(y*) by 0.3 exceeds the k = 3 bound 2 L / 16 = 0.25 by 0.05.
    ref.dual_value -= 0.3;
    const auto strict = cert_fdpg_dual(ref, rep);
    EXPECT_FALSE(find(strict, "fdpg_dual_k", 3).pass);
    ref.low_precision = true;
    ref.residual = 0.01;
    const auto widened = cert_fdpg_dual(ref, rep);
    EXPECT_TRUE(find(widened, "fdpg_dual_k", 3).pass);
    EXPECT_FALSE(widened[0].note.empty());
}

TEST(Evaluation, ErrorsOnMissingProbeOrWrongDimension) {
    const auto p = toy();
    const auto ref = reference_enumerate(p);
    SolverOptions o;
    o.method = Method::dpg;
    o.step = StepSizeRule::fixed(2.0);
    o.max_iters = 2;
    const auto rep = run_solver(p, o);
    EXPECT_THROW(cert_dpg_gradnorm(ref, rep), CapabilityError);
    auto bad = ref;
    bad.y_star = vec({1.0, 2.0});
    EXPECT_THROW(cert_iterate_bound(bad, rep), ArgumentError);
}

TEST(FitRate, SyntheticPowerLaws) {
    std::vector<long> ks;
    std::vector<double> sq, th;
    for (long k = 1; k <= 500; ++k) {
        ks.push_back(k);
        sq.push_back(3.0 / static_cast<double>(k * k));
        th.push_back(0.7 / std::pow(static_cast<double>(k), 1.5));
    }
    const auto f2 = fit_rate(ks, sq, "sq", 10, 400);
    EXPECT_NEAR(f2.slope, -2.0, 0.01);
    EXPECT_EQ(f2.k_first, 10);
    EXPECT_EQ(f2.k_last, 400);
    EXPECT_LT(f2.residual, 1e-10);
    EXPECT_FALSE(f2.truncated);
    EXPECT_NEAR(fit_rate(ks, th, "th", 1, 500).slope, -1.5, 0.01);
}

TEST(FitRate, TruncatesAtZeroAndFloor) {
    std::vector<long> ks;
    std::vector<double> v;
    for (long k = 1; k <= 100; ++k) {
        ks.push_back(k);
        v.push_back(k <= 40 ? 1.0 / static_cast<double>(k) : 0.0);
    }
    const auto f = fit_rate(ks, v, "m", 1, 100);
    EXPECT_TRUE(f.truncated);
    EXPECT_EQ(f.k_last, 40);
    EXPECT_FALSE(f.notice.empty());
    EXPECT_NEAR(f.slope, -1.0, 1e-12);
    const auto g = fit_rate(ks, v, "m", 1, 100, 1.0 / 20.5);
    EXPECT_EQ(g.k_last, 20);
    EXPECT_THROW(fit_rate(ks, v, "m", 35, 100), ArgumentError);
    EXPECT_THROW(fit_rate(ks, v, "m", 1, 9), ArgumentError);
}

TEST(FitRate, RunningMinimum) {
    const std::vector<double> v{3.0, 1.0, 2.0, 0.5, 4.0};
    EXPECT_EQ(running_min(v), (std::vector<double>{3.0, 1.0, 1.0, 0.5, 0.5}));
}
