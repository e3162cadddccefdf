#include <gtest/gtest.h>

#include <cmath>

#include <dualprox/problems.hpp>
#include <dualprox/reference.hpp>
#include <dualprox/solvers.hpp>

#include "support/generators.hpp"

using namespace dualprox;
using testsupport::Gen;
using testsupport::vec;

namespace {

CompositeProblem toy() { return make_tv1d({vec({0.0, 4.0}), 1.0}); }

CompositeProblem box_qp(std::uint64_t seed) {
    RandomBoxQpSpec spec;
    spec.seed = seed;
    return make_random_box_qp(spec);
}

SolverOptions options(Method m, const Schedule& s, StepSizeRule step, long iters) {
    SolverOptions o;
    o.method = m;
    o.schedule = s;
    o.step = step;
    o.max_iters = iters;
    return o;
}

}  // namespace

TEST(DpgStep, ToyHandComputation) {
    const auto p = toy();
    const DpgStep s = dpg_step(p, vec({0.0}), 2.0);
    EXPECT_NEAR(s.u[0], 0.0, 1e-15);
    EXPECT_NEAR(s.u[1], 4.0, 1e-15);
    EXPECT_NEAR(s.v[0], 2.0, 1e-15);
    EXPECT_NEAR(s.y[0], -1.0, 1e-15);
    // v is z(y): -y = 1 lies in the subdifferential of |.| at v = 2.
    EXPECT_NEAR(std::copysign(1.0, s.v[0]), -s.y[0], 0.0);
}

TEST(DpgStep, OptimumIsFixedPoint) {
    const auto p = toy();
    EXPECT_NEAR(dpg_step(p, vec({-1.0}), 2.0).y[0], -1.0, 1e-15);
    for (double l : {0.1, 1.0, 2.0, 50.0}) EXPECT_NEAR(prox_form_step(p, vec({-1.0}), l)[0], -1.0, 1e-14);
    EXPECT_THROW(dpg_step(p, vec({0.0}), 0.0), ArgumentError);
    EXPECT_THROW(prox_form_step(p, vec({0.0}), -1.0), ArgumentError);
}

TEST(ProxFormStep, ToyMoreauRoute) {
    EXPECT_NEAR(prox_form_step(toy(), vec({0.0}), 2.0)[0], -1.0, 1e-15);
}

TEST(ProxFormStep, AgreesWithDpgStepOnGallery) {
    Gen g(29);
    for (const auto& p : testsupport::gallery()) {
        for (int trial = 0; trial < 50; ++trial) {
            const Vector y = g.vector(p.dual_dim(), 2.0);
            const double l = p.lipschitz_dual() * g.uniform(0.2, 5.0);
            const Vector a = dpg_step(p, y, l).y;
            const Vector b = prox_form_step(p, y, l);
            EXPECT_LE((a - b).norm(), 1e-10 * (1.0 + a.norm())) << p.name();
        }
    }
}

TEST(GfdpgMomentum, PolyCoefficients) {
    const auto seq = Schedule::poly(3).generate(2);
    // y_k = 0, y_prev = -e1, w_prev = -e2 isolates the two coefficients.
    const Vector y = vec({0.0, 0.0}), y_prev = vec({-1.0, 0.0}), w_prev = vec({0.0, -1.0});
    const Vector w2 = gfdpg_momentum(y, y_prev, w_prev, seq.t[1], seq.t[2], seq.big_t[1], seq.big_t[2]);
    EXPECT_NEAR(w2[0], 5.0 / 16.0, 1e-15);
    EXPECT_NEAR(w2[1], -25.0 / 144.0, 1e-15);
    const Vector w1 = gfdpg_momentum(y, y_prev, w_prev, seq.t[0], seq.t[1], seq.big_t[0], seq.big_t[1]);
    EXPECT_EQ(w1.norm(), 0.0);
}

TEST(GfdpgMomentum, ReducesToFistaUpdate) {
    Gen g(31);
    const auto seq = Schedule::fista().generate(50);
    for (std::size_t k = 1; k <= 50; ++k) {
        const Vector y = g.vector(5), y_prev = g.vector(5), w_prev = g.vector(5);
        const Vector gen = gfdpg_momentum(y, y_prev, w_prev, seq.t[k - 1], seq.t[k], seq.big_t[k - 1], seq.big_t[k]);
        const Vector fista = y + ((seq.t[k - 1] - 1.0) / seq.t[k]) * (y - y_prev);
        EXPECT_LE((gen - fista).norm(), 1e-12 * (1.0 + fista.norm())) << "k=" << k;
    }
}

TEST(Backtracking, AcceptsTrueLipschitzImmediately) {
    Gen g(37);
    for (const auto& p : testsupport::gallery()) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto r = backtracking_search(p, g.vector(p.dual_dim()), p.lipschitz_dual(), 2.0);
            EXPECT_EQ(r.doublings, 0) << p.name();
        }
    }
}

TEST(Backtracking, ToyFromAnEighthOfLipschitz) {
    const auto p = toy();
    const double lf = p.lipschitz_dual();
    const auto r = backtracking_search(p, vec({0.0}), lf / 8.0, 2.0);
    EXPECT_LE(r.doublings, 3);
    EXPECT_LE(r.step_l, 2.0 * lf * (1.0 + 1e-12));
    EXPECT_NEAR(r.dual_value, eval_dual(p, r.step.y).value(), 1e-12);
    Gen g(41);
    for (const auto& q : testsupport::gallery()) {
        for (int trial = 0; trial < 10; ++trial) {
            const double l0 = q.lipschitz_dual() * g.uniform(1e-3, 1.0);
            const auto b = backtracking_search(q, g.vector(q.dual_dim()), l0, 2.0);
            EXPECT_LE(b.step_l, 2.0 * q.lipschitz_dual() * (1.0 + 1e-12)) << q.name();
        }
    }
}

TEST(Backtracking, MajorizerEqualsDualAtBase) {
    Gen g(43);
    const auto p = box_qp(42);
    for (int trial = 0; trial < 10; ++trial) {
        const Vector w = g.vector(p.dual_dim(), 0.5);
        const ExtendedReal big_g = p.g().conjugate(-w);
        const ExtendedReal q = majorizer_value(p, w, w, 3.0, big_g);
        const ExtendedReal dual = eval_dual(p, w);
        ASSERT_EQ(q.is_finite(), dual.is_finite());
        if (q.is_finite()) EXPECT_NEAR(q.value(), dual.value(), 1e-12 * (1.0 + std::abs(dual.value())));
    }
}

TEST(Backtracking, RejectsBadArguments) {
    const auto p = toy();
    EXPECT_THROW(backtracking_search(p, vec({0.0}), 0.0, 2.0), ArgumentError);
    EXPECT_THROW(backtracking_search(p, vec({0.0}), 1.0, 1.0), ArgumentError);
}

TEST(RunSolver, ToyConvergesInOneDpgStep) {
    const auto p = toy();
    auto o = options(Method::dpg, Schedule::fista(), StepSizeRule::fixed(p.lipschitz_dual()), 5);
    o.certificate_mode = true;
    o.pg_tol = 1e-12;
    const auto rep = run_solver(p, o);
    ASSERT_EQ(rep.records.size(), 1u);
    EXPECT_EQ(rep.termination, Termination::pg_tolerance);
    EXPECT_NEAR(rep.records[0].y[0], -1.0, 1e-14);
    ASSERT_TRUE(rep.records[0].probe.has_value());
    EXPECT_LE(rep.records[0].probe->pg_norm, 1e-14);
    EXPECT_NEAR(rep.records[0].dual_value, -3.0, 1e-14);
}

TEST(RunSolver, StartingAtOptimumMakesNoProgress) {
    const std::vector<std::pair<CompositeProblem, Vector>> cases{
        {toy(), vec({-1.0})}, {box_qp(42), reference_enumerate(box_qp(42)).y_star}};
    for (const auto& [p, ystar] : cases) {
        for (Method m : {Method::dpg, Method::fdpg, Method::gfdpg}) {
            auto o = options(m, Schedule::poly(3), StepSizeRule::fixed(p.lipschitz_dual()), 20);
            o.certificate_mode = true;
            o.y0 = ystar;
            const auto rep = run_solver(p, o);
            ASSERT_EQ(rep.records.size(), 20u);
            for (const auto& r : rep.records) {
                EXPECT_LE(r.probe->pg_norm, 1e-12) << to_string(m);
                EXPECT_LE(r.step_norm, 1e-12) << to_string(m);
            }
        }
    }
}

TEST(RunSolver, GfdpgWithFistaScheduleIsFdpg) {
    for (std::uint64_t seed : {42u, 7u}) {
        const auto p = box_qp(seed);
        for (const auto& step : {StepSizeRule::fixed(p.lipschitz_dual()), StepSizeRule::default_backtracking(p)}) {
            const auto a = run_solver(p, options(Method::fdpg, Schedule::fista(), step, 100));
            const auto b = run_solver(p, options(Method::gfdpg, Schedule::fista(), step, 100));
            ASSERT_EQ(a.records.size(), b.records.size());
            for (std::size_t k = 0; k < a.records.size(); ++k) {
                EXPECT_LE((a.records[k].y - b.records[k].y).norm(), 1e-10 * (1.0 + a.records[k].y.norm()));
                EXPECT_EQ(a.records[k].step_l, b.records[k].step_l);
            }
        }
    }
}

TEST(RunSolver, DpgIsMonotone) {
    for (const auto& p : testsupport::gallery()) {
        for (const auto& step : {StepSizeRule::fixed(p.lipschitz_dual()), StepSizeRule::default_backtracking(p)}) {
            const auto rep = run_solver(p, options(Method::dpg, Schedule::fista(), step, 200));
            ASSERT_EQ(rep.termination, Termination::max_iters) << rep.abort_message;
            double prev = rep.dual_value_y0;
            for (const auto& r : rep.records) {
                EXPECT_LE(r.dual_value, prev + 1e-12 * (1.0 + std::abs(prev))) << p.name() << " k=" << r.k;
                prev = r.dual_value;
            }
        }
    }
}

TEST(RunSolver, PerIterationResidualsAndStepMonotonicity) {
    for (const auto& p : testsupport::gallery()) {
        for (Method m : {Method::dpg, Method::fdpg, Method::gfdpg}) {
            auto o = options(m, Schedule::poly(4), StepSizeRule::default_backtracking(p), 150);
            o.certificate_mode = true;
            const auto rep = run_solver(p, o);
            ASSERT_EQ(rep.termination, Termination::max_iters) << rep.abort_message;
            double prev_l = 0.0;
            for (const auto& r : rep.records) {
                EXPECT_LE(r.lemma2_residual, 1e-10);
                if (m == Method::gfdpg) EXPECT_LE(r.sform_residual, 1e-10);
                else EXPECT_TRUE(std::isnan(r.sform_residual));
                EXPECT_GE(r.step_l, prev_l);
                prev_l = r.step_l;
                const auto& pr = *r.probe;
                EXPECT_LE(pr.descent_lhs, pr.descent_rhs + 1e-9 * (1.0 + std::abs(r.dual_value)));
            }
        }
    }
}

TEST(RunSolver, RecordCountMatchesIterations) {
    const auto p = box_qp(3);
    for (long iters : {0L, 1L, 17L}) {
        const auto rep = run_solver(p, options(Method::fdpg, Schedule::fista(), StepSizeRule::fixed(p.lipschitz_dual()), iters));
        EXPECT_EQ(rep.records.size(), static_cast<std::size_t>(iters));
        EXPECT_EQ(rep.momentum.t.size(), static_cast<std::size_t>(iters + 1));
    }
}

TEST(RunSolver, BacktrackingFailureAbortsWithPartialReport) {
    const auto p = box_qp(42);
    const auto rep = run_solver(p, options(Method::fdpg, Schedule::fista(), StepSizeRule::backtracking(1e-12, 1.01), 10));
    EXPECT_EQ(rep.termination, Termination::aborted);
    EXPECT_TRUE(rep.records.empty());
    EXPECT_FALSE(rep.abort_message.empty());
}

TEST(RunSolver, RejectsBadOptions) {
    const auto p = toy();
    auto o = options(Method::dpg, Schedule::fista(), StepSizeRule::fixed(2.0), 5);
    o.y0 = vec({0.0, 0.0});
    EXPECT_THROW(run_solver(p, o), ArgumentError);
    o = options(Method::dpg, Schedule::fista(), StepSizeRule::fixed(0.0), 5);
    EXPECT_THROW(run_solver(p, o), ArgumentError);
    o = options(Method::gfdpg, Schedule::fixed_horizon(4), StepSizeRule::fixed(2.0), 5);
    EXPECT_THROW(run_solver(p, o), ScheduleError);
}
