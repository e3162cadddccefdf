#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <dualprox/diagnostics.hpp>
#include <dualprox/problems.hpp>

#include "support/generators.hpp"

using namespace dualprox;
using testsupport::Gen;

// Randomized instances: every applicable certificate must pass on every run.

namespace {

CompositeProblem random_instance(Gen& g, int kind) {
    switch (kind) {
        case 0: {
            const Index n = g.integer(3, 14);
            return make_tv1d({g.vector(n, 2.0), g.uniform(0.2, 2.0)});
        }
        case 1: {
            RandomBoxQpSpec s;
            s.seed = static_cast<std::uint64_t>(g.integer(0, 1 << 30));
            s.m = g.integer(1, 6);
            s.n = s.m + g.integer(0, 6);
            s.sigma = g.uniform(0.3, 3.0);
            s.lambda = g.uniform(0.2, 2.0);
            if (g.uniform(0.0, 1.0) < 0.5) s.g = RandomBoxQpSpec::Regularizer::box;
            return make_random_box_qp(s);
        }
        case 2: {
            ResourceAllocSpec s;
            const Index n = g.integer(2, 6), m = g.integer(1, 3);
            s.alpha = Vector(n);
            s.beta = Vector(n);
            for (Index j = 0; j < n; ++j) {
                s.alpha[j] = g.uniform(0.5, 3.0);
                s.beta[j] = g.uniform(0.5, 2.0);
            }
            s.lo = Vector::Zero(n);
            s.hi = Vector::Constant(n, 2.0);
            s.coupling = Matrix(m, n);
            for (Index i = 0; i < m; ++i)
                for (Index j = 0; j < n; ++j) s.coupling(i, j) = g.uniform(0.1, 1.0);
            s.budget = g.uniform(0.2, 0.8) * (s.coupling * s.hi);
            if (g.uniform(0.0, 1.0) < 0.5) s.overrun_penalty = g.uniform(0.5, 3.0);
            return make_resource_allocation(s);
        }
        default: {
            IntersectionProjSpec s;
            const Index n = g.integer(2, 6);
            s.d = g.vector(n, 2.0);
            s.sets.emplace_back(BoxSet{Vector::Constant(n, -1.0), Vector::Constant(n, 1.0)});
            s.sets.emplace_back(HalfspaceSet{g.vector(n), g.uniform(-0.5, 1.0)});
            return make_intersection_projection(s);
        }
    }
}

ReferenceSolution reference_for(const CompositeProblem& p) {
    try {
        return reference_enumerate(p);
    } catch (const CapabilityError&) {
        return reference_longrun(p);
    }
}

Schedule random_schedule(Gen& g, long iters) {
    switch (g.integer(0, 3)) {
        case 0: return Schedule::fista();
        case 1: return Schedule::poly(g.uniform(2.05, 10.0));
        case 2: return Schedule::poly(2.0);
        default: return Schedule::fixed_horizon(iters);
    }
}

}  // namespace

class CertificateProperty : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(CertificateProperty, AllCertificatesPass) {
    Gen g(GetParam());
    for (int kind = 0; kind < 4; ++kind) {
        const auto p = random_instance(g, kind);
        const auto ref = reference_for(p);
        for (Method m : {Method::dpg, Method::fdpg, Method::gfdpg}) {
            SolverOptions o;
            o.method = m;
            o.max_iters = g.integer(50, 250);
            o.schedule = random_schedule(g, o.max_iters);
            o.certificate_mode = true;
            o.step = g.uniform(0.0, 1.0) < 0.5 ? StepSizeRule::fixed(p.lipschitz_dual() * g.uniform(1.0, 2.0))
                                               : StepSizeRule::backtracking(p.lipschitz_dual() * g.uniform(0.01, 1.0),
                                                                            g.uniform(1.2, 3.0));
            if (g.uniform(0.0, 1.0) < 0.3) o.y0 = g.vector(p.dual_dim());
            const auto rep = run_solver(p, o);
            std::ostringstream what;
            what << p.name() << " " << to_string(m) << " " << rep.schedule.describe() << " seed " << GetParam();
            ASSERT_EQ(rep.termination, Termination::max_iters) << what.str() << ": " << rep.abort_message;
            const auto s = summarize(evaluate_all(ref, rep));
            EXPECT_TRUE(s.all_pass()) << what.str() << ": " << s.first_failure->bound_id << " k="
                                      << s.first_failure->k << " B=" << s.first_failure->bound
                                      << " M=" << s.first_failure->measured;
            EXPECT_GT(s.applicable, 0u);
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Seeds, CertificateProperty, ::testing::Range<std::uint64_t>(100, 112));

TEST(Properties, WeakDualityAtRandomDualPoints) {
    Gen g(71);
    for (int kind = 0; kind < 4; ++kind) {
        const auto p = random_instance(g, kind);
        for (int trial = 0; trial < 40; ++trial) {
            const Vector y = g.vector(p.dual_dim());
            const ExtendedReal q = eval_dual(p, y);
            const Vector x = g.vector(p.primal_dim());
            const ExtendedReal h = eval_primal(p, x);
            if (q.is_finite() && h.is_finite()) EXPECT_GE(h.value(), -q.value() - 1e-10 * (1.0 + std::abs(q.value())));
            // The primal recovery is the best x for this y.
            if (q.is_finite()) {
                const ExtendedReal hx = eval_primal(p, primal_from_dual(p, y));
                if (hx.is_finite()) EXPECT_GE(hx.value(), -q.value() - 1e-10 * (1.0 + std::abs(q.value())));
            }
        }
    }
}

TEST(Properties, DescentOnEveryProbe) {
    Gen g(73);
    for (int kind = 0; kind < 4; ++kind) {
        const auto p = random_instance(g, kind);
        for (int trial = 0; trial < 40; ++trial) {
            const Vector y = prox_form_step(p, g.vector(p.dual_dim()), p.lipschitz_dual());
            const ExtendedReal q = eval_dual(p, y);
            ASSERT_TRUE(q.is_finite()) << p.name();
            const auto pr = probe_prox_gradient(p, y, q.value(), p.lipschitz_dual() * g.uniform(0.01, 1.0), 2.0);
            EXPECT_LE(pr.descent_lhs, pr.descent_rhs + 1e-9 * (1.0 + std::abs(q.value()))) << p.name();
            EXPECT_LE(pr.l_prime, 2.0 * p.lipschitz_dual() * (1.0 + 1e-12));
        }
    }
}

TEST(Properties, ProxOutputsAreNonexpansiveInY) {
    // For L >= L_F / 2 both the gradient step and the prox are nonexpansive.
    Gen g(79);
    for (int kind = 0; kind < 4; ++kind) {
        const auto p = random_instance(g, kind);
        for (int trial = 0; trial < 40; ++trial) {
            const Vector a = g.vector(p.dual_dim()), b = g.vector(p.dual_dim());
            const double l = p.lipschitz_dual() * g.uniform(1.0, 4.0);
            EXPECT_LE((dpg_step(p, a, l).y - dpg_step(p, b, l).y).norm(), (a - b).norm() * (1.0 + 1e-10));
        }
    }
}
