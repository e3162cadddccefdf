#pragma once

// Run configuration, builtin problem gallery and problem spec files.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <dualprox/problems.hpp>
#include <dualprox/reference.hpp>
#include <dualprox/solvers.hpp>

#include "text_format.hpp"

namespace dualprox::cli {

inline constexpr std::uint64_t kDefaultSeed = 42;

inline const std::vector<std::string>& builtin_problem_names() {
    static const std::vector<std::string> names = {"tv1d-toy", "tv1d-64", "intersection", "resource",
                                                   "resource-soft", "boxqp", "boxqp-box", "boxqp-14"};
    return names;
}

inline ProblemSpec builtin_problem(const std::string& name, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    if (name == "tv1d-toy") {
        Tv1dSpec s;
        s.d = Vector(2);
        s.d << 0.0, 4.0;
        s.lambda = 1.0;
        return s;
    }
    if (name == "tv1d-64") {
        Tv1dSpec s;
        s.d = Vector(64);
        for (Index i = 0; i < 64; ++i) s.d[i] = (i < 20 ? 0.0 : (i < 40 ? 3.0 : 1.0)) + 0.5 * normal(rng);
        s.lambda = 1.0;
        return s;
    }
    if (name == "intersection") {
        IntersectionProjSpec s;
        const Index n = 5;
        s.d = Vector(n);
        for (Index i = 0; i < n; ++i) s.d[i] = 2.0 * normal(rng);
        s.sets.emplace_back(BoxSet{Vector::Constant(n, -1.0), Vector::Constant(n, 1.0)});
        s.sets.emplace_back(HalfspaceSet{Vector::Ones(n), 1.0});
        return s;
    }
    if (name == "resource" || name == "resource-soft") {
        ResourceAllocSpec s;
        const Index n = 6, m = 2;
        s.alpha = Vector(n);
        s.beta = Vector(n);
        for (Index j = 0; j < n; ++j) {
            s.alpha[j] = 1.0 + 2.0 * uniform(rng);
            s.beta[j] = 0.5 + uniform(rng);
        }
        s.lo = Vector::Zero(n);
        s.hi = Vector::Constant(n, 2.0);
        s.coupling = Matrix(m, n);
        for (Index i = 0; i < m; ++i)
            for (Index j = 0; j < n; ++j) s.coupling(i, j) = 0.2 + 0.8 * uniform(rng);
        s.budget = 0.4 * (s.coupling * s.hi);
        if (name == "resource-soft") s.overrun_penalty = 2.0;
        return s;
    }
    if (name == "boxqp" || name == "boxqp-box" || name == "boxqp-14") {
        RandomBoxQpSpec s;
        s.seed = seed;
        if (name == "boxqp-14") s.n = s.m = 14;
        if (name == "boxqp-box") s.g = RandomBoxQpSpec::Regularizer::box;
        return s;
    }
    throw ArgumentError("unknown builtin problem '" + name + "'");
}

inline bool is_builtin_problem(const std::string& name) {
    for (const auto& n : builtin_problem_names())
        if (n == name) return true;
    return false;
}

/// Problem spec file: `type = tv1d | intersection | resource | boxqp` plus the
/// fields of that type. Intersection sets are `set<i>.kind = box|halfspace`
/// with `set<i>.lo/hi` or `set<i>.a/beta`, numbered from 1 up to `sets`.
inline ProblemSpec problem_from_keys(const KeyValues& kv) {
    const std::string type = kv.require("type");
    if (type == "tv1d") {
        Tv1dSpec s;
        s.d = parse_vector(kv.require("d"), "d");
        s.lambda = parse_double(kv.get("lambda").value_or("1"), "lambda");
        return s;
    }
    if (type == "intersection") {
        IntersectionProjSpec s;
        s.d = parse_vector(kv.require("d"), "d");
        const long count = parse_long(kv.require("sets"), "sets");
        for (long i = 1; i <= count; ++i) {
            const std::string prefix = "set" + std::to_string(i) + ".";
            const std::string kind = kv.require(prefix + "kind");
            if (kind == "box") {
                s.sets.emplace_back(BoxSet{parse_vector(kv.require(prefix + "lo"), prefix + "lo"),
                                           parse_vector(kv.require(prefix + "hi"), prefix + "hi")});
            } else if (kind == "halfspace") {
                s.sets.emplace_back(HalfspaceSet{parse_vector(kv.require(prefix + "a"), prefix + "a"),
                                                 parse_double(kv.require(prefix + "beta"), prefix + "beta")});
            } else {
                throw ArgumentError("unknown set kind '" + kind + "'");
            }
        }
        return s;
    }
    if (type == "resource") {
        ResourceAllocSpec s;
        s.alpha = parse_vector(kv.require("alpha"), "alpha");
        s.beta = parse_vector(kv.require("beta"), "beta");
        s.lo = parse_vector(kv.require("lo"), "lo");
        s.hi = parse_vector(kv.require("hi"), "hi");
        s.coupling = parse_matrix(kv.require("coupling"), "coupling");
        s.budget = parse_vector(kv.require("budget"), "budget");
        if (auto v = kv.get("penalty")) s.overrun_penalty = parse_double(*v, "penalty");
        return s;
    }
    if (type == "boxqp") {
        RandomBoxQpSpec s;
        if (auto v = kv.get("seed")) s.seed = static_cast<std::uint64_t>(parse_long(*v, "seed"));
        if (auto v = kv.get("n")) s.n = parse_long(*v, "n");
        if (auto v = kv.get("m")) s.m = parse_long(*v, "m");
        if (auto v = kv.get("sigma")) s.sigma = parse_double(*v, "sigma");
        if (auto v = kv.get("lambda")) s.lambda = parse_double(*v, "lambda");
        if (auto v = kv.get("box_lo")) s.box_lo = parse_double(*v, "box_lo");
        if (auto v = kv.get("box_hi")) s.box_hi = parse_double(*v, "box_hi");
        if (auto v = kv.get("g")) {
            if (*v == "l1") s.g = RandomBoxQpSpec::Regularizer::l1;
            else if (*v == "box") s.g = RandomBoxQpSpec::Regularizer::box;
            else throw ArgumentError("unknown regularizer '" + *v + "'");
        }
        return s;
    }
    throw ArgumentError("unknown problem type '" + type + "'");
}

/// Builtin name or path to a spec file.
inline ProblemSpec resolve_problem(const std::string& name_or_path, std::uint64_t seed) {
    if (is_builtin_problem(name_or_path)) return builtin_problem(name_or_path, seed);
    if (std::filesystem::exists(name_or_path)) return problem_from_keys(KeyValues::load(name_or_path));
    throw ArgumentError("unknown problem '" + name_or_path + "' (not a builtin and no such file)");
}

struct RunConfig {
    std::string problem = "tv1d-toy";
    std::string method = "fdpg";
    std::string schedule = "fista";
    double a = 3.0;
    long horizon = 0;  ///< N of the fixed-horizon schedule; 0 means max_iters
    std::string step = "fixed";
    std::optional<double> fixed_l;  ///< unset: L_F
    std::optional<double> l0;       ///< unset: L_F / 16
    double eta = 2.0;
    std::string y0 = "zero";
    long iters = 100;
    double tol = 0.0;
    std::string certs = "all";
    std::string ref = "auto";
    std::string out;
    std::string svg;
    std::uint64_t seed = kDefaultSeed;
    double bound_scale = 1.0;  ///< test hook: scales every certificate bound
};

inline std::uint64_t seed_from_env(std::uint64_t fallback = kDefaultSeed) {
    if (const char* s = std::getenv("DUALPROX_SEED"); s && *s) return static_cast<std::uint64_t>(parse_long(s, "DUALPROX_SEED"));
    return fallback;
}

template <class T>
bool one_of(const T& v, std::initializer_list<T> options) {
    for (const auto& o : options)
        if (o == v) return true;
    return false;
}

/// Throws ArgumentError on values the solvers would reject or cannot interpret.
inline void validate(const RunConfig& c) {
    if (!one_of<std::string>(c.method, {"dpg", "fdpg", "gfdpg"})) throw ArgumentError("unknown method '" + c.method + "'");
    if (!one_of<std::string>(c.schedule, {"fista", "poly", "fixed_horizon"}))
        throw ArgumentError("unknown schedule '" + c.schedule + "'");
    if (!one_of<std::string>(c.step, {"fixed", "backtrack"})) throw ArgumentError("unknown step rule '" + c.step + "'");
    if (!one_of<std::string>(c.ref, {"auto", "enumerate", "longrun"}))
        throw ArgumentError("unknown reference mode '" + c.ref + "'");
    if (c.iters < 0) throw ArgumentError("iters must be nonnegative");
    if (!(c.tol >= 0.0)) throw ArgumentError("tol must be nonnegative");
    if (c.fixed_l && !(*c.fixed_l > 0.0)) throw ArgumentError("fixed L must be positive");
    if (c.l0 && !(*c.l0 > 0.0)) throw ArgumentError("L0 must be positive");
    if (c.step == "backtrack" && !(c.eta > 1.0)) throw ArgumentError("eta must exceed 1");
    if (c.step == "fixed" && c.l0) throw ArgumentError("L0 given with a fixed step");
    if (c.step == "backtrack" && c.fixed_l) throw ArgumentError("fixed L given with backtracking");
    if (c.schedule == "poly" && !(c.a > 0.0)) throw ArgumentError("schedule parameter a must be positive");
    if (c.horizon < 0) throw ArgumentError("N must be nonnegative");
    if (c.y0.empty()) throw ArgumentError("empty y0");
    if (!(c.bound_scale > 0.0)) throw ArgumentError("bound scale must be positive");
}

/// Sorted `key = value` lines; parse_config(normalized(c)) reproduces c.
inline std::string normalized(const RunConfig& c) {
    KeyValues kv;
    kv.set("problem", c.problem);
    kv.set("method", c.method);
    kv.set("schedule", c.schedule);
    kv.set("a", format_double(c.a));
    kv.set("N", std::to_string(c.horizon));
    kv.set("step", c.step);
    kv.set("fixed_L", c.fixed_l ? format_double(*c.fixed_l) : "auto");
    kv.set("L0", c.l0 ? format_double(*c.l0) : "auto");
    kv.set("eta", format_double(c.eta));
    kv.set("y0", c.y0);
    kv.set("iters", std::to_string(c.iters));
    kv.set("tol", format_double(c.tol));
    kv.set("certs", c.certs);
    kv.set("ref", c.ref);
    kv.set("out", c.out);
    kv.set("svg", c.svg);
    kv.set("seed", std::to_string(c.seed));
    kv.set("bound_scale", format_double(c.bound_scale));
    std::string text;
    for (const auto& [k, v] : kv.entries()) text += k + " = " + v + "\n";
    return text;
}

/// Applies the keys present in kv on top of base.
inline RunConfig apply_keys(RunConfig c, const KeyValues& kv) {
    for (const auto& [k, v] : kv.entries()) {
        if (k == "problem") c.problem = v;
        else if (k == "method") c.method = v;
        else if (k == "schedule") c.schedule = v;
        else if (k == "a") c.a = parse_double(v, k);
        else if (k == "N") c.horizon = parse_long(v, k);
        else if (k == "step") c.step = v;
        else if (k == "fixed_L") c.fixed_l = v == "auto" ? std::nullopt : std::optional<double>(parse_double(v, k));
        else if (k == "L0") c.l0 = v == "auto" ? std::nullopt : std::optional<double>(parse_double(v, k));
        else if (k == "eta") c.eta = parse_double(v, k);
        else if (k == "y0") c.y0 = v;
        else if (k == "iters") c.iters = parse_long(v, k);
        else if (k == "tol") c.tol = parse_double(v, k);
        else if (k == "certs") c.certs = v;
        else if (k == "ref") c.ref = v;
        else if (k == "out") c.out = v;
        else if (k == "svg") c.svg = v;
        else if (k == "seed") c.seed = static_cast<std::uint64_t>(parse_long(v, k));
        else if (k == "bound_scale") c.bound_scale = parse_double(v, k);
        else throw ArgumentError("unknown config key '" + k + "'");
    }
    return c;
}

inline RunConfig parse_config(const std::string& text) {
    RunConfig c = apply_keys(RunConfig{}, KeyValues::parse_text(text));
    validate(c);
    return c;
}

/// Comma-separated `key=value` overrides, e.g. "method=gfdpg,schedule=poly,a=4".
inline KeyValues parse_overrides(const std::string& text) {
    std::string lines;
    for (auto part : split(text, ',')) {
        lines += std::string(part);
        lines += '\n';
    }
    return KeyValues::parse_text(lines);
}

inline Method method_of(const RunConfig& c) {
    if (c.method == "dpg") return Method::dpg;
    if (c.method == "fdpg") return Method::fdpg;
    return Method::gfdpg;
}

inline Schedule schedule_of(const RunConfig& c) {
    if (c.schedule == "poly") return make_schedule(ScheduleKind::poly, {c.a, 0, {}});
    if (c.schedule == "fixed_horizon") return make_schedule(ScheduleKind::fixed_horizon, {3.0, c.horizon > 0 ? c.horizon : c.iters, {}});
    return Schedule::fista();
}

/// Label used in compare output: method, and for gfdpg the schedule.
inline std::string schedule_label(const RunConfig& c) {
    if (c.method != "gfdpg") return "fista";
    if (c.schedule == "poly") return "poly(a=" + format_double(c.a) + ")";
    if (c.schedule == "fixed_horizon") return "fixed_horizon(N=" + std::to_string(c.horizon > 0 ? c.horizon : c.iters) + ")";
    return "fista";
}

inline Vector initial_dual(const RunConfig& c, Index m) {
    if (c.y0 == "zero") return Vector::Zero(m);
    std::ifstream in(c.y0);
    if (!in) throw ArgumentError("cannot open y0 file '" + c.y0 + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    for (auto& ch : text)
        if (ch == '\n' || ch == '\r') ch = ',';
    while (!text.empty() && (text.back() == ',' || text.back() == ' ')) text.pop_back();
    Vector y = parse_vector(text, "y0");
    if (y.size() != m) throw ArgumentError("y0 file has " + std::to_string(y.size()) + " entries, expected " + std::to_string(m));
    return y;
}

inline SolverOptions solver_options(const RunConfig& c, const CompositeProblem& p) {
    SolverOptions o;
    o.method = method_of(c);
    o.schedule = schedule_of(c);
    if (c.step == "backtrack") {
        o.step = StepSizeRule::backtracking(c.l0 ? *c.l0 : std::max(p.lipschitz_dual() / 16.0, 1e-12), c.eta);
    } else {
        o.step = StepSizeRule::fixed(c.fixed_l ? *c.fixed_l : p.lipschitz_dual());
    }
    o.y0 = initial_dual(c, p.dual_dim());
    o.max_iters = c.iters;
    o.pg_tol = c.tol;
    o.certificate_mode = true;
    return o;
}

/// "auto" tries the enumeration oracle and falls back to the long run.
inline ReferenceSolution reference_for(const RunConfig& c, const CompositeProblem& p) {
    if (c.ref == "enumerate") return reference_enumerate(p);
    if (c.ref == "longrun") return reference_longrun(p);
    try {
        return reference_enumerate(p);
    } catch (const CapabilityError&) {
        return reference_longrun(p);
    }
}

}  // namespace dualprox::cli
