#pragma once

// Subcommands of the dualprox executable. Each returns the process exit code.

#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <dualprox/diagnostics.hpp>

#include "run_config.hpp"
#include "svg_plot.hpp"

namespace dualprox::cli {

enum ExitCode : int { kOk = 0, kCertificateFailure = 1, kUsageError = 2, kRuntimeAbort = 3 };

inline const char* kTraceHeader = "k,L,t,T,dual_val,primal_val,pg_norm,step_norm,pd_gap,infeas";

inline double as_double(ExtendedReal v) { return v.is_finite() ? v.value() : kInf; }

inline void write_trace_row(std::ostream& os, const IterateRecord& r) {
    const double pg = r.probe ? r.probe->pg_norm : r.step_norm;
    os << r.k << ',' << format_double(r.step_l) << ',' << format_double(r.t) << ',' << format_double(r.big_t) << ','
       << format_double(r.dual_value) << ',' << format_double(as_double(r.primal_value)) << ',' << format_double(pg) << ','
       << format_double(r.step_norm) << ',' << format_double(as_double(r.pd_gap)) << ','
       << format_double(r.infeasibility) << '\n';
}

inline void write_trace(std::ostream& os, const SolverReport& rep) {
    os << kTraceHeader << '\n';
    for (const auto& r : rep.records) write_trace_row(os, r);
}

/// Runs fn on the file named by path, or on fallback when path is empty.
inline void with_output(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& fn) {
    if (path.empty()) {
        fn(fallback);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ArgumentError("cannot write '" + path + "'");
    fn(f);
}

struct PreparedRun {
    CompositeProblem problem;
    SolverOptions options;
};

inline PreparedRun prepare(const RunConfig& c) {
    validate(c);
    CompositeProblem p = make_instance(resolve_problem(c.problem, c.seed));
    SolverOptions o = solver_options(c, p);
    return {std::move(p), std::move(o)};
}

inline int cmd_run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    std::optional<PreparedRun> run;
    try {
        run.emplace(prepare(c));
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    const SolverReport rep = run_solver(run->problem, run->options);
    try {
        with_output(c.out, out, [&](std::ostream& os) { write_trace(os, rep); });
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    if (rep.termination == Termination::aborted) {
        err << "solver aborted after " << rep.records.size() << " iterations: " << rep.abort_message << '\n';
        return kRuntimeAbort;
    }
    return kOk;
}

inline std::vector<CertificateFamily> selected_families(const std::string& certs) {
    std::vector<CertificateFamily> out;
    if (certs == "all") {
        for (const auto& [name, fam] : certificate_families()) out.push_back(fam);
        return out;
    }
    for (auto part : split(certs, ',')) {
        const auto name = trim(part);
        bool found = false;
        for (const auto& [n, fam] : certificate_families())
            if (n == name) {
                out.push_back(fam);
                found = true;
            }
        if (!found) throw ArgumentError("unknown certificate family '" + std::string(name) + "'");
    }
    return out;
}

inline void write_certificates(std::ostream& os, const Certificates& certs, bool notice_column) {
    os << "bound_id,k,bound,measured,margin,pass" << (notice_column ? ",notice" : "") << '\n';
    for (const auto& c : certs) {
        os << c.bound_id << ',' << c.k << ',';
        if (c.applicable) {
            os << format_double(c.bound) << ',' << format_double(c.measured) << ',' << format_double(c.margin()) << ','
               << (c.pass ? "true" : "false");
        } else {
            os << "NA,NA,NA,NA";
        }
        if (notice_column) os << ",widened-slack";
        os << '\n';
    }
}

inline int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
    std::optional<PreparedRun> run;
    std::vector<CertificateFamily> families;
    ReferenceSolution ref;
    try {
        run.emplace(prepare(c));
        families = selected_families(c.certs);
        ref = reference_for(c, run->problem);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    const SolverReport rep = run_solver(run->problem, run->options);
    if (rep.termination == Termination::aborted) {
        err << "solver aborted: " << rep.abort_message << '\n';
        return kRuntimeAbort;
    }
    CertificateSettings settings;
    settings.bound_scale = c.bound_scale;
    Certificates certs;
    for (auto fam : families) {
        auto part = evaluate_family(fam, ref, rep, settings);
        certs.insert(certs.end(), part.begin(), part.end());
    }
    try {
        with_output(c.out, out, [&](std::ostream& os) { write_certificates(os, certs, ref.low_precision); });
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    const auto summary = summarize(certs);
    err << "reference: " << to_string(ref.provenance) << " (residual " << format_double(ref.residual) << ")\n";
    if (ref.low_precision) err << "notice: low-precision reference, slack widened by 10 x residual\n";
    err << summary.applicable << " applicable, " << summary.failed << " failed, " << summary.not_applicable
        << " not applicable\n";
    if (summary.first_failure) {
        const auto& f = *summary.first_failure;
        err << "first failure: " << f.bound_id << " at k=" << f.k << " measured " << format_double(f.measured)
            << " > bound " << format_double(f.bound) << '\n';
    }
    return summary.all_pass() ? kOk : kCertificateFailure;
}

inline const std::vector<std::string>& compare_metrics() {
    static const std::vector<std::string> m = {"dual_val", "pg_norm", "pg_norm_min", "pd_gap", "step_norm"};
    return m;
}

inline int cmd_compare(const std::vector<RunConfig>& configs, const std::string& out_path, const std::string& svg_path,
                       std::ostream& out, std::ostream& err) {
    if (configs.size() < 2) {
        err << "error: compare needs at least two configurations\n";
        return kUsageError;
    }
    std::optional<CompositeProblem> problem;
    std::vector<SolverOptions> options;
    try {
        for (const auto& c : configs) {
            validate(c);
            if (c.problem != configs.front().problem || c.seed != configs.front().seed)
                throw ArgumentError("configurations use different problems");
        }
        problem.emplace(make_instance(resolve_problem(configs.front().problem, configs.front().seed)));
        for (const auto& c : configs) options.push_back(solver_options(c, *problem));
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }

    const CompositeProblem& shared = *problem;
    std::vector<std::future<SolverReport>> jobs;
    for (const auto& o : options) jobs.push_back(std::async(std::launch::async, [&shared, o] { return run_solver(shared, o); }));
    std::vector<SolverReport> reports;
    for (auto& j : jobs) reports.push_back(j.get());

    bool aborted = false;
    std::vector<Series> plot;
    try {
        with_output(out_path, out, [&](std::ostream& os) {
            os << "method,schedule,k,metric,value\n";
            for (std::size_t i = 0; i < reports.size(); ++i) {
                const auto& rep = reports[i];
                const std::string method = configs[i].method;
                const std::string sched = schedule_label(configs[i]);
                aborted = aborted || rep.termination == Termination::aborted;
                Series s{method + " " + sched, {}, {}};
                double running = kInf;
                for (const auto& r : rep.records) {
                    const double pg = r.probe ? r.probe->pg_norm : r.step_norm;
                    running = std::min(running, pg);
                    const double values[] = {r.dual_value, pg, running, as_double(r.pd_gap), r.step_norm};
                    for (std::size_t m = 0; m < compare_metrics().size(); ++m)
                        os << method << ',' << sched << ',' << r.k << ',' << compare_metrics()[m] << ','
                           << format_double(values[m]) << '\n';
                    s.x.push_back(static_cast<double>(r.k));
                    s.y.push_back(running);
                }
                plot.push_back(std::move(s));
            }
        });
        if (!svg_path.empty()) {
            std::ofstream f(svg_path, std::ios::binary);
            if (!f) throw ArgumentError("cannot write '" + svg_path + "'");
            write_loglog_svg(f, plot, "running-min prox-grad norm, " + configs.front().problem, "min ||p(y_i) - y_i||");
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    if (aborted) {
        err << "at least one solver run aborted\n";
        return kRuntimeAbort;
    }
    return kOk;
}

struct RatesOptions {
    std::string metric = "pg_norm";
    long k_lo = 1;
    long k_hi = std::numeric_limits<long>::max();
    bool envelope = false;
    double offset = 0.0;  ///< subtracted from the metric, e.g. q~(y*) for dual_val
    double floor = 0.0;
};

inline int cmd_rates(const std::vector<std::string>& files, const RatesOptions& opts, std::ostream& out, std::ostream& err) {
    if (files.empty()) {
        err << "error: no trace files given\n";
        return kUsageError;
    }
    std::vector<std::string> lines;
    try {
        for (const auto& file : files) {
            const CsvTable t = read_csv_file(file);
            const auto kcol = t.column("k");
            const auto mcol = t.column(opts.metric);
            if (!kcol) throw ArgumentError(file + ": no 'k' column");
            if (!mcol) throw ArgumentError(file + ": metric '" + opts.metric + "' not in CSV");
            std::vector<long> ks;
            std::vector<double> vs;
            for (const auto& row : t.rows) {
                ks.push_back(parse_long(row[*kcol], "k"));
                vs.push_back(parse_double(row[*mcol], opts.metric) - opts.offset);
            }
            if (opts.envelope) vs = running_min(vs);
            const RateFit fit = fit_rate(ks, vs, opts.metric, opts.k_lo, opts.k_hi, opts.floor);
            if (fit.truncated) err << file << ": " << fit.notice << '\n';
            lines.push_back(file + ',' + opts.metric + ',' + format_double(fit.slope) + ',' + format_double(fit.residual));
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    out << "file,metric,slope,residual\n";
    for (const auto& l : lines) out << l << '\n';
    return kOk;
}

}  // namespace dualprox::cli
