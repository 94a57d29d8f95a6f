// pollwait: mean wait in polling systems, by formula and by simulation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pollwait/config_io.hpp"
#include "pollwait/errors.hpp"
#include "pollwait/experiment.hpp"

namespace {

using namespace pollwait;
using nlohmann::json;

int exit_code_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::PolicyMismatch:
        case ErrorKind::Unsupported:
        case ErrorKind::DimensionMismatch:
            return 3;
        default:
            return 2;
    }
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

void print_kv(const char* key, const std::string& value) {
    std::printf("%-24s %s\n", key, value.c_str());
}

struct Options {
    std::string config_path;
    std::uint64_t seed = 1;
    std::uint64_t jobs = 1'000'000;
    std::uint64_t warmup = 100'000;
    std::size_t reps = 0;
    std::string axis;
    std::vector<double> values;
    std::string format = "table";
    std::string trace_path;
    bool allow_unequal = false;

    RunOptions run_options() const {
        RunOptions r;
        r.seed = seed;
        r.total_jobs = jobs;
        r.warmup_jobs = warmup;
        r.keep_trace = !trace_path.empty();
        r.allow_unequal_means = allow_unequal;
        return r;
    }
};

json sim_report_to_json(const SimReport& rep) {
    return json::parse(to_json_text(rep));
}

int cmd_analytic(const Options& opt) {
    const SystemConfig config = load_config_file(opt.config_path);
    const AnalyticReport report =
        analyze(config, {.allow_unequal_means = opt.allow_unequal});

    if (opt.format == "json") {
        std::printf("%s\n", to_json_text(report).c_str());
    } else if (opt.format == "csv") {
        std::printf("residual,pi,mean_m,mean_p,mean_w,rho,lambda_total,n_queues\n");
        std::printf("%s,%s,%s,%s,%s,%s,%s,%zu\n", fmt(report.residual).c_str(),
                    fmt(report.big_pi).c_str(), fmt(report.mean_m()).c_str(),
                    fmt(report.mean_p).c_str(), fmt(report.mean_w).c_str(),
                    fmt(report.profile.rho).c_str(),
                    fmt(report.profile.lambda_total).c_str(),
                    report.profile.n_queues);
    } else {
        print_kv("n_queues", std::to_string(report.profile.n_queues));
        print_kv("lambda_total", fmt(report.profile.lambda_total));
        print_kv("rho", fmt(report.profile.rho));
        print_kv("mean_s", fmt(report.profile.mean_s));
        print_kv("second_moment_s", fmt(report.profile.second_moment_s));
        print_kv("residual", fmt(report.residual));
        print_kv("pi (mean_m)", fmt(report.big_pi));
        print_kv("mean_p", fmt(report.mean_p));
        print_kv("mean_w", fmt(report.mean_w));
        if (opt.allow_unequal)
            std::printf("note: unequal-means check bypassed; the formula "
                        "assumes one common mean\n");
    }
    return 0;
}

void write_trace_if_requested(const Options& opt,
                              const std::vector<RunResult>& runs) {
    if (opt.trace_path.empty()) return;
    std::ofstream out(opt.trace_path);
    if (!out)
        throw Error(ErrorKind::ConfigParse,
                    "cannot write trace file " + opt.trace_path);
    write_trace_csv(out, runs.front().trace);
}

int cmd_simulate(const Options& opt) {
    const SystemConfig config = load_config_file(opt.config_path);
    const std::size_t reps = opt.reps == 0 ? 1 : opt.reps;
    const std::vector<RunResult> runs =
        run_replications(config, opt.run_options(), reps);
    write_trace_if_requested(opt, runs);

    if (reps == 1) {
        const SimReport& rep = runs.front().report;
        if (opt.format == "json") {
            std::printf("%s\n", to_json_text(rep).c_str());
        } else if (opt.format == "csv") {
            std::printf(
                "seed,jobs_completed,mean_w,ci_w,mean_m,ci_m,mean_p,ci_p,"
                "time_avg_n,arrival_avg_n,frac_serving,frac_moving\n");
            std::printf("%llu,%llu,%s,%s,%s,%s,%s,%s,%s,%s,%s,%s\n",
                        static_cast<unsigned long long>(rep.seed),
                        static_cast<unsigned long long>(rep.jobs_completed),
                        fmt(rep.mean_w).c_str(), fmt(rep.ci_w).c_str(),
                        fmt(rep.mean_m).c_str(), fmt(rep.ci_m).c_str(),
                        fmt(rep.mean_p).c_str(), fmt(rep.ci_p).c_str(),
                        fmt(rep.time_avg_n).c_str(),
                        fmt(rep.arrival_avg_n).c_str(),
                        fmt(rep.frac_serving).c_str(),
                        fmt(rep.frac_moving).c_str());
        } else {
            print_kv("seed", std::to_string(rep.seed));
            print_kv("jobs_completed", std::to_string(rep.jobs_completed));
            print_kv("warmup_discarded", std::to_string(rep.warmup_jobs_discarded));
            print_kv("mean_w", fmt(rep.mean_w) + " +/- " + fmt(rep.ci_w));
            print_kv("mean_m", fmt(rep.mean_m) + " +/- " + fmt(rep.ci_m));
            print_kv("mean_p", fmt(rep.mean_p) + " +/- " + fmt(rep.ci_p));
            print_kv("time_avg_n", fmt(rep.time_avg_n));
            print_kv("arrival_avg_n", fmt(rep.arrival_avg_n));
            print_kv("frac_serving", fmt(rep.frac_serving));
            print_kv("frac_moving", fmt(rep.frac_moving));
            print_kv("window_time", fmt(rep.window_time));
            for (std::size_t q = 0; q < rep.per_queue_mean_w.size(); ++q)
                print_kv(("mean_w queue " + std::to_string(q + 1)).c_str(),
                         fmt(rep.per_queue_mean_w[q]));
        }
        return 0;
    }

    const BatchMeansCI pooled_w = pool(runs, PoolSeries::Wait);
    if (opt.format == "json") {
        json doc;
        doc["pooled"] = {{"mean_w", pooled_w.point},
                         {"ci_w", pooled_w.half_width_95},
                         {"n_batches", pooled_w.n_batches}};
        json arr = json::array();
        for (const RunResult& run : runs)
            arr.push_back(sim_report_to_json(run.report));
        doc["replications"] = arr;
        std::printf("%s\n", doc.dump().c_str());
    } else if (opt.format == "csv") {
        std::printf("rep,seed,mean_w,ci_w,mean_m,mean_p,frac_serving\n");
        for (std::size_t r = 0; r < runs.size(); ++r) {
            const SimReport& rep = runs[r].report;
            std::printf("%zu,%llu,%s,%s,%s,%s,%s\n", r + 1,
                        static_cast<unsigned long long>(rep.seed),
                        fmt(rep.mean_w).c_str(), fmt(rep.ci_w).c_str(),
                        fmt(rep.mean_m).c_str(), fmt(rep.mean_p).c_str(),
                        fmt(rep.frac_serving).c_str());
        }
        std::printf("pooled,,%s,%s,,,\n", fmt(pooled_w.point).c_str(),
                    fmt(pooled_w.half_width_95).c_str());
    } else {
        for (std::size_t r = 0; r < runs.size(); ++r) {
            const SimReport& rep = runs[r].report;
            std::printf("rep %zu (seed %llu): mean_w %s +/- %s\n", r + 1,
                        static_cast<unsigned long long>(rep.seed),
                        fmt(rep.mean_w).c_str(), fmt(rep.ci_w).c_str());
        }
        print_kv("pooled mean_w",
                 fmt(pooled_w.point) + " +/- " + fmt(pooled_w.half_width_95));
    }
    return 0;
}

int cmd_compare(const Options& opt) {
    const SystemConfig config = load_config_file(opt.config_path);
    const std::size_t reps = opt.reps == 0 ? 5 : opt.reps;
    if (reps < 2)
        throw Error(ErrorKind::ConfigParse, "compare needs --reps >= 2");

    const CompareOutcome out = compare(config, opt.run_options(), reps);
    const char* verdict = out.pass ? "PASS" : "FAIL";

    if (opt.format == "json") {
        json doc;
        doc["analytic"] = json::parse(to_json_text(out.analytic));
        doc["sim"] = {{"mean_w", out.pooled_w.point},
                      {"ci_w", out.pooled_w.half_width_95},
                      {"mean_m", out.pooled_m.point},
                      {"mean_p", out.pooled_p.point},
                      {"ci_p", out.pooled_p.half_width_95},
                      {"replications", out.replications},
                      {"jobs_per_rep", out.jobs_per_rep}};
        doc["rel_err"] = out.rel_err;
        doc["ci_contains"] = out.ci_contains;
        doc["verdict"] = verdict;
        doc["diagnostics"] = {{"predicted_p", out.predicted_p},
                              {"p_gap", out.p_gap},
                              {"p_identity_ok", out.p_identity_ok},
                              {"time_avg_n", out.time_avg_n},
                              {"arrival_avg_n", out.arrival_avg_n},
                              {"pasta_gap", out.pasta_gap},
                              {"pasta_joint_hw", out.pasta_joint_hw},
                              {"pasta_ok", out.pasta_ok},
                              {"little_rel_err", out.little_rel_err}};
        doc["unequal_means_bypass"] = opt.allow_unequal;
        std::printf("%s\n", doc.dump().c_str());
    } else if (opt.format == "csv") {
        std::printf(
            "analytic_w,sim_w,ci_half_width,rel_err,ci_contains,verdict,"
            "p_identity_ok,pasta_ok,little_rel_err\n");
        std::printf("%s,%s,%s,%s,%d,%s,%d,%d,%s\n",
                    fmt(out.analytic.mean_w).c_str(),
                    fmt(out.pooled_w.point).c_str(),
                    fmt(out.pooled_w.half_width_95).c_str(),
                    fmt(out.rel_err).c_str(), out.ci_contains ? 1 : 0, verdict,
                    out.p_identity_ok ? 1 : 0, out.pasta_ok ? 1 : 0,
                    fmt(out.little_rel_err).c_str());
    } else {
        print_kv("analytic mean_w", fmt(out.analytic.mean_w));
        print_kv("simulated mean_w", fmt(out.pooled_w.point) + " +/- " +
                                         fmt(out.pooled_w.half_width_95));
        print_kv("replications",
                 std::to_string(out.replications) + " x " +
                     std::to_string(out.jobs_per_rep) + " jobs");
        print_kv("rel_err", fmt(out.rel_err));
        print_kv("analytic in CI", out.ci_contains ? "yes" : "no");
        print_kv("verdict", verdict);
        std::printf("\nserving-wait identity: predicted %s, measured %s +/- %s "
                    "(%s)\n",
                    fmt(out.predicted_p).c_str(), fmt(out.pooled_p.point).c_str(),
                    fmt(out.pooled_p.half_width_95).c_str(),
                    out.p_identity_ok ? "ok" : "off");
        std::printf("arrival vs time average: %s vs %s, gap %s, joint hw %s "
                    "(%s)\n",
                    fmt(out.arrival_avg_n).c_str(), fmt(out.time_avg_n).c_str(),
                    fmt(out.pasta_gap).c_str(), fmt(out.pasta_joint_hw).c_str(),
                    out.pasta_ok ? "ok" : "off");
        std::printf("little's law rel_err: %s\n", fmt(out.little_rel_err).c_str());
        if (opt.allow_unequal)
            std::printf("note: unequal-means check bypassed; the formula "
                        "assumes one common mean\n");
    }
    return out.pass ? 0 : 4;
}

int cmd_sweep(const Options& opt) {
    const SystemConfig base = load_config_file(opt.config_path);
    if (opt.values.empty())
        throw Error(ErrorKind::ConfigParse, "sweep needs a nonempty --values list");

    SweepAxis axis;
    if (opt.axis == "alpha") axis = SweepAxis::Alpha;
    else if (opt.axis == "rho_scale") axis = SweepAxis::RhoScale;
    else if (opt.axis == "n_queues") axis = SweepAxis::NQueues;
    else
        throw Error(ErrorKind::ConfigParse,
                    "axis must be alpha, rho_scale, or n_queues");

    for (double v : opt.values) {
        if (!std::isfinite(v))
            throw Error(ErrorKind::ConfigParse, "sweep values must be finite");
        if (axis == SweepAxis::NQueues &&
            (v < 1.0 || v != static_cast<double>(static_cast<std::size_t>(v))))
            throw Error(ErrorKind::ConfigParse,
                        "n_queues values must be whole numbers >= 1");
    }
    if (axis == SweepAxis::RhoScale) {
        const LoadProfile profile =
            validate(base, {.allow_unequal_means = opt.allow_unequal});
        for (double v : opt.values)
            if (v * profile.rho >= 1.0)
                throw Error(ErrorKind::ConfigParse,
                            "rho_scale " + fmt(v) + " pushes rho to " +
                                fmt(v * profile.rho) + "; must stay below 1");
    }

    const std::size_t reps = opt.reps == 0 ? 1 : opt.reps;
    const std::vector<SweepPoint> points =
        sweep(base, axis, opt.values, opt.run_options(), reps);

    if (opt.format == "json") {
        json arr = json::array();
        for (const SweepPoint& pt : points) {
            json row = {{"axis", opt.axis},      {"value", pt.value},
                        {"analytic_w", pt.analytic_w}, {"sim_w", pt.sim_w},
                        {"ci_half_width", pt.ci_half_width},
                        {"rel_err", pt.rel_err},
                        {"verdict", pt.error.empty()
                                        ? (pt.pass ? "PASS" : "FAIL")
                                        : "ERROR"}};
            if (!pt.error.empty()) row["error"] = pt.error;
            arr.push_back(row);
        }
        std::printf("%s\n", arr.dump().c_str());
    } else {
        // table and csv share the row layout; a sweep is a series by nature
        std::printf("axis,value,analytic_w,sim_w,ci_half_width,rel_err,verdict,"
                    "error\n");
        for (const SweepPoint& pt : points) {
            const std::string verdict =
                pt.error.empty() ? (pt.pass ? "PASS" : "FAIL") : "ERROR";
            std::printf("%s,%s,%s,%s,%s,%s,%s,%s\n", opt.axis.c_str(),
                        fmt(pt.value).c_str(), fmt(pt.analytic_w).c_str(),
                        fmt(pt.sim_w).c_str(), fmt(pt.ci_half_width).c_str(),
                        fmt(pt.rel_err).c_str(), verdict.c_str(),
                        pt.error.c_str());
        }
    }

    for (const SweepPoint& pt : points)
        if (!pt.error.empty() || !pt.pass) return 4;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mean wait in polling systems: formula vs simulation"};
    app.require_subcommand(1);

    Options opt;

    auto add_common = [&](CLI::App* sub, bool with_run, bool with_trace) {
        sub->add_option("--config", opt.config_path,
                        "JSON system description")
            ->required();
        sub->add_option("--format", opt.format, "table, csv, or json")
            ->check(CLI::IsMember({"table", "csv", "json"}));
        sub->add_flag("--allow-unequal-means", opt.allow_unequal,
                      "bypass the equal service means check");
        if (with_run) {
            sub->add_option("--seed", opt.seed, "base random seed");
            sub->add_option("--jobs", opt.jobs,
                            "service starts per replication");
            sub->add_option("--warmup", opt.warmup,
                            "service starts discarded up front");
            sub->add_option("--reps", opt.reps, "independent replications");
        }
        if (with_trace)
            sub->add_option("--trace", opt.trace_path,
                            "write per-job CSV records here");
    };

    CLI::App* analytic = app.add_subcommand("analytic", "formula only");
    add_common(analytic, false, false);
    CLI::App* simulate = app.add_subcommand("simulate", "simulation only");
    add_common(simulate, true, true);
    CLI::App* cmp = app.add_subcommand("compare", "formula vs simulation");
    add_common(cmp, true, false);
    CLI::App* swp = app.add_subcommand("sweep", "series over one parameter");
    add_common(swp, true, false);
    swp->add_option("--axis", opt.axis, "alpha, rho_scale, or n_queues")
        ->required();
    swp->add_option("--values", opt.values, "comma-separated axis values")
        ->required()
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(analytic)) return cmd_analytic(opt);
        if (app.got_subcommand(simulate)) return cmd_simulate(opt);
        if (app.got_subcommand(cmp)) return cmd_compare(opt);
        return cmd_sweep(opt);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
