// Acceptance gate: every criterion prints one PASS/FAIL line; the process
// exits with the number of failures. Tolerances live here, not in flags.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "pollwait/analytic.hpp"
#include "pollwait/experiment.hpp"
#include "pollwait/rng.hpp"

using namespace pollwait;

namespace {

int g_failures = 0;

void report(const char* id, bool ok, const std::string& detail) {
    std::printf("%s %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    if (!ok) ++g_failures;
}

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

SystemConfig symmetric(std::size_t n, double lambda_each, ServiceDistribution s,
                       double alpha, Policy policy = Policy::Exhaustive) {
    SystemConfig c;
    c.alpha = alpha;
    for (std::size_t i = 0; i < n; ++i)
        c.queues.push_back({lambda_each, s, Discipline::Fcfs, policy});
    return c;
}

struct CmdResult {
    int exit_code = -1;
    std::string out;
};

CmdResult run_cmd(const std::string& args) {
    const std::string cmd = std::string(POLLWAIT_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    CmdResult r;
    if (!pipe) return r;
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe))
        r.out.append(buf, got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string write_file(const std::string& name, const std::string& text) {
    const auto dir = std::filesystem::temp_directory_path() /
                     ("pollwait_acc_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::ofstream out(path);
    out << text;
    return path.string();
}

// The benchmark system: four symmetric queues, unit deterministic service,
// quarter-time hops, circular exhaustive. Formula value 1.375.
SystemConfig benchmark_config() {
    return symmetric(4, 0.125, Deterministic{1.0}, 0.25);
}

const char* kBenchmarkJson = R"({
  "alpha": 0.25, "order": "circular",
  "queues": [
    {"lambda": 0.125, "service": {"type": "deterministic", "value": 1.0}},
    {"lambda": 0.125, "service": {"type": "deterministic", "value": 1.0}},
    {"lambda": 0.125, "service": {"type": "deterministic", "value": 1.0}},
    {"lambda": 0.125, "service": {"type": "deterministic", "value": 1.0}}
  ]})";

void a1_pk_reduction() {
    const std::vector<ServiceDistribution> dists = {
        Deterministic{1.0}, Exponential{1.0}, Uniform{0.0, 2.0},
        Hyperexp2{0.5, 0.5, 1.5}};
    double worst = 0.0;
    for (const ServiceDistribution& s : dists) {
        const SystemConfig c = symmetric(1, 0.5, s, 0.0);
        const double rho = 0.5 * mean(s);
        const double pk = 0.5 * second_moment(s) / (2.0 * (1.0 - rho));
        worst = std::max(worst, std::abs(analyze(c).mean_w - pk));
    }
    report("A1", worst < 1e-12,
           "M/G/1 reduction, worst gap " + num(worst) + " (< 1e-12)");
}

// Shared by A2, A4, A5: five seeded million-job replications.
std::vector<RunResult> a2_runs() {
    RunOptions o;
    o.seed = 1;
    o.total_jobs = 1'000'000;
    o.warmup_jobs = 100'000;
    return run_replications(benchmark_config(), o, 5);
}

void a2_symmetric(const std::vector<RunResult>& runs, double analytic_w) {
    const BatchMeansCI pooled = pool(runs, PoolSeries::Wait);
    const double rel = std::abs(pooled.point - analytic_w) / analytic_w;
    const bool ok = pooled.contains(analytic_w) && rel < 0.01;
    report("A2", ok,
           "formula " + num(analytic_w) + " vs pooled " + num(pooled.point) +
               " +/- " + num(pooled.half_width_95) + ", rel " + num(rel) +
               " (in CI and < 1%)");
}

void a4_serving_identity(const std::vector<RunResult>& runs,
                         const AnalyticReport& an) {
    const BatchMeansCI w = pool(runs, PoolSeries::Wait);
    const BatchMeansCI p = pool(runs, PoolSeries::WaitServing);
    const double rho = an.profile.rho;
    const double predicted = rho * an.residual + rho * w.point;
    const bool ok = std::abs(p.point - predicted) <= p.half_width_95;
    report("A4", ok,
           "serving wait " + num(p.point) + " vs rho*(residual + W) = " +
               num(predicted) + ", hw " + num(p.half_width_95));
}

void a5_pasta_little(const std::vector<RunResult>& runs,
                     const AnalyticReport& an) {
    const BatchMeansCI w = pool(runs, PoolSeries::Wait);
    const BatchMeansCI tn = pool(runs, PoolSeries::TimeAvgN);
    const BatchMeansCI anw = pool(runs, PoolSeries::ArrivalAvgN);
    const double gap = std::abs(anw.point - tn.point);
    const double joint = std::hypot(tn.half_width_95, anw.half_width_95);
    const double little =
        std::abs(tn.point - an.profile.lambda_total * w.point) / tn.point;
    const bool ok = gap <= joint && little < 0.01;
    report("A5", ok,
           "arrival vs time avg gap " + num(gap) + " (joint hw " + num(joint) +
               "), little rel " + num(little) + " (< 1%)");
}

void a3_form_equivalence() {
    RandomStream rng(substream_seed(2024, 0));
    double worst = 0.0;
    int made = 0;
    while (made < 1000) {
        const std::size_t n = 1 + rng.next_index(16);
        const double mean_s = 0.25 + 2.0 * rng.next_unit();
        const double rho = 0.05 + 0.89 * rng.next_unit();
        std::vector<double> share(n);
        double total = 0.0;
        for (double& s : share) {
            s = 0.05 + rng.next_unit();
            total += s;
        }
        SystemConfig c;
        c.alpha = 2.0 * rng.next_unit();
        for (std::size_t i = 0; i < n; ++i) {
            ServiceDistribution s;
            switch (rng.next_index(4)) {
                case 0: s = Deterministic{mean_s}; break;
                case 1: s = Exponential{mean_s}; break;
                case 2: s = Uniform{0.0, 2.0 * mean_s}; break;
                default: {
                    const double p = 0.2 + 0.6 * rng.next_unit();
                    const double m1 = mean_s * (0.3 + 0.4 * rng.next_unit());
                    s = Hyperexp2{p, m1, (mean_s - p * m1) / (1.0 - p)};
                    break;
                }
            }
            c.queues.push_back({rho * (share[i] / total) / mean_s, s,
                                Discipline::Fcfs, Policy::Exhaustive});
        }
        const LoadProfile profile = validate(c);
        const double closed = moving_term_closed(c, profile);
        const double general =
            moving_term_general(profile, switch_matrix(c), c.alpha);
        worst = std::max(worst, std::abs(closed - general));
        ++made;
    }
    report("A3", worst < 1e-10,
           "closed vs table over 1000 systems, worst gap " + num(worst) +
               " (< 1e-10)");
}

void a6_gated() {
    const SystemConfig c =
        symmetric(4, 0.125, Deterministic{1.0}, 0.25, Policy::Gated);
    const AnalyticReport an = analyze(c);
    RunOptions o;
    o.seed = 1;
    o.total_jobs = 1'000'000;
    o.warmup_jobs = 100'000;
    const std::vector<RunResult> runs = run_replications(c, o, 5);
    const BatchMeansCI pooled = pool(runs, PoolSeries::Wait);
    const double rel = std::abs(pooled.point - an.mean_w) / an.mean_w;
    const bool ok = pooled.contains(an.mean_w) && rel < 0.02;
    report("A6", ok,
           "gated formula " + num(an.mean_w) + " vs pooled " +
               num(pooled.point) + " +/- " + num(pooled.half_width_95) +
               ", rel " + num(rel) + " (in CI and < 2%)");
}

void a7_zero_load() {
    const SystemConfig c = symmetric(2, 1e-3, Exponential{1.0}, 0.5);
    const SimReport r = run(c, 7, 100'000, 10'000);
    const double rel = std::abs(r.mean_w - 0.5) / 0.5;
    report("A7", rel < 0.02,
           "near-empty route: wait " + num(r.mean_w) + " vs N*alpha/2 = 0.5, rel " +
               num(rel) + " (< 2%)");
}

void a8_single_queue_patrol() {
    const SystemConfig c = symmetric(1, 0.5, Exponential{1.0}, 1.0);
    const AnalyticReport an = analyze(c);
    const bool exact = std::abs(an.mean_w - 1.5) < 1e-12;
    RunOptions o;
    o.seed = 8;
    o.total_jobs = 1'000'000;
    o.warmup_jobs = 100'000;
    const std::vector<RunResult> runs = run_replications(c, o, 4);
    const BatchMeansCI pooled = pool(runs, PoolSeries::Wait);
    const bool ok = exact && pooled.contains(an.mean_w);
    report("A8", ok,
           "formula " + num(an.mean_w) + " (= 1.5) vs pooled " +
               num(pooled.point) + " +/- " + num(pooled.half_width_95));
}

void a9_asymmetric() {
    SystemConfig c;
    c.alpha = 0.25;
    for (double lam : {0.35, 0.05, 0.05, 0.05})
        c.queues.push_back({lam, Exponential{1.0}, Discipline::Fcfs,
                            Policy::Exhaustive});
    const AnalyticReport an = analyze(c);
    RunOptions o;
    o.seed = 1;
    o.total_jobs = 1'000'000;
    o.warmup_jobs = 100'000;
    const std::vector<RunResult> runs = run_replications(c, o, 5);
    const BatchMeansCI pooled = pool(runs, PoolSeries::Wait);
    const double rel = std::abs(pooled.point - an.mean_w) / an.mean_w;
    report("A9", rel < 0.05,
           "asymmetric load: formula " + num(an.mean_w) + " vs pooled " +
               num(pooled.point) + ", rel " + num(rel) +
               " (< 5%; measured value recorded in README)");
}

void a10_negative_control() {
    const std::string cfg = write_file("unequal.json", R"({
      "alpha": 0.25, "order": "circular",
      "queues": [
        {"lambda": 0.3, "service": {"type": "deterministic", "value": 0.5}},
        {"lambda": 0.3, "service": {"type": "deterministic", "value": 1.5}}
      ]})");
    const CmdResult strict = run_cmd("compare --config " + cfg + " --jobs 50000");
    const CmdResult bypass =
        run_cmd("compare --config " + cfg +
                " --jobs 400000 --reps 4 --seed 1 --allow-unequal-means");
    const bool ok = strict.exit_code == 2 && bypass.exit_code == 4 &&
                    bypass.out.find("FAIL") != std::string::npos;
    report("A10", ok,
           "unequal means: strict exit " + std::to_string(strict.exit_code) +
               " (want 2), bypass exit " + std::to_string(bypass.exit_code) +
               " (want 4) with FAIL printed");
}

void a11_determinism() {
    const std::string cfg = write_file("benchmark.json", kBenchmarkJson);
    const std::string args = "compare --config " + cfg +
                             " --jobs 1000000 --warmup 100000 --reps 5 --seed 1"
                             " --format json";
    const CmdResult a = run_cmd(args);
    const CmdResult b = run_cmd(args);
    const bool ok = a.exit_code == 0 && b.exit_code == 0 && !a.out.empty() &&
                    a.out == b.out;
    report("A11", ok,
           "two seeded runs, " + std::to_string(a.out.size()) +
               " bytes each, byte-identical " + (a.out == b.out ? "yes" : "no"));
}

} // namespace

int main() {
    a1_pk_reduction();

    const AnalyticReport benchmark_report = analyze(benchmark_config());
    const std::vector<RunResult> runs = a2_runs();
    a2_symmetric(runs, benchmark_report.mean_w);
    a3_form_equivalence();
    a4_serving_identity(runs, benchmark_report);
    a5_pasta_little(runs, benchmark_report);
    a6_gated();
    a7_zero_load();
    a8_single_queue_patrol();
    a9_asymmetric();
    a10_negative_control();
    a11_determinism();

    if (g_failures == 0) std::printf("all acceptance criteria hold\n");
    return g_failures;
}
