#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pollwait/analytic.hpp"
#include "pollwait/sim.hpp"

namespace pollwait {

// Independent replications with seeds base_seed, base_seed + 1, ...; runs
// execute in parallel but the returned order is by replication index.
std::vector<RunResult> run_replications(const SystemConfig& config,
                                        const RunOptions& base_opts,
                                        std::size_t replications);

// Concatenates per-replication batch means into one interval. Selector picks
// which batch series to pool.
enum class PoolSeries { Wait, WaitMoving, WaitServing, TimeAvgN, ArrivalAvgN,
                        FracServing };

BatchMeansCI pool(const std::vector<RunResult>& runs, PoolSeries series);

struct CompareOutcome {
    AnalyticReport analytic;
    BatchMeansCI pooled_w, pooled_m, pooled_p;
    double rel_err = 0.0;        // |analytic - pooled| / analytic
    bool ci_contains = false;    // analytic mean_w inside pooled CI
    bool rel_ok = false;         // rel_err below rel_tol
    bool pass = false;           // ci_contains || rel_ok

    // Diagnostics: serving-wait identity and sampling checks.
    double predicted_p = 0.0;    // rho * residual + rho * pooled mean wait
    double p_gap = 0.0;          // |pooled_p - predicted_p|
    bool p_identity_ok = false;  // p_gap within pooled_p half-width
    double pasta_gap = 0.0;      // |arrival_avg_n - time_avg_n| pooled
    double pasta_joint_hw = 0.0;
    bool pasta_ok = false;
    double little_rel_err = 0.0; // |time_avg_n - lambda * mean_w| relative
    double time_avg_n = 0.0;
    double arrival_avg_n = 0.0;

    std::uint64_t jobs_per_rep = 0;
    std::size_t replications = 0;
};

inline constexpr double kCompareRelTol = 0.02;

// Runs the formula and `replications` seeded simulations, pools them, and
// applies the agreement rule: analytic inside the pooled 95% CI or relative
// error under rel_tol, whichever is looser.
CompareOutcome compare(const SystemConfig& config, const RunOptions& base_opts,
                       std::size_t replications,
                       double rel_tol = kCompareRelTol);

struct SweepPoint {
    double value = 0.0;
    std::string error;           // empty when the point ran
    double analytic_w = 0.0;
    double sim_w = 0.0;
    double ci_half_width = 0.0;
    double rel_err = 0.0;
    bool pass = false;
};

enum class SweepAxis { Alpha, RhoScale, NQueues };

// Applies one axis value to a base config. NQueues rebuilds a symmetric
// system of copies of queue 1, splitting the base total arrival rate evenly.
SystemConfig apply_axis(const SystemConfig& base, SweepAxis axis, double value);

std::vector<SweepPoint> sweep(const SystemConfig& base, SweepAxis axis,
                              const std::vector<double>& values,
                              const RunOptions& base_opts,
                              std::size_t replications);

} // namespace pollwait
