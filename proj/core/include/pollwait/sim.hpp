#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "pollwait/model.hpp"
#include "pollwait/stats.hpp"

namespace pollwait {

struct RunOptions {
    std::uint64_t seed = 1;
    std::uint64_t total_jobs = 1'000'000;
    std::uint64_t warmup_jobs = 100'000;
    std::size_t n_batches = 32;
    bool keep_trace = false;
    bool allow_unequal_means = false;
};

struct JobRecord {
    std::uint32_t queue = 0;  // 0-based
    double arrived_at = 0.0;
    double service_begun_at = 0.0;
    double wait = 0.0;
    double wait_moving = 0.0;
    double wait_serving = 0.0;
    std::uint64_t n_seen = 0;  // waiting jobs at arrival, excluding itself
};

struct SimReport {
    std::uint64_t jobs_completed = 0;  // post-warmup jobs measured
    double mean_w = 0.0, ci_w = 0.0;
    double mean_m = 0.0, ci_m = 0.0;
    double mean_p = 0.0, ci_p = 0.0;
    std::vector<double> per_queue_mean_w;
    double time_avg_n = 0.0;     // waiting jobs, time average over the window
    double arrival_avg_n = 0.0;  // mean n_seen over window arrivals
    double frac_serving = 0.0;
    double frac_moving = 0.0;
    double window_time = 0.0;
    std::uint64_t warmup_jobs_discarded = 0;
    std::uint64_t seed = 0;
};

// Full result of one replication: the report plus everything needed to pool
// replications and run diagnostics.
struct RunResult {
    SimReport report;
    BatchMeansCI ci_w, ci_m, ci_p;
    std::vector<double> batch_time_avg_n;
    std::vector<double> batch_arrival_avg_n;
    std::vector<double> batch_frac_serving;
    std::vector<JobRecord> trace;  // filled when keep_trace

    // Conservation counters over the whole run including warmup.
    std::uint64_t arrivals_generated = 0;
    std::uint64_t services_begun = 0;
    std::uint64_t waiting_at_end = 0;
};

// Simulates until total_jobs services have begun; the first warmup_jobs are
// discarded and statistics cover the rest. Deterministic for fixed inputs.
RunResult run_full(const SystemConfig& config, const RunOptions& opts);

SimReport run(const SystemConfig& config, std::uint64_t seed,
              std::uint64_t total_jobs, std::uint64_t warmup_jobs);

// Replaces the Poisson streams with a fixed arrival list (queue indices
// 0-based); runs until every arrival has begun service unless opts caps it.
struct ScriptedArrival {
    double at = 0.0;
    std::size_t queue = 0;
};

RunResult run_scripted(const SystemConfig& config,
                       const std::vector<ScriptedArrival>& arrivals,
                       RunOptions opts);

// CSV with header queue,arrived_at,service_begun_at,wait,wait_moving,
// wait_serving,n_seen; queue 1-based, times with 9 decimals.
void write_trace_csv(std::ostream& out, const std::vector<JobRecord>& trace);

// First `hops` patrol destinations from a cold start at the route's first
// stop, using the same seeded draw stream a run with this seed would use.
std::vector<std::size_t> patrol_preview(const SystemConfig& config,
                                        std::size_t hops, std::uint64_t seed);

} // namespace pollwait
