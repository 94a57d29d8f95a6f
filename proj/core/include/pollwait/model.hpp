#pragma once

#include <cstddef>
#include <vector>

#include "pollwait/dists.hpp"

namespace pollwait {

enum class Discipline { Fcfs, Lcfs };
enum class Policy { Exhaustive, Gated };
enum class PollingOrder { Circular, Elevator, RandomNext, Explicit };

struct QueueSpec {
    double lambda = 0.0;
    ServiceDistribution service = Exponential{1.0};
    Discipline discipline = Discipline::Fcfs;
    Policy policy = Policy::Exhaustive;
};

struct SystemConfig {
    std::vector<QueueSpec> queues;
    double alpha = 0.0;
    PollingOrder order = PollingOrder::Circular;
    // Visit sequence for Explicit, 0-based queue indices, one full period.
    std::vector<std::size_t> explicit_order;
};

struct LoadProfile {
    std::size_t n_queues = 0;
    double lambda_total = 0.0;
    std::vector<double> rho_i;     // lambda_i * E[S_i]
    double rho = 0.0;              // sum of rho_i
    double mean_s = 0.0;           // E[S], arrival-weighted mixture
    double second_moment_s = 0.0;  // E[S^2], arrival-weighted mixture
};

struct ValidateOptions {
    bool allow_unequal_means = false;
};

// Relative gap allowed between per-queue mean service times.
inline constexpr double kEqualMeansRelTol = 1e-9;

// Checks parameters, stability, and the equal-means requirement, then
// aggregates the load profile. Throws Error on any violation.
LoadProfile validate(const SystemConfig& config, const ValidateOptions& opts = {});

// Arrival-weighted (E[S], E[S^2]) over loaded queues.
std::pair<double, double> aggregate_moments(const SystemConfig& config);

const char* to_string(Discipline d);
const char* to_string(Policy p);
const char* to_string(PollingOrder o);

} // namespace pollwait
