#pragma once

#include <cstddef>
#include <vector>

#include "pollwait/model.hpp"

namespace pollwait {

// Travel-time table between server states and target queues. States equal
// the queues for circular and random orders; the elevator needs (queue,
// direction) pairs, 2N-2 of them, down-states appended after up-states.
struct SwitchMatrix {
    std::size_t n_queues = 0;
    std::vector<std::vector<double>> pi;  // states x n_queues, times
    std::vector<double> state_weights;    // P(serving in state s | serving)
    double cycle_hops = 0.0;              // expected hops per empty-system scan
    std::vector<std::size_t> state_queue; // queue index behind each state
};

struct AnalyticReport {
    double residual = 0.0;  // E[S^2] / (2 E[S])
    double big_pi = 0.0;    // mean wait spent behind a moving server, E[M]
    double mean_p = 0.0;    // mean wait spent behind a serving server, E[P]
    double mean_w = 0.0;    // mean_p + big_pi
    LoadProfile profile;

    double mean_m() const { return big_pi; }
};

// E[S^2] / (2 E[S]): expected remaining work on the job in service as seen
// at a random instant.
double residual_term(const LoadProfile& profile);

// Builds the travel table for the config's polling order. Diagonals are the
// policy's revisit cost: 0 for exhaustive, a full return loop for gated.
// Explicit orders have no closed travel table here; throws Unsupported.
SwitchMatrix switch_matrix(const SystemConfig& config);

// (1 - rho) * cycle_hops * alpha / 2 plus the load-weighted double sum over
// the travel table. Equals the empty-system scan cost when rho = 0.
double moving_term_general(const LoadProfile& profile, const SwitchMatrix& m,
                           double alpha);

// (N * alpha / 2) * (1 - rho * sum (rho_i/rho)^2); circular order with every
// queue exhaustive only, else PolicyMismatch.
double moving_term_closed(const SystemConfig& config, const LoadProfile& profile);

// Assembles the report from a profile and a moving term.
AnalyticReport mean_wait(const LoadProfile& profile, double big_pi);

// Validates, builds the travel table, and assembles the full report.
AnalyticReport analyze(const SystemConfig& config, const ValidateOptions& opts = {});

} // namespace pollwait
