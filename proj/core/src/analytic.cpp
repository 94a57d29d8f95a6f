#include "pollwait/analytic.hpp"

#include <cstddef>
#include <string>

#include "pollwait/errors.hpp"

namespace pollwait {

namespace {

SwitchMatrix circular_matrix(const SystemConfig& config) {
    const std::size_t n = config.queues.size();
    const double alpha = config.alpha;
    SwitchMatrix m;
    m.n_queues = n;
    m.cycle_hops = static_cast<double>(n);
    m.pi.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        m.state_queue.push_back(i);
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t hops = (j + n - i) % n;
            m.pi[i][j] = alpha * static_cast<double>(hops);
        }
        if (config.queues[i].policy == Policy::Gated)
            m.pi[i][i] = alpha * static_cast<double>(n);
    }
    return m;
}

// States: up-facing for queues 1..N-1, then down-facing for queues N..2
// (1-based reading). The bottom queue only ever turns upward and the top
// one downward, so each end carries a single state.
SwitchMatrix elevator_matrix(const SystemConfig& config) {
    const std::size_t n = config.queues.size();
    if (n < 2) return circular_matrix(config);

    const double alpha = config.alpha;
    SwitchMatrix m;
    m.n_queues = n;
    m.cycle_hops = static_cast<double>(2 * n - 2);

    struct State {
        std::size_t q;
        bool up;
    };
    std::vector<State> states;
    for (std::size_t q = 0; q + 1 < n; ++q) states.push_back({q, true});
    for (std::size_t q = n - 1; q >= 1; --q) states.push_back({q, false});

    m.pi.assign(states.size(), std::vector<double>(n, 0.0));
    for (std::size_t s = 0; s < states.size(); ++s) {
        const std::size_t i = states[s].q;
        const bool up = states[s].up;
        m.state_queue.push_back(i);
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t hops;
            if (j == i) {
                hops = (config.queues[i].policy == Policy::Gated)
                           ? (up ? 2 * (n - 1 - i) : 2 * i)
                           : 0;
            } else if (up) {
                hops = (j > i) ? (j - i) : (n - 1 - i) + (n - 1 - j);
            } else {
                hops = (j < i) ? (i - j) : i + j;
            }
            m.pi[s][j] = alpha * static_cast<double>(hops);
        }
    }
    return m;
}

// Uniform choice over the other N-1 queues makes first passage geometric:
// N-1 expected hops to any other queue, N to come back around.
SwitchMatrix random_matrix(const SystemConfig& config) {
    const std::size_t n = config.queues.size();
    if (n < 2) return circular_matrix(config);

    const double alpha = config.alpha;
    const double nn = static_cast<double>(n);
    SwitchMatrix m;
    m.n_queues = n;
    m.cycle_hops = 1.0 + 2.0 * (nn - 1.0) * (nn - 1.0) / nn;
    m.pi.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        m.state_queue.push_back(i);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                m.pi[i][j] = (config.queues[i].policy == Policy::Gated)
                                 ? alpha * nn
                                 : 0.0;
            } else {
                m.pi[i][j] = alpha * (nn - 1.0);
            }
        }
    }
    return m;
}

void fill_state_weights(SwitchMatrix& m, const LoadProfile& profile) {
    const std::size_t n = profile.n_queues;
    m.state_weights.assign(m.pi.size(), 0.0);
    if (profile.rho <= 0.0) return;

    if (m.pi.size() == n) {
        for (std::size_t i = 0; i < n; ++i)
            m.state_weights[i] = profile.rho_i[i] / profile.rho;
        return;
    }

    // Elevator: split each queue's serving share between its two states in
    // proportion to the patrol gap feeding the visit; work served at a visit
    // accumulated since the previous one. End queues keep a single state.
    const double period = static_cast<double>(2 * n - 2);
    for (std::size_t s = 0; s < m.pi.size(); ++s) {
        const std::size_t q = m.state_queue[s];
        const bool up = s < n - 1;
        const double share = profile.rho_i[q] / profile.rho;
        double gap;
        if (q == 0 || q == n - 1) {
            gap = period;
        } else {
            gap = up ? static_cast<double>(2 * q)
                     : static_cast<double>(2 * (n - 1 - q));
        }
        m.state_weights[s] = share * gap / period;
    }
}

} // namespace

double residual_term(const LoadProfile& profile) {
    return profile.second_moment_s / (2.0 * profile.mean_s);
}

SwitchMatrix switch_matrix(const SystemConfig& config) {
    if (config.queues.empty())
        throw Error(ErrorKind::ConfigParse, "config has no queues");

    // Load shares computed inline so the zero-load limit still yields a
    // table (with all-zero state weights) instead of a validation error.
    LoadProfile profile;
    profile.n_queues = config.queues.size();
    for (const QueueSpec& q : config.queues) {
        profile.rho_i.push_back(q.lambda * mean(q.service));
        profile.rho += profile.rho_i.back();
    }

    SwitchMatrix m;
    switch (config.order) {
        case PollingOrder::Circular: m = circular_matrix(config); break;
        case PollingOrder::Elevator: m = elevator_matrix(config); break;
        case PollingOrder::RandomNext: m = random_matrix(config); break;
        case PollingOrder::Explicit:
            throw Error(ErrorKind::Unsupported,
                        "no travel table for explicit orders; simulate instead");
    }
    fill_state_weights(m, profile);
    return m;
}

double moving_term_general(const LoadProfile& profile, const SwitchMatrix& m,
                           double alpha) {
    if (m.n_queues != profile.n_queues)
        throw Error(ErrorKind::DimensionMismatch,
                    "matrix is for " + std::to_string(m.n_queues) +
                        " queues, profile has " +
                        std::to_string(profile.n_queues));
    if (m.state_weights.size() != m.pi.size())
        throw Error(ErrorKind::DimensionMismatch,
                    "state weights do not match state count");

    const double empty_scan = m.cycle_hops * alpha / 2.0;
    if (profile.rho <= 0.0) return empty_scan;

    double weighted = 0.0;
    for (std::size_t s = 0; s < m.pi.size(); ++s) {
        if (m.pi[s].size() != profile.n_queues)
            throw Error(ErrorKind::DimensionMismatch,
                        "row " + std::to_string(s) + " has wrong width");
        double row = 0.0;
        for (std::size_t j = 0; j < profile.n_queues; ++j)
            row += (profile.rho_i[j] / profile.rho) * m.pi[s][j];
        weighted += m.state_weights[s] * row;
    }
    return (1.0 - profile.rho) * empty_scan + profile.rho * weighted;
}

double moving_term_closed(const SystemConfig& config, const LoadProfile& profile) {
    if (config.order != PollingOrder::Circular)
        throw Error(ErrorKind::PolicyMismatch,
                    "closed form covers circular order only");
    for (std::size_t i = 0; i < config.queues.size(); ++i) {
        if (config.queues[i].policy != Policy::Exhaustive)
            throw Error(ErrorKind::PolicyMismatch,
                        "closed form covers exhaustive queues only; queue " +
                            std::to_string(i + 1) + " is gated");
    }

    const double n_alpha_half =
        static_cast<double>(profile.n_queues) * config.alpha / 2.0;
    if (profile.rho <= 0.0) return n_alpha_half;

    double sum_sq = 0.0;
    for (double r : profile.rho_i) {
        const double share = r / profile.rho;
        sum_sq += share * share;
    }
    return n_alpha_half * (1.0 - profile.rho * sum_sq);
}

AnalyticReport mean_wait(const LoadProfile& profile, double big_pi) {
    AnalyticReport report;
    report.profile = profile;
    report.residual = residual_term(profile);
    report.big_pi = big_pi;
    report.mean_w =
        (profile.rho * report.residual + big_pi) / (1.0 - profile.rho);
    report.mean_p = report.mean_w - big_pi;
    return report;
}

AnalyticReport analyze(const SystemConfig& config, const ValidateOptions& opts) {
    const LoadProfile profile = validate(config, opts);
    const SwitchMatrix m = switch_matrix(config);
    const double big_pi = moving_term_general(profile, m, config.alpha);
    return mean_wait(profile, big_pi);
}

} // namespace pollwait
