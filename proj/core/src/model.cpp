#include "pollwait/model.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "pollwait/errors.hpp"

namespace pollwait {

namespace {

void check_explicit_order(const SystemConfig& config) {
    if (config.explicit_order.empty())
        throw Error(ErrorKind::BadExplicitOrder, "explicit order is empty");
    std::vector<bool> visited(config.queues.size(), false);
    for (std::size_t q : config.explicit_order) {
        if (q >= config.queues.size())
            throw Error(ErrorKind::BadExplicitOrder,
                        "index " + std::to_string(q + 1) + " out of range for " +
                            std::to_string(config.queues.size()) + " queues");
        visited[q] = true;
    }
    for (std::size_t i = 0; i < config.queues.size(); ++i) {
        if (config.queues[i].lambda > 0.0 && !visited[i])
            throw Error(ErrorKind::BadExplicitOrder,
                        "queue " + std::to_string(i + 1) +
                            " has arrivals but is never visited");
    }
}

void check_parameters(const SystemConfig& config) {
    if (config.queues.empty())
        throw Error(ErrorKind::ConfigParse, "config has no queues");
    if (!(config.alpha >= 0.0) || !std::isfinite(config.alpha))
        throw Error(ErrorKind::ConfigParse, "alpha must be finite and >= 0");
    for (std::size_t i = 0; i < config.queues.size(); ++i) {
        const QueueSpec& q = config.queues[i];
        if (!(q.lambda >= 0.0) || !std::isfinite(q.lambda))
            throw Error(ErrorKind::ConfigParse,
                        "queue " + std::to_string(i + 1) +
                            ": lambda must be finite and >= 0");
        check_valid(q.service);
    }
}

} // namespace

std::pair<double, double> aggregate_moments(const SystemConfig& config) {
    double lambda_total = 0.0;
    for (const QueueSpec& q : config.queues) lambda_total += q.lambda;
    if (lambda_total <= 0.0)
        throw Error(ErrorKind::EmptySystem, "every queue has zero arrival rate");

    double m1 = 0.0;
    double m2 = 0.0;
    for (const QueueSpec& q : config.queues) {
        const double w = q.lambda / lambda_total;
        if (w <= 0.0) continue;
        m1 += w * mean(q.service);
        m2 += w * second_moment(q.service);
    }
    return {m1, m2};
}

LoadProfile validate(const SystemConfig& config, const ValidateOptions& opts) {
    check_parameters(config);

    LoadProfile profile;
    profile.n_queues = config.queues.size();

    for (const QueueSpec& q : config.queues) {
        profile.lambda_total += q.lambda;
        profile.rho_i.push_back(q.lambda * mean(q.service));
        profile.rho += profile.rho_i.back();
    }

    if (profile.lambda_total <= 0.0)
        throw Error(ErrorKind::EmptySystem, "every queue has zero arrival rate");

    if (!opts.allow_unequal_means) {
        // The wait formula needs one service-time mean across queues; compare
        // each loaded queue against the first loaded one.
        std::size_t ref = config.queues.size();
        for (std::size_t i = 0; i < config.queues.size(); ++i) {
            if (config.queues[i].lambda <= 0.0) continue;
            if (ref == config.queues.size()) {
                ref = i;
                continue;
            }
            const double a = mean(config.queues[ref].service);
            const double b = mean(config.queues[i].service);
            const double scale = std::max(std::abs(a), std::abs(b));
            if (std::abs(a - b) > kEqualMeansRelTol * scale)
                throw Error(ErrorKind::UnequalMeans,
                            "queues " + std::to_string(ref + 1) + " and " +
                                std::to_string(i + 1) + " have mean service " +
                                std::to_string(a) + " vs " + std::to_string(b));
        }
    }

    if (profile.rho >= 1.0)
        throw Error(ErrorKind::UnstableSystem,
                    "total rho = " + std::to_string(profile.rho) +
                        " must be < 1");

    const auto [m1, m2] = aggregate_moments(config);
    profile.mean_s = m1;
    profile.second_moment_s = m2;

    if (config.order == PollingOrder::Explicit) check_explicit_order(config);

    return profile;
}

const char* to_string(Discipline d) {
    return d == Discipline::Fcfs ? "fcfs" : "lcfs";
}

const char* to_string(Policy p) {
    return p == Policy::Exhaustive ? "exhaustive" : "gated";
}

const char* to_string(PollingOrder o) {
    switch (o) {
        case PollingOrder::Circular: return "circular";
        case PollingOrder::Elevator: return "elevator";
        case PollingOrder::RandomNext: return "random";
        case PollingOrder::Explicit: return "explicit";
    }
    return "order";
}

} // namespace pollwait
