#pragma once

#include <variant>

#include "pollwait/rng.hpp"

namespace pollwait {

// Service time laws. Each carries exact first and second moments so the
// analytic side never has to integrate anything.

struct Deterministic {
    double value = 1.0;
};

struct Exponential {
    double mean = 1.0;
};

struct Uniform {
    double lo = 0.0;
    double hi = 1.0;
};

// Mixture of two exponentials: branch 1 with probability p.
struct Hyperexp2 {
    double p = 0.5;
    double mean1 = 1.0;
    double mean2 = 1.0;
};

using ServiceDistribution = std::variant<Deterministic, Exponential, Uniform, Hyperexp2>;

double mean(const ServiceDistribution& d);
double second_moment(const ServiceDistribution& d);
double sample(const ServiceDistribution& d, RandomStream& rng);

// second_moment / mean^2 - 1; equals 0 deterministic, 1 exponential.
double squared_cv(const ServiceDistribution& d);

// Throws Error(ConfigParse) on non-positive or out-of-range parameters.
void check_valid(const ServiceDistribution& d);

} // namespace pollwait
