#include "pollwait/dists.hpp"

#include <cmath>
#include <string>

#include "pollwait/errors.hpp"

namespace pollwait {

double mean(const ServiceDistribution& d) {
    return std::visit(
        [](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Deterministic>) {
                return v.value;
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return v.mean;
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return 0.5 * (v.lo + v.hi);
            } else {
                return v.p * v.mean1 + (1.0 - v.p) * v.mean2;
            }
        },
        d);
}

double second_moment(const ServiceDistribution& d) {
    return std::visit(
        [](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Deterministic>) {
                return v.value * v.value;
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return 2.0 * v.mean * v.mean;
            } else if constexpr (std::is_same_v<T, Uniform>) {
                // E[X^2] = (lo^2 + lo*hi + hi^2) / 3
                return (v.lo * v.lo + v.lo * v.hi + v.hi * v.hi) / 3.0;
            } else {
                return 2.0 * (v.p * v.mean1 * v.mean1 +
                              (1.0 - v.p) * v.mean2 * v.mean2);
            }
        },
        d);
}

double sample(const ServiceDistribution& d, RandomStream& rng) {
    return std::visit(
        [&rng](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Deterministic>) {
                return v.value;
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return rng.next_exponential(v.mean);
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return v.lo + (v.hi - v.lo) * rng.next_unit();
            } else {
                // Branch draw first, then the branch's exponential: two draws
                // per sample, always, so streams stay aligned across laws.
                const double u = rng.next_unit();
                const double m = (u < v.p) ? v.mean1 : v.mean2;
                return rng.next_exponential(m);
            }
        },
        d);
}

double squared_cv(const ServiceDistribution& d) {
    const double m = mean(d);
    return second_moment(d) / (m * m) - 1.0;
}

void check_valid(const ServiceDistribution& d) {
    std::visit(
        [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Deterministic>) {
                if (!(v.value > 0.0))
                    throw Error(ErrorKind::ConfigParse,
                                "deterministic value must be positive");
            } else if constexpr (std::is_same_v<T, Exponential>) {
                if (!(v.mean > 0.0))
                    throw Error(ErrorKind::ConfigParse,
                                "exponential mean must be positive");
            } else if constexpr (std::is_same_v<T, Uniform>) {
                if (!(v.lo >= 0.0) || !(v.hi > v.lo))
                    throw Error(ErrorKind::ConfigParse,
                                "uniform bounds need 0 <= lo < hi");
            } else {
                if (!(v.p > 0.0 && v.p < 1.0))
                    throw Error(ErrorKind::ConfigParse,
                                "hyperexponential weight must lie in (0, 1)");
                if (!(v.mean1 > 0.0) || !(v.mean2 > 0.0))
                    throw Error(ErrorKind::ConfigParse,
                                "hyperexponential branch means must be positive");
            }
        },
        d);
}

} // namespace pollwait
