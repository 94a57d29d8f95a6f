#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace pollwait {

// Streaming mean/variance via Welford updates. Merge combines two disjoint
// accumulators exactly as if their observations had been interleaved.
class RunningMoments {
public:
    void add(double x);
    void merge(const RunningMoments& other);

    std::uint64_t count() const { return n_; }
    double mean() const { return mean_; }
    double m2() const { return m2_; }
    // Population variance (divides by n); 0 when n < 1.
    double variance() const;
    // Sample variance (divides by n - 1); 0 when n < 2.
    double sample_variance() const;

private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct BatchMeansCI {
    double point = 0.0;
    double half_width_95 = 0.0;
    std::size_t n_batches = 0;
    std::size_t batch_size = 0;
    std::vector<double> batch_means;

    double lo() const { return point - half_width_95; }
    double hi() const { return point + half_width_95; }
    bool contains(double x) const { return x >= lo() && x <= hi(); }
};

inline constexpr double kNormalZ95 = 1.96;

// Splits the series into n_batches contiguous batches of equal size, dropping
// the oldest remainder, and builds a z-based 95% interval over batch means.
// Throws Error(TooFewSamples) when the series is shorter than 2 * n_batches.
BatchMeansCI batch_ci(const std::vector<double>& series, std::size_t n_batches = 32);

// Interval over an already-batched set of means, e.g. pooled across runs.
BatchMeansCI ci_from_batch_means(const std::vector<double>& batch_means,
                                 std::size_t batch_size = 0);

} // namespace pollwait
