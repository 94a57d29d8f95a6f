#include "pollwait/stats.hpp"

#include <cmath>
#include <string>

#include "pollwait/errors.hpp"

namespace pollwait {

void RunningMoments::add(double x) {
    n_ += 1;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
}

void RunningMoments::merge(const RunningMoments& other) {
    if (other.n_ == 0) return;
    if (n_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(other.n_);
    const double delta = other.mean_ - mean_;
    const double total = na + nb;
    mean_ += delta * nb / total;
    m2_ += other.m2_ + delta * delta * na * nb / total;
    n_ += other.n_;
}

double RunningMoments::variance() const {
    if (n_ < 1) return 0.0;
    return m2_ / static_cast<double>(n_);
}

double RunningMoments::sample_variance() const {
    if (n_ < 2) return 0.0;
    return m2_ / static_cast<double>(n_ - 1);
}

BatchMeansCI batch_ci(const std::vector<double>& series, std::size_t n_batches) {
    if (n_batches < 2)
        throw Error(ErrorKind::TooFewSamples, "need at least 2 batches");
    if (series.size() < 2 * n_batches)
        throw Error(ErrorKind::TooFewSamples,
                    "series of " + std::to_string(series.size()) +
                        " is shorter than 2 x " + std::to_string(n_batches) +
                        " batches");

    const std::size_t batch_size = series.size() / n_batches;
    const std::size_t skip = series.size() - batch_size * n_batches;

    std::vector<double> means;
    means.reserve(n_batches);
    for (std::size_t b = 0; b < n_batches; ++b) {
        const std::size_t begin = skip + b * batch_size;
        double acc = 0.0;
        for (std::size_t i = 0; i < batch_size; ++i) acc += series[begin + i];
        means.push_back(acc / static_cast<double>(batch_size));
    }
    return ci_from_batch_means(means, batch_size);
}

BatchMeansCI ci_from_batch_means(const std::vector<double>& batch_means,
                                 std::size_t batch_size) {
    if (batch_means.size() < 2)
        throw Error(ErrorKind::TooFewSamples, "need at least 2 batch means");

    RunningMoments rm;
    for (double m : batch_means) rm.add(m);

    BatchMeansCI ci;
    ci.point = rm.mean();
    ci.n_batches = batch_means.size();
    ci.batch_size = batch_size;
    ci.batch_means = batch_means;
    const double se =
        std::sqrt(rm.sample_variance() / static_cast<double>(batch_means.size()));
    ci.half_width_95 = kNormalZ95 * se;
    return ci;
}

} // namespace pollwait
