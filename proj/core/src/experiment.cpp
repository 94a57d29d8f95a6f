#include "pollwait/experiment.hpp"

#include <cmath>
#include <future>
#include <string>
#include <utility>

#include "pollwait/errors.hpp"

namespace pollwait {

std::vector<RunResult> run_replications(const SystemConfig& config,
                                        const RunOptions& base_opts,
                                        std::size_t replications) {
    if (replications == 0)
        throw Error(ErrorKind::InvalidHorizon, "need at least one replication");

    std::vector<std::future<RunResult>> futures;
    futures.reserve(replications);
    for (std::size_t r = 0; r < replications; ++r) {
        RunOptions opts = base_opts;
        opts.seed = base_opts.seed + r;
        opts.keep_trace = base_opts.keep_trace && r == 0;
        futures.push_back(std::async(std::launch::async, [config, opts] {
            return run_full(config, opts);
        }));
    }

    std::vector<RunResult> runs;
    runs.reserve(replications);
    for (auto& f : futures) runs.push_back(f.get());
    return runs;
}

BatchMeansCI pool(const std::vector<RunResult>& runs, PoolSeries series) {
    std::vector<double> means;
    for (const RunResult& run : runs) {
        const std::vector<double>* src = nullptr;
        switch (series) {
            case PoolSeries::Wait: src = &run.ci_w.batch_means; break;
            case PoolSeries::WaitMoving: src = &run.ci_m.batch_means; break;
            case PoolSeries::WaitServing: src = &run.ci_p.batch_means; break;
            case PoolSeries::TimeAvgN: src = &run.batch_time_avg_n; break;
            case PoolSeries::ArrivalAvgN: src = &run.batch_arrival_avg_n; break;
            case PoolSeries::FracServing: src = &run.batch_frac_serving; break;
        }
        means.insert(means.end(), src->begin(), src->end());
    }
    return ci_from_batch_means(means);
}

CompareOutcome compare(const SystemConfig& config, const RunOptions& base_opts,
                       std::size_t replications, double rel_tol) {
    CompareOutcome out;
    out.analytic = analyze(config, {.allow_unequal_means =
                                        base_opts.allow_unequal_means});
    const std::vector<RunResult> runs =
        run_replications(config, base_opts, replications);

    out.pooled_w = pool(runs, PoolSeries::Wait);
    out.pooled_m = pool(runs, PoolSeries::WaitMoving);
    out.pooled_p = pool(runs, PoolSeries::WaitServing);
    out.jobs_per_rep = base_opts.total_jobs;
    out.replications = replications;

    const double target = out.analytic.mean_w;
    const double scale = std::abs(target) > 0.0 ? std::abs(target) : 1.0;
    out.rel_err = std::abs(target - out.pooled_w.point) / scale;
    out.ci_contains = out.pooled_w.contains(target);
    out.rel_ok = out.rel_err < rel_tol;
    out.pass = out.ci_contains || out.rel_ok;

    const double rho = out.analytic.profile.rho;
    out.predicted_p =
        rho * out.analytic.residual + rho * out.pooled_w.point;
    out.p_gap = std::abs(out.pooled_p.point - out.predicted_p);
    out.p_identity_ok = out.p_gap <= out.pooled_p.half_width_95;

    const BatchMeansCI time_n = pool(runs, PoolSeries::TimeAvgN);
    const BatchMeansCI arrival_n = pool(runs, PoolSeries::ArrivalAvgN);
    out.time_avg_n = time_n.point;
    out.arrival_avg_n = arrival_n.point;
    out.pasta_gap = std::abs(arrival_n.point - time_n.point);
    out.pasta_joint_hw = arrival_n.half_width_95 + time_n.half_width_95;
    out.pasta_ok = out.pasta_gap <= out.pasta_joint_hw;

    const double little = out.analytic.profile.lambda_total * out.pooled_w.point;
    out.little_rel_err =
        little > 0.0 ? std::abs(time_n.point - little) / little : 0.0;

    return out;
}

SystemConfig apply_axis(const SystemConfig& base, SweepAxis axis, double value) {
    SystemConfig config = base;
    switch (axis) {
        case SweepAxis::Alpha:
            config.alpha = value;
            break;
        case SweepAxis::RhoScale:
            for (QueueSpec& q : config.queues) q.lambda *= value;
            break;
        case SweepAxis::NQueues: {
            const double n_d = value;
            const auto n = static_cast<std::size_t>(n_d);
            if (!(n_d == static_cast<double>(n)) || n < 1)
                throw Error(ErrorKind::ConfigParse,
                            "n_queues values must be whole numbers >= 1");
            double lambda_total = 0.0;
            for (const QueueSpec& q : base.queues) lambda_total += q.lambda;
            QueueSpec proto = base.queues.front();
            proto.lambda = lambda_total / static_cast<double>(n);
            config.queues.assign(n, proto);
            config.explicit_order.clear();
            if (config.order == PollingOrder::Explicit)
                config.order = PollingOrder::Circular;
            break;
        }
    }
    return config;
}

std::vector<SweepPoint> sweep(const SystemConfig& base, SweepAxis axis,
                              const std::vector<double>& values,
                              const RunOptions& base_opts,
                              std::size_t replications) {
    std::vector<SweepPoint> points;
    points.reserve(values.size());
    for (double v : values) {
        SweepPoint pt;
        pt.value = v;
        try {
            const SystemConfig config = apply_axis(base, axis, v);
            const CompareOutcome out =
                compare(config, base_opts, replications);
            pt.analytic_w = out.analytic.mean_w;
            pt.sim_w = out.pooled_w.point;
            pt.ci_half_width = out.pooled_w.half_width_95;
            pt.rel_err = out.rel_err;
            pt.pass = out.pass;
        } catch (const Error& e) {
            pt.error = e.what();
        }
        points.push_back(std::move(pt));
    }
    return points;
}

} // namespace pollwait
