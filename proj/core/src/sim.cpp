#include "pollwait/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <ostream>
#include <queue>
#include <string>
#include <utility>

#include "pollwait/errors.hpp"
#include "pollwait/rng.hpp"

namespace pollwait {

namespace {

// Compensated accumulator; per-job wait splits are differences of two
// readings of the same sum, so drift would land in the M/P decomposition.
struct KahanSum {
    double value = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double y = x - comp;
        const double t = value + y;
        comp = (t - value) - y;
        value = t;
    }
};

struct Event {
    double at = 0.0;
    std::uint64_t seq = 0;
    enum Kind : std::uint8_t { Arrival, ServiceDone, HopDone } kind = Arrival;
    std::uint32_t queue = 0;  // Arrival: source; HopDone: destination
};

struct EventLater {
    bool operator()(const Event& a, const Event& b) const {
        if (a.at != b.at) return a.at > b.at;
        return a.seq > b.seq;
    }
};

struct WaitingJob {
    double arrived_at = 0.0;
    double serving_at_arrival = 0.0;  // cumulative serving time at arrival
    std::uint64_t n_seen = 0;
};

struct EngineQueue {
    std::deque<WaitingJob> jobs;  // arrival order, front oldest
    std::size_t gate = 0;         // eligible jobs this visit (gated)
};

// Patrol successor. Advancing consumes exactly one draw per hop under the
// random order and none otherwise, so skipped-ahead patrols stay replayable.
class PollCursor {
public:
    PollCursor(const SystemConfig& config, RandomStream* patrol_rng)
        : order_(config.order),
          n_(config.queues.size()),
          cycle_(config.explicit_order),
          rng_(patrol_rng) {
        if (order_ == PollingOrder::Explicit) pos_ = cycle_[0];
    }

    std::size_t pos() const { return pos_; }

    // Parked wake under alpha = 0: any stop is reachable in zero time, so
    // the cursor jumps straight to the arrival's queue.
    void teleport(std::size_t q) {
        pos_ = q;
        if (order_ == PollingOrder::Elevator) {
            if (pos_ == 0) up_ = true;
            else if (pos_ + 1 == n_) up_ = false;
        } else if (order_ == PollingOrder::Explicit) {
            for (std::size_t k = 0; k < cycle_.size(); ++k) {
                if (cycle_[k] == q) {
                    idx_ = k;
                    break;
                }
            }
        }
    }

    std::size_t advance() {
        switch (order_) {
            case PollingOrder::Circular:
                pos_ = (pos_ + 1) % n_;
                break;
            case PollingOrder::Elevator:
                if (n_ == 1) break;
                if (up_) {
                    if (pos_ + 1 < n_) pos_ += 1;
                    else {
                        up_ = false;
                        pos_ -= 1;
                    }
                } else {
                    if (pos_ > 0) pos_ -= 1;
                    else {
                        up_ = true;
                        pos_ += 1;
                    }
                }
                break;
            case PollingOrder::RandomNext: {
                if (n_ == 1) break;
                std::size_t cand =
                    static_cast<std::size_t>(rng_->next_index(n_ - 1));
                if (cand >= pos_) ++cand;
                pos_ = cand;
                break;
            }
            case PollingOrder::Explicit:
                idx_ = (idx_ + 1) % cycle_.size();
                pos_ = cycle_[idx_];
                break;
        }
        return pos_;
    }

private:
    PollingOrder order_;
    std::size_t n_;
    std::size_t pos_ = 0;
    bool up_ = true;
    std::vector<std::size_t> cycle_;
    std::size_t idx_ = 0;
    RandomStream* rng_;
};

enum class Phase { Moving, Serving, Parked };

struct Snapshot {
    double t = 0.0;
    double narea = 0.0;
    double serving = 0.0;
    double moving = 0.0;
};

class Engine {
public:
    Engine(const SystemConfig& config, const RunOptions& opts,
           const std::vector<ScriptedArrival>* scripted)
        : config_(config),
          opts_(opts),
          n_(config.queues.size()),
          alpha_(config.alpha),
          scripted_(scripted),
          patrol_rng_(substream_seed(opts.seed, 2 * config.queues.size())),
          cursor_(config, &patrol_rng_) {
        if (opts_.total_jobs <= opts_.warmup_jobs)
            throw Error(ErrorKind::InvalidHorizon,
                        "total_jobs (" + std::to_string(opts_.total_jobs) +
                            ") must exceed warmup_jobs (" +
                            std::to_string(opts_.warmup_jobs) + ")");
        queues_.resize(n_);
        for (std::size_t q = 0; q < n_; ++q) {
            arrival_rngs_.emplace_back(substream_seed(opts.seed, q));
            service_rngs_.emplace_back(substream_seed(opts.seed, n_ + q));
        }
        build_checkpoints();
    }

    RunResult go() {
        seed_initial();
        maybe_checkpoint();
        continue_at(cursor_.pos(), true);
        while (!stop_) {
            if (heap_.empty())
                throw Error(ErrorKind::InvalidHorizon,
                            "run starves after " +
                                std::to_string(services_begun_) +
                                " service starts; total_jobs unreachable");
            const Event e = heap_.top();
            heap_.pop();
            sync(e.at);
            switch (e.kind) {
                case Event::Arrival: on_arrival(e.queue); break;
                case Event::ServiceDone: on_service_done(e.queue); break;
                case Event::HopDone: on_hop_done(e.queue); break;
            }
        }
        return assemble();
    }

private:
    void schedule(double at, Event::Kind kind, std::uint32_t queue) {
        heap_.push(Event{at, seq_++, kind, queue});
    }

    void sync(double t) {
        const double dt = t - t_sync_;
        if (dt != 0.0) {
            if (waiting_total_ > 0)
                narea_.add(static_cast<double>(waiting_total_) * dt);
            if (phase_ == Phase::Serving) serving_time_.add(dt);
            else moving_time_.add(dt);  // parked time counts as patrol time
            t_sync_ = t;
        }
        t_now_ = t;
    }

    void seed_initial() {
        if (scripted_) {
            for (const ScriptedArrival& a : *scripted_) {
                if (a.queue >= n_)
                    throw Error(ErrorKind::ConfigParse,
                                "scripted arrival for queue " +
                                    std::to_string(a.queue + 1) + " of " +
                                    std::to_string(n_));
                if (!(a.at >= 0.0) || !std::isfinite(a.at))
                    throw Error(ErrorKind::ConfigParse,
                                "scripted arrival time must be finite and >= 0");
                schedule(a.at, Event::Arrival,
                         static_cast<std::uint32_t>(a.queue));
            }
            return;
        }
        for (std::size_t q = 0; q < n_; ++q) {
            const double lam = config_.queues[q].lambda;
            if (lam <= 0.0) continue;
            schedule(arrival_rngs_[q].next_exponential(1.0 / lam),
                     Event::Arrival, static_cast<std::uint32_t>(q));
        }
    }

    void on_arrival(std::uint32_t q) {
        const std::uint64_t seen = waiting_total_;
        if (services_begun_ >= opts_.warmup_jobs)
            nseen_series_.push_back(static_cast<double>(seen));
        queues_[q].jobs.push_back({t_now_, serving_time_.value, seen});
        waiting_total_ += 1;
        arrivals_generated_ += 1;

        if (!scripted_) {
            const double lam = config_.queues[q].lambda;
            schedule(t_now_ + arrival_rngs_[q].next_exponential(1.0 / lam),
                     Event::Arrival, q);
        }

        if (phase_ == Phase::Parked) {
            cursor_.teleport(q);
            continue_at(q, true);
        }
    }

    void on_service_done(std::uint32_t q) {
        continue_at(q, false);
    }

    void on_hop_done(std::uint32_t dest) {
        continue_at(dest, true);
    }

    void continue_at(std::size_t q, bool fresh_visit) {
        EngineQueue& eq = queues_[q];
        const Policy policy = config_.queues[q].policy;
        if (fresh_visit && policy == Policy::Gated) eq.gate = eq.jobs.size();
        const bool has_work =
            policy == Policy::Gated ? eq.gate > 0 : !eq.jobs.empty();
        if (has_work) begin_service(q);
        else depart();
    }

    WaitingJob take_next(std::size_t q) {
        EngineQueue& eq = queues_[q];
        const QueueSpec& spec = config_.queues[q];
        if (spec.policy == Policy::Gated) {
            if (spec.discipline == Discipline::Fcfs) {
                WaitingJob job = eq.jobs.front();
                eq.jobs.pop_front();
                eq.gate -= 1;
                return job;
            }
            // LCFS among the gated set: newest eligible sits at gate - 1.
            const std::size_t idx = eq.gate - 1;
            WaitingJob job = eq.jobs[idx];
            eq.jobs.erase(eq.jobs.begin() + static_cast<std::ptrdiff_t>(idx));
            eq.gate -= 1;
            return job;
        }
        if (spec.discipline == Discipline::Fcfs) {
            WaitingJob job = eq.jobs.front();
            eq.jobs.pop_front();
            return job;
        }
        WaitingJob job = eq.jobs.back();
        eq.jobs.pop_back();
        return job;
    }

    void begin_service(std::size_t q) {
        const WaitingJob job = take_next(q);
        waiting_total_ -= 1;
        services_begun_ += 1;

        if (services_begun_ > opts_.warmup_jobs) {
            const double w = t_now_ - job.arrived_at;
            double p = serving_time_.value - job.serving_at_arrival;
            p = std::clamp(p, 0.0, w);
            wait_series_.push_back(w);
            wp_series_.push_back(p);
            wm_series_.push_back(w - p);
            pq_wait_sum_[q] += w;
            pq_count_[q] += 1;
            if (opts_.keep_trace)
                trace_.push_back({static_cast<std::uint32_t>(q), job.arrived_at,
                                  t_now_, w, w - p, p, job.n_seen});
        }
        maybe_checkpoint();

        phase_ = Phase::Serving;
        const double s = sample(config_.queues[q].service, service_rngs_[q]);
        schedule(t_now_ + s, Event::ServiceDone,
                 static_cast<std::uint32_t>(q));
        if (services_begun_ >= opts_.total_jobs) stop_ = true;
    }

    void depart() {
        if (alpha_ == 0.0 && waiting_total_ == 0) {
            // Instant hops would spin forever through an empty system; park
            // until an arrival, which can then be reached in zero time.
            phase_ = Phase::Parked;
            return;
        }
        phase_ = Phase::Moving;
        if (waiting_total_ == 0) {
            if (heap_.empty())
                throw Error(ErrorKind::InvalidHorizon,
                            "run starves after " +
                                std::to_string(services_begun_) +
                                " service starts; total_jobs unreachable");
            // Empty system: burn whole hops up to the next arrival without
            // queueing events. Times accumulate hop by hop so they match an
            // event-by-event patrol bit for bit.
            const double t_top = heap_.top().at;
            double tt = t_now_;
            while (tt + alpha_ < t_top) {
                tt += alpha_;
                cursor_.advance();
            }
            schedule(tt + alpha_, Event::HopDone,
                     static_cast<std::uint32_t>(cursor_.advance()));
            return;
        }
        schedule(t_now_ + alpha_, Event::HopDone,
                 static_cast<std::uint32_t>(cursor_.advance()));
    }

    void build_checkpoints() {
        const std::uint64_t measured = opts_.total_jobs - opts_.warmup_jobs;
        cp_counts_.push_back(opts_.warmup_jobs);
        if (opts_.n_batches >= 2 && measured >= 2 * opts_.n_batches) {
            batch_size_ = measured / opts_.n_batches;
            const std::uint64_t skip = measured - batch_size_ * opts_.n_batches;
            for (std::uint64_t b = 0; b <= opts_.n_batches; ++b)
                cp_counts_.push_back(opts_.warmup_jobs + skip + b * batch_size_);
        }
        cp_counts_.push_back(opts_.total_jobs);
        std::sort(cp_counts_.begin(), cp_counts_.end());
        cp_counts_.erase(std::unique(cp_counts_.begin(), cp_counts_.end()),
                         cp_counts_.end());
    }

    void maybe_checkpoint() {
        while (cp_idx_ < cp_counts_.size() &&
               services_begun_ == cp_counts_[cp_idx_]) {
            snaps_.emplace_back(cp_counts_[cp_idx_],
                                Snapshot{t_now_, narea_.value,
                                         serving_time_.value,
                                         moving_time_.value});
            cp_idx_ += 1;
        }
    }

    const Snapshot& snap_at(std::uint64_t count) const {
        for (const auto& [c, s] : snaps_)
            if (c == count) return s;
        throw Error(ErrorKind::InvalidHorizon,
                    "missing checkpoint at " + std::to_string(count));
    }

    RunResult assemble() {
        RunResult result;
        const std::uint64_t measured = opts_.total_jobs - opts_.warmup_jobs;

        SimReport& rep = result.report;
        rep.jobs_completed = measured;
        rep.warmup_jobs_discarded = opts_.warmup_jobs;
        rep.seed = opts_.seed;

        rep.mean_w = series_mean(wait_series_);
        rep.mean_m = series_mean(wm_series_);
        rep.mean_p = series_mean(wp_series_);

        if (batch_size_ > 0) {
            result.ci_w = batch_ci(wait_series_, opts_.n_batches);
            result.ci_m = batch_ci(wm_series_, opts_.n_batches);
            result.ci_p = batch_ci(wp_series_, opts_.n_batches);
            rep.ci_w = result.ci_w.half_width_95;
            rep.ci_m = result.ci_m.half_width_95;
            rep.ci_p = result.ci_p.half_width_95;
        }

        rep.per_queue_mean_w.resize(n_, 0.0);
        for (std::size_t q = 0; q < n_; ++q)
            if (pq_count_[q] > 0)
                rep.per_queue_mean_w[q] =
                    pq_wait_sum_[q] / static_cast<double>(pq_count_[q]);

        const Snapshot& ws = snap_at(opts_.warmup_jobs);
        const Snapshot& we = snap_at(opts_.total_jobs);
        const double wt = we.t - ws.t;
        rep.window_time = wt;
        if (wt > 0.0) {
            rep.time_avg_n = (we.narea - ws.narea) / wt;
            rep.frac_serving = (we.serving - ws.serving) / wt;
            rep.frac_moving = (we.moving - ws.moving) / wt;
        }

        if (!nseen_series_.empty()) rep.arrival_avg_n = series_mean(nseen_series_);

        if (batch_size_ > 0) {
            const std::uint64_t skip = measured - batch_size_ * opts_.n_batches;
            for (std::uint64_t b = 0; b < opts_.n_batches; ++b) {
                const Snapshot& a =
                    snap_at(opts_.warmup_jobs + skip + b * batch_size_);
                const Snapshot& z =
                    snap_at(opts_.warmup_jobs + skip + (b + 1) * batch_size_);
                const double span = z.t - a.t;
                if (span > 0.0) {
                    result.batch_time_avg_n.push_back((z.narea - a.narea) / span);
                    result.batch_frac_serving.push_back((z.serving - a.serving) /
                                                        span);
                }
            }
            if (nseen_series_.size() >= 2 * opts_.n_batches)
                result.batch_arrival_avg_n =
                    batch_ci(nseen_series_, opts_.n_batches).batch_means;
        }

        result.trace = std::move(trace_);
        result.arrivals_generated = arrivals_generated_;
        result.services_begun = services_begun_;
        result.waiting_at_end = waiting_total_;
        return result;
    }

    static double series_mean(const std::vector<double>& xs) {
        if (xs.empty()) return 0.0;
        KahanSum acc;
        for (double x : xs) acc.add(x);
        return acc.value / static_cast<double>(xs.size());
    }

    const SystemConfig& config_;
    RunOptions opts_;
    std::size_t n_;
    double alpha_;
    const std::vector<ScriptedArrival>* scripted_;

    RandomStream patrol_rng_;
    PollCursor cursor_;
    std::vector<RandomStream> arrival_rngs_;
    std::vector<RandomStream> service_rngs_;

    std::priority_queue<Event, std::vector<Event>, EventLater> heap_;
    std::uint64_t seq_ = 0;
    std::vector<EngineQueue> queues_;

    Phase phase_ = Phase::Moving;
    double t_now_ = 0.0;
    double t_sync_ = 0.0;
    std::uint64_t waiting_total_ = 0;

    KahanSum serving_time_;
    KahanSum moving_time_;
    KahanSum narea_;

    std::uint64_t arrivals_generated_ = 0;
    std::uint64_t services_begun_ = 0;
    bool stop_ = false;

    std::vector<double> wait_series_, wm_series_, wp_series_, nseen_series_;
    std::vector<double> pq_wait_sum_ = std::vector<double>(n_, 0.0);
    std::vector<std::uint64_t> pq_count_ = std::vector<std::uint64_t>(n_, 0);
    std::vector<JobRecord> trace_;

    std::vector<std::uint64_t> cp_counts_;
    std::size_t cp_idx_ = 0;
    std::uint64_t batch_size_ = 0;
    std::vector<std::pair<std::uint64_t, Snapshot>> snaps_;
};

} // namespace

RunResult run_full(const SystemConfig& config, const RunOptions& opts) {
    validate(config, {.allow_unequal_means = opts.allow_unequal_means});
    Engine engine(config, opts, nullptr);
    return engine.go();
}

SimReport run(const SystemConfig& config, std::uint64_t seed,
              std::uint64_t total_jobs, std::uint64_t warmup_jobs) {
    RunOptions opts;
    opts.seed = seed;
    opts.total_jobs = total_jobs;
    opts.warmup_jobs = warmup_jobs;
    return run_full(config, opts).report;
}

RunResult run_scripted(const SystemConfig& config,
                       const std::vector<ScriptedArrival>& arrivals,
                       RunOptions opts) {
    try {
        validate(config, {.allow_unequal_means = true});
    } catch (const Error& e) {
        // Scripted runs provide their own arrivals, so a config with no (or
        // overloaded) Poisson streams is still meaningful.
        if (e.kind() != ErrorKind::EmptySystem &&
            e.kind() != ErrorKind::UnstableSystem)
            throw;
    }
    if (opts.total_jobs > arrivals.size())
        opts.total_jobs = arrivals.size();
    if (opts.warmup_jobs >= opts.total_jobs) opts.warmup_jobs = 0;
    Engine engine(config, opts, &arrivals);
    return engine.go();
}

std::vector<std::size_t> patrol_preview(const SystemConfig& config,
                                        std::size_t hops, std::uint64_t seed) {
    if (config.queues.empty())
        throw Error(ErrorKind::ConfigParse, "config has no queues");
    if (config.order == PollingOrder::Explicit && config.explicit_order.empty())
        throw Error(ErrorKind::BadExplicitOrder, "explicit order is empty");
    RandomStream rng(substream_seed(seed, 2 * config.queues.size()));
    PollCursor cursor(config, &rng);
    std::vector<std::size_t> stops;
    stops.reserve(hops);
    for (std::size_t k = 0; k < hops; ++k) stops.push_back(cursor.advance());
    return stops;
}

void write_trace_csv(std::ostream& out, const std::vector<JobRecord>& trace) {
    out << "queue,arrived_at,service_begun_at,wait,wait_moving,wait_serving,"
           "n_seen\n";
    char buf[256];
    for (const JobRecord& r : trace) {
        std::snprintf(buf, sizeof(buf), "%u,%.9f,%.9f,%.9f,%.9f,%.9f,%llu\n",
                      r.queue + 1, r.arrived_at, r.service_begun_at, r.wait,
                      r.wait_moving, r.wait_serving,
                      static_cast<unsigned long long>(r.n_seen));
        out << buf;
    }
}

} // namespace pollwait
