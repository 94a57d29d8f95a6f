#include "doctest.h"

#include <cmath>
#include <sstream>
#include <vector>

#include "pollwait/analytic.hpp"
#include "pollwait/errors.hpp"
#include "pollwait/experiment.hpp"
#include "pollwait/sim.hpp"

using namespace pollwait;

namespace {

SystemConfig symmetric(std::size_t n, double lambda_each, ServiceDistribution s,
                       double alpha, Policy policy = Policy::Exhaustive,
                       PollingOrder order = PollingOrder::Circular) {
    SystemConfig c;
    c.alpha = alpha;
    c.order = order;
    for (std::size_t i = 0; i < n; ++i)
        c.queues.push_back({lambda_each, s, Discipline::Fcfs, policy});
    return c;
}

RunOptions scripted_opts(std::uint64_t n) {
    RunOptions o;
    o.total_jobs = n;
    o.warmup_jobs = 0;
    o.keep_trace = true;
    return o;
}

// Two-queue rig: the server starts at queue 1 and needs two hops to come
// back, so a burst parked at queue 1 meets it at t = 2 * alpha.
SystemConfig rig2(double alpha, Policy policy, Discipline disc = Discipline::Fcfs) {
    SystemConfig c = symmetric(2, 0.1, Deterministic{1.0}, alpha, policy);
    for (QueueSpec& q : c.queues) q.discipline = disc;
    return c;
}

} // namespace

TEST_SUITE("sim") {

TEST_CASE("lone job waits out the patrol loop") {
    // Server leaves queue 1 at t=0 just before the arrival lands, walks the
    // loop, and picks it up two hops later.
    const SystemConfig c = rig2(1.0, Policy::Exhaustive);
    const RunResult r = run_scripted(c, {{0.0, 0}}, scripted_opts(1));
    REQUIRE(r.trace.size() == 1);
    const JobRecord& j = r.trace[0];
    CHECK(j.queue == 0);
    CHECK(j.arrived_at == doctest::Approx(0.0));
    CHECK(j.service_begun_at == doctest::Approx(2.0));
    CHECK(j.wait == doctest::Approx(2.0));
    CHECK(j.wait_moving == doctest::Approx(2.0));
    CHECK(j.wait_serving == doctest::Approx(0.0));
    CHECK(j.n_seen == 0);
}

TEST_CASE("exhaustive serves the late arrival in the same visit") {
    // a and b wait at queue 1; c lands mid-service of a. Service is 1.0,
    // alpha 0.25, so the server reaches queue 1 at t = 0.5.
    const SystemConfig c = rig2(0.25, Policy::Exhaustive);
    const std::vector<ScriptedArrival> burst = {{0.0, 0}, {0.1, 0}, {1.0, 0}};
    const RunResult r = run_scripted(c, burst, scripted_opts(3));
    REQUIRE(r.trace.size() == 3);
    CHECK(r.trace[0].service_begun_at == doctest::Approx(0.5));
    CHECK(r.trace[1].service_begun_at == doctest::Approx(1.5));
    CHECK(r.trace[2].service_begun_at == doctest::Approx(2.5));
    CHECK(r.trace[0].wait == doctest::Approx(0.5));
    CHECK(r.trace[1].wait == doctest::Approx(1.4));
    CHECK(r.trace[2].wait == doctest::Approx(1.5));
    // c arrived while a was being served and b waited.
    CHECK(r.trace[2].n_seen == 1);
    // b's wait splits into travel until t=0.5 and a's service after.
    CHECK(r.trace[1].wait_moving == doctest::Approx(0.4));
    CHECK(r.trace[1].wait_serving == doctest::Approx(1.0));
    CHECK(r.trace[2].wait_moving == doctest::Approx(0.0));
    CHECK(r.trace[2].wait_serving == doctest::Approx(1.5));
}

TEST_CASE("gated leaves the late arrival for the next visit") {
    const SystemConfig c = rig2(0.25, Policy::Gated);
    const std::vector<ScriptedArrival> burst = {{0.0, 0}, {0.1, 0}, {1.0, 0}};
    const RunResult r = run_scripted(c, burst, scripted_opts(3));
    REQUIRE(r.trace.size() == 3);
    CHECK(r.trace[0].service_begun_at == doctest::Approx(0.5));
    CHECK(r.trace[1].service_begun_at == doctest::Approx(1.5));
    // c sat out the gate, one empty hop to queue 2 and back: 2.5 + 2*0.25.
    CHECK(r.trace[2].service_begun_at == doctest::Approx(3.0));
    CHECK(r.trace[2].wait == doctest::Approx(2.0));
}

TEST_CASE("lcfs reorders within the visit but never preempts") {
    const SystemConfig c = rig2(0.25, Policy::Exhaustive, Discipline::Lcfs);
    const std::vector<ScriptedArrival> burst = {{0.0, 0}, {0.1, 0}, {1.0, 0}};
    const RunResult r = run_scripted(c, burst, scripted_opts(3));
    REQUIRE(r.trace.size() == 3);
    // At t=0.5 the stack is a,b: b on top. c lands during b's service and
    // jumps ahead of a.
    CHECK(r.trace[0].arrived_at == doctest::Approx(0.1));
    CHECK(r.trace[0].service_begun_at == doctest::Approx(0.5));
    CHECK(r.trace[1].arrived_at == doctest::Approx(1.0));
    CHECK(r.trace[1].service_begun_at == doctest::Approx(1.5));
    CHECK(r.trace[2].arrived_at == doctest::Approx(0.0));
    CHECK(r.trace[2].service_begun_at == doctest::Approx(2.5));
}

TEST_CASE("gated lcfs serves the gate back to front") {
    const SystemConfig c = rig2(0.25, Policy::Gated, Discipline::Lcfs);
    const std::vector<ScriptedArrival> burst = {{0.0, 0}, {0.1, 0}, {1.0, 0}};
    const RunResult r = run_scripted(c, burst, scripted_opts(3));
    REQUIRE(r.trace.size() == 3);
    CHECK(r.trace[0].arrived_at == doctest::Approx(0.1));  // top of the gate
    CHECK(r.trace[0].service_begun_at == doctest::Approx(0.5));
    CHECK(r.trace[1].arrived_at == doctest::Approx(0.0));
    CHECK(r.trace[1].service_begun_at == doctest::Approx(1.5));
    CHECK(r.trace[2].arrived_at == doctest::Approx(1.0));  // outside the gate
    CHECK(r.trace[2].service_begun_at == doctest::Approx(3.0));
}

TEST_CASE("wait splits add up exactly, job by job") {
    const SystemConfig c = symmetric(3, 0.15, Exponential{1.0}, 0.3);
    RunOptions o;
    o.total_jobs = 20'000;
    o.warmup_jobs = 1'000;
    o.keep_trace = true;
    const RunResult r = run_full(c, o);
    REQUIRE(r.trace.size() == 19'000);
    for (const JobRecord& j : r.trace) {
        CHECK(j.wait ==
              doctest::Approx(j.wait_moving + j.wait_serving).epsilon(1e-12));
        CHECK(j.wait_moving >= 0.0);
        CHECK(j.wait_serving >= 0.0);
        CHECK(j.service_begun_at == doctest::Approx(j.arrived_at + j.wait));
    }
}

TEST_CASE("trace csv golden") {
    const SystemConfig c = rig2(1.0, Policy::Exhaustive);
    const RunResult r = run_scripted(c, {{0.0, 0}}, scripted_opts(1));
    std::ostringstream out;
    write_trace_csv(out, r.trace);
    CHECK(out.str() ==
          "queue,arrived_at,service_begun_at,wait,wait_moving,wait_serving,"
          "n_seen\n"
          "1,0.000000000,2.000000000,2.000000000,2.000000000,0.000000000,0\n");
}

TEST_CASE("patrol preview walks the route") {
    const SystemConfig circ = symmetric(4, 0.1, Exponential{1.0}, 0.25);
    CHECK(patrol_preview(circ, 6, 1) ==
          std::vector<std::size_t>{1, 2, 3, 0, 1, 2});

    const SystemConfig elev = symmetric(4, 0.1, Exponential{1.0}, 0.25,
                                        Policy::Exhaustive, PollingOrder::Elevator);
    CHECK(patrol_preview(elev, 9, 1) ==
          std::vector<std::size_t>{1, 2, 3, 2, 1, 0, 1, 2, 3});

    SystemConfig expl = symmetric(4, 0.1, Exponential{1.0}, 0.25);
    expl.order = PollingOrder::Explicit;
    expl.explicit_order = {0, 2, 1, 3};
    CHECK(patrol_preview(expl, 8, 1) ==
          std::vector<std::size_t>{2, 1, 3, 0, 2, 1, 3, 0});
}

TEST_CASE("random patrol never repeats a stop and is roughly uniform") {
    const SystemConfig c = symmetric(3, 0.1, Exponential{1.0}, 0.25,
                                     Policy::Exhaustive, PollingOrder::RandomNext);
    const std::vector<std::size_t> walk = patrol_preview(c, 60'000, 9);
    std::size_t prev = 0;
    std::vector<double> count(3, 0.0);
    for (std::size_t q : walk) {
        CHECK(q != prev);
        count[q] += 1.0;
        prev = q;
    }
    // Each stop follows one of the two others with equal chance.
    for (double x : count)
        CHECK(x / double(walk.size()) == doctest::Approx(1.0 / 3.0).epsilon(0.02));
}

TEST_CASE("same seed, same numbers; different seed, different numbers") {
    const SystemConfig c = symmetric(2, 0.2, Hyperexp2{0.5, 0.5, 1.5}, 0.5);
    const SimReport a = run(c, 42, 20'000, 2'000);
    const SimReport b = run(c, 42, 20'000, 2'000);
    const SimReport d = run(c, 43, 20'000, 2'000);
    CHECK(a.mean_w == b.mean_w);
    CHECK(a.time_avg_n == b.time_avg_n);
    CHECK(a.mean_w != d.mean_w);
}

TEST_CASE("serving fraction tracks rho") {
    const SystemConfig c = symmetric(4, 0.125, Deterministic{1.0}, 0.25);
    const SimReport r = run(c, 5, 400'000, 40'000);
    CHECK(r.frac_serving == doctest::Approx(0.5).epsilon(0.01));
    CHECK(r.frac_serving + r.frac_moving == doctest::Approx(1.0));
}

TEST_CASE("no travel time collapses to the M/G/1 queue") {
    const SystemConfig c = symmetric(1, 0.5, Exponential{1.0}, 0.0);
    const RunResult r = run_full(c, {.seed = 8, .total_jobs = 400'000,
                                     .warmup_jobs = 40'000});
    // PK: 0.5 * 2 / (2 * 0.5) = 1.
    CHECK(r.ci_w.contains(1.0));
    CHECK(r.report.mean_m < 1e-8);  // the server parks instead of patrolling
}

TEST_CASE("near-zero load sees half the scan time") {
    const SystemConfig c = symmetric(2, 1e-3, Exponential{1.0}, 0.5);
    const SimReport r = run(c, 3, 40'000, 4'000);
    CHECK(r.mean_w == doctest::Approx(0.5).epsilon(0.03));
    CHECK(r.frac_moving > 0.99);
}

TEST_CASE("little's law and pasta hold in the long run") {
    const SystemConfig c = symmetric(3, 0.2, Exponential{1.0}, 0.2);
    const SimReport r = run(c, 21, 600'000, 60'000);
    CHECK(r.time_avg_n == doctest::Approx(0.6 * r.mean_w).epsilon(0.01));
    CHECK(r.arrival_avg_n == doctest::Approx(r.time_avg_n).epsilon(0.02));
}

TEST_CASE("per-queue means combine into the overall mean") {
    const SystemConfig c = symmetric(4, 0.125, Exponential{1.0}, 0.25);
    RunOptions o;
    o.seed = 12;
    o.total_jobs = 200'000;
    o.warmup_jobs = 20'000;
    o.keep_trace = true;
    const RunResult r = run_full(c, o);
    std::vector<double> sum(4, 0.0), cnt(4, 0.0);
    for (const JobRecord& j : r.trace) {
        sum[j.queue] += j.wait;
        cnt[j.queue] += 1.0;
    }
    double total = 0.0, n = 0.0;
    for (std::size_t q = 0; q < 4; ++q) {
        CHECK(r.report.per_queue_mean_w[q] == doctest::Approx(sum[q] / cnt[q]));
        total += sum[q];
        n += cnt[q];
    }
    CHECK(r.report.mean_w == doctest::Approx(total / n));
}

TEST_CASE("explicit route with a doubled stop favors that queue") {
    SystemConfig c = symmetric(2, 0.2, Exponential{1.0}, 0.25);
    c.order = PollingOrder::Explicit;
    c.explicit_order = {0, 1, 0, 1};  // plain alternation first
    const SimReport plain = run(c, 31, 150'000, 15'000);
    c.explicit_order = {0, 0, 1};  // queue 1 gets two stops per period
    const SimReport doubled = run(c, 31, 150'000, 15'000);
    CHECK(doubled.per_queue_mean_w[0] < plain.per_queue_mean_w[0]);
    CHECK(doubled.per_queue_mean_w[1] > plain.per_queue_mean_w[1]);
}

TEST_CASE("warmup must leave something to measure") {
    const SystemConfig c = symmetric(2, 0.2, Exponential{1.0}, 0.25);
    CHECK_THROWS_AS(run(c, 1, 1'000, 1'000), Error);
    try {
        run(c, 1, 100, 200);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidHorizon);
    }
}

TEST_CASE("scripted run caps the horizon at the script length") {
    const SystemConfig c = rig2(0.25, Policy::Exhaustive);
    RunOptions o = scripted_opts(50);  // more than the two arrivals provided
    const RunResult r = run_scripted(c, {{0.0, 0}, {0.2, 1}}, o);
    CHECK(r.trace.size() == 2);
    CHECK(r.report.jobs_completed == 2);
}

TEST_CASE("conservation counters balance") {
    const SystemConfig c = symmetric(3, 0.15, Exponential{1.0}, 0.3);
    const RunResult r = run_full(c, {.seed = 77, .total_jobs = 50'000,
                                     .warmup_jobs = 5'000});
    CHECK(r.services_begun == 50'000);
    CHECK(r.arrivals_generated >= r.services_begun);
    CHECK(r.arrivals_generated - r.services_begun == r.waiting_at_end);
}

TEST_CASE("replications pool into a tighter interval") {
    const SystemConfig c = symmetric(4, 0.125, Deterministic{1.0}, 0.25);
    RunOptions o;
    o.seed = 100;
    o.total_jobs = 100'000;
    o.warmup_jobs = 10'000;
    const std::vector<RunResult> runs = run_replications(c, o, 4);
    REQUIRE(runs.size() == 4);
    CHECK(runs[0].report.seed == 100);
    CHECK(runs[3].report.seed == 103);
    CHECK(runs[0].report.mean_w != runs[1].report.mean_w);

    const BatchMeansCI pooled = pool(runs, PoolSeries::Wait);
    CHECK(pooled.n_batches == 4 * runs[0].ci_w.n_batches);
    CHECK(pooled.half_width_95 < runs[0].ci_w.half_width_95);
    CHECK(pooled.contains(1.375));
}

TEST_CASE("compare flags agreement for the symmetric benchmark") {
    const SystemConfig c = symmetric(4, 0.125, Deterministic{1.0}, 0.25);
    RunOptions o;
    o.seed = 1;
    o.total_jobs = 200'000;
    o.warmup_jobs = 20'000;
    const CompareOutcome out = compare(c, o, 3);
    CHECK(out.analytic.mean_w == doctest::Approx(1.375));
    CHECK(out.pass);
    CHECK(out.rel_err < 0.02);
    CHECK(out.p_identity_ok);
    CHECK(out.pasta_ok);
    CHECK(out.little_rel_err < 0.01);
}

TEST_CASE("sweep applies each axis") {
    const SystemConfig base = symmetric(4, 0.125, Deterministic{1.0}, 0.25);

    const SystemConfig more_alpha = apply_axis(base, SweepAxis::Alpha, 0.5);
    CHECK(more_alpha.alpha == 0.5);

    const SystemConfig scaled = apply_axis(base, SweepAxis::RhoScale, 1.5);
    CHECK(scaled.queues[0].lambda == doctest::Approx(0.1875));

    const SystemConfig wider = apply_axis(base, SweepAxis::NQueues, 8);
    CHECK(wider.queues.size() == 8);
    CHECK(wider.queues[3].lambda == doctest::Approx(0.0625));

    RunOptions o;
    o.seed = 5;
    o.total_jobs = 60'000;
    o.warmup_jobs = 6'000;
    const std::vector<SweepPoint> pts =
        sweep(base, SweepAxis::Alpha, {0.1, 0.25, 2.0}, o, 2);
    REQUIRE(pts.size() == 3);
    for (const SweepPoint& p : pts) {
        CHECK(p.error.empty());
        CHECK(p.pass);
    }
    CHECK(pts[0].analytic_w < pts[1].analytic_w);
    CHECK(pts[1].analytic_w < pts[2].analytic_w);

    // An unstable point reports its error instead of aborting the series.
    const std::vector<SweepPoint> bad =
        sweep(base, SweepAxis::RhoScale, {0.5, 2.5}, o, 2);
    CHECK(bad[0].error.empty());
    CHECK(!bad[1].error.empty());
}

} // TEST_SUITE
