#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "gridsched/optimizer.hpp"
#include "gridsched/runner.hpp"

using namespace gridsched;

namespace {

SwarmConfig swarm(std::uint64_t seed, int gens = 100) {
    SwarmConfig cfg;
    cfg.seed = seed;
    cfg.generations = gens;
    return cfg;
}

Box box2(double lo, double hi) { return {{lo, lo}, {hi, hi}}; }

// A one-MT day context on the bundled feeder for single-state oracles.
struct MtFixture {
    CaseData network;
    DayContext ctx;

    MtFixture() {
        network = load_case_file(std::string(GRIDSCHED_DATA_DIR) + "/case33.csv");
        ctx.network = &network;
        MicroTurbine mt;
        mt.node = 25;
        ctx.devices.mts.push_back(mt);
        ctx.prices.grid = {0.03, 0.09, 0.05};
        for (double g : ctx.prices.grid) ctx.prices.customer.push_back(g * 1.05);
        ctx.profiles.load = {0.55, 0.75, 0.65};
        ctx.profiles.spv = {0.0, 0.3, 0.1};
        ctx.profiles.wt = {0.5, 0.4, 0.45};
        ctx.plan = build_plan({}, ctx.devices.mts, ctx.prices);
    }
};

}  // namespace

TEST_CASE("swarm finds the sphere optimum") {
    const std::vector<double> target = {120.0, 340.0};
    const Objective sphere = [&](const std::vector<double>& x) {
        double s = 0.0;
        for (std::size_t d = 0; d < x.size(); ++d)
            s += (x[d] - target[d]) * (x[d] - target[d]);
        return -s;
    };

    // median error over 30 seeds
    std::vector<double> errs;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        BestResult r = swarm_kernel(sphere, box2(0.0, 500.0), swarm(seed));
        errs.push_back(std::sqrt(-r.value));
    }
    std::sort(errs.begin(), errs.end());
    CHECK(errs[15] < 1e-2);
}

TEST_CASE("linear objective drives the swarm into the corner") {
    const Objective linear = [](const std::vector<double>& x) { return x[0] + 2.0 * x[1]; };
    BestResult r = swarm_kernel(linear, box2(0.0, 100.0), swarm(3));
    CHECK(r.x[0] == doctest::Approx(100.0).epsilon(1e-6));
    CHECK(r.x[1] == doctest::Approx(100.0).epsilon(1e-6));
    CHECK(r.value == doctest::Approx(300.0).epsilon(1e-6));
}

TEST_CASE("candidates never leave the box") {
    const Objective pull_out = [](const std::vector<double>& x) {
        CHECK(x[0] >= -1.0);
        CHECK(x[0] <= 1.0);
        CHECK(x[1] >= 2.0);
        CHECK(x[1] <= 3.0);
        return x[0] + x[1];  // optimum on the boundary
    };
    Box b{{-1.0, 2.0}, {1.0, 3.0}};
    BestResult r = swarm_kernel(pull_out, b, swarm(5));
    CHECK(r.value == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("constant and NaN objectives are handled") {
    const Objective flat = [](const std::vector<double>&) { return 7.5; };
    BestResult r = swarm_kernel(flat, box2(0.0, 10.0), swarm(1));
    CHECK(r.value == doctest::Approx(7.5));

    // NaN half-plane: the best must come from the clean half
    const Objective holed = [](const std::vector<double>& x) {
        if (x[0] > 5.0) return std::numeric_limits<double>::quiet_NaN();
        return x[0];
    };
    BestResult h = swarm_kernel(holed, box2(0.0, 10.0), swarm(2));
    CHECK(std::isfinite(h.value));
    CHECK(h.x[0] <= 5.0);
    CHECK(h.value == doctest::Approx(5.0).epsilon(1e-3));
}

TEST_CASE("fixed seed reproduces the run, longer runs never get worse") {
    const Objective bumpy = [](const std::vector<double>& x) {
        return std::sin(x[0] / 20.0) + std::cos(x[1] / 35.0);
    };
    BestResult a = swarm_kernel(bumpy, box2(0.0, 400.0), swarm(9));
    BestResult b = swarm_kernel(bumpy, box2(0.0, 400.0), swarm(9));
    CHECK(a.x == b.x);
    CHECK(a.value == b.value);

    BestResult short_run = swarm_kernel(bumpy, box2(0.0, 400.0), swarm(9, 10));
    CHECK(a.value >= short_run.value);  // the best of run is never lost
}

TEST_CASE("invalid bounds are rejected") {
    const Objective any = [](const std::vector<double>& x) { return x[0]; };
    CHECK_THROWS_AS(swarm_kernel(any, Box{{1.0}, {0.0}}, swarm(1)), InputError);
    CHECK_THROWS_AS(swarm_kernel(any, Box{{0.0}, {1.0, 2.0}}, swarm(1)), InputError);
}

TEST_CASE("single-state mt dispatch matches a 1 kW grid search") {
    MtFixture f;
    const int state = 1;  // priciest state, MT in window
    const std::vector<double> no_soc;

    double best_val = -std::numeric_limits<double>::infinity();
    double best_kw = 0.0;
    for (int kw = 0; kw <= 800; ++kw) {
        const StateSchedule s = clamp_schedule(f.ctx, state, {double(kw)}, no_soc);
        const StateEvaluation ev = evaluate_state(f.ctx, state, s);
        const double v = ev.ledger.fitness_value() - ev.penalty;
        if (v > best_val) {
            best_val = v;
            best_kw = kw;
        }
    }

    Individual got = optimize_state(f.ctx, state, no_soc, swarm(1), HerdOptimizer{});
    CHECK(got.fitness >= best_val - std::abs(best_val) * 0.01);
    // grid price far above marginal cost: the turbine should run flat out
    CHECK(best_kw == doctest::Approx(800.0));
    CHECK(got.genes[0] == doctest::Approx(800.0).epsilon(0.01));
}

TEST_CASE("mt stays off outside its window") {
    MtFixture f;
    const int state = 0;  // 0.03 $/kWh, below the 0.0455 threshold
    Individual got = optimize_state(f.ctx, state, {}, swarm(1), HerdOptimizer{});
    const StateSchedule s = clamp_schedule(f.ctx, state, got.genes, {});
    CHECK(s.mt_kw[0] == 0.0);
}

TEST_CASE("clamped schedule respects modes, caps and the soc chain") {
    CaseData network = load_case_file(std::string(GRIDSCHED_DATA_DIR) + "/case33.csv");
    DayContext ctx;
    ctx.network = &network;
    Bess b;
    b.node = 30;
    ctx.devices.bess.push_back(b);
    ctx.prices = PriceSignal::from_csv_file(std::string(GRIDSCHED_DATA_DIR) +
                                            "/prices_day.csv");
    ctx.plan = build_plan(ctx.devices.bess, {}, ctx.prices);
    ctx.profiles.load.assign(24, 0.7);
    ctx.profiles.spv.assign(24, 0.0);
    ctx.profiles.wt.assign(24, 0.0);

    // hour 1 is a full-cap charge state; the gene asks for more than the cap
    StateSchedule s = clamp_schedule(ctx, 1, {900.0}, {0.1});
    CHECK(s.bess_charge_kw[0] == doctest::Approx(500.0));
    CHECK(s.bess_discharge_kw[0] == 0.0);

    // hour 12 is standby regardless of the gene
    s = clamp_schedule(ctx, 12, {400.0}, {0.5});
    CHECK(s.bess_charge_kw[0] == 0.0);
    CHECK(s.bess_discharge_kw[0] == 0.0);

    // hour 18 discharges, but an empty battery has nothing to give
    s = clamp_schedule(ctx, 18, {500.0}, {0.1});
    CHECK(s.bess_discharge_kw[0] == 0.0);
    s = clamp_schedule(ctx, 18, {500.0}, {0.9});
    CHECK(s.bess_discharge_kw[0] == doctest::Approx(500.0));
}

TEST_CASE("a whole day optimizes with books that close") {
    RunConfig cfg;
    cfg.case_file = std::string(GRIDSCHED_DATA_DIR) + "/case33.csv";
    cfg.profiles_dir = std::string(GRIDSCHED_DATA_DIR) + "/profiles";
    cfg.prices_file = std::string(GRIDSCHED_DATA_DIR) + "/prices_day.csv";
    cfg.seed = 3;
    cfg.generations = 40;  // plenty for a smoke pass

    DayResult day = run_day(cfg);
    REQUIRE(day.ledgers.size() == 24);
    CHECK(day.report.dpf > 0.0);
    CHECK(day.report.energy.in_total ==
          doctest::Approx(day.report.energy.out_total).epsilon(1e-6));
    for (const auto& pf : day.flows) CHECK(pf.p_rev_kw == 0.0);
    for (const auto& soc_row : day.schedule.soc)
        for (double soc : soc_row) {
            CHECK(soc >= 0.1 - 1e-9);
            CHECK(soc <= 1.0 + 1e-9);
        }
}
