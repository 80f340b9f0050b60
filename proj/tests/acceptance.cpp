// Acceptance checks for the scheduling engine. Each criterion prints one
// PASS/FAIL line; the process exits nonzero if any criterion fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "gridsched/runner.hpp"
#include "gridsched/uncertainty.hpp"

using namespace gridsched;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %-24s %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    if (!ok) ++g_failures;
}

std::string data(const std::string& leaf) { return std::string(GRIDSCHED_DATA_DIR) + "/" + leaf; }

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

RunConfig bundled_config(const std::string& strategy, std::uint64_t seed) {
    RunConfig cfg;
    cfg.case_file = data("case33.csv");
    cfg.profiles_dir = data("profiles");
    cfg.prices_file = data("prices_day.csv");
    cfg.strategy = strategy;
    cfg.seed = seed;
    return cfg;
}

// --- criterion 1: power-flow regression --------------------------------

void check_power_flow() {
    const auto t0 = Clock::now();
    CaseData c = load_case_file(data("case33.csv"));
    Injections inj(c.buses.size());
    PowerFlowResult pf = run_power_flow(c, inj);
    const double elapsed = seconds_since(t0);

    const double vmin = *std::min_element(pf.v_mag_pu.begin(), pf.v_mag_pu.end());
    const bool ok = std::abs(pf.p_loss_kw - 202.67) / 202.67 < 0.01 &&
                    std::abs(vmin - 0.9131) < 0.001 && elapsed < 1.0;
    char buf[128];
    std::snprintf(buf, sizeof buf, "loss %.2f kW (ref 202.67, tol 1%%), vmin %.4f (ref 0.9131, tol 0.001), %.3f s",
                  pf.p_loss_kw, vmin, elapsed);
    report("power-flow regression", ok, buf);
}

// --- criterion 2: price partition ---------------------------------------

void check_partition() {
    PriceSignal p = PriceSignal::from_csv_file(data("prices_day.csv"));
    Partition part = partition_states(p);
    std::vector<int> expect(14);
    std::iota(expect.begin(), expect.end(), 9);
    const bool ok = part.discharge == expect;
    report("price partition", ok,
           ok ? "discharge window is states 9..22 exactly"
              : "discharge window differs from states 9..22");
}

// --- criterion 3: allocation closure ------------------------------------

double brute_force_best(const std::vector<double>& prices, double full_kw, int z, double rem_kw) {
    const int m = static_cast<int>(prices.size());
    double best = -1.0;
    for (int mask = 0; mask < (1 << m); ++mask) {
        if (std::popcount(static_cast<unsigned>(mask)) != z) continue;
        for (int r = 0; r < m; ++r) {
            if ((mask >> r) & 1) continue;
            double v = rem_kw * prices[r];
            for (int i = 0; i < m; ++i)
                if ((mask >> i) & 1) v += full_kw * prices[i];
            best = std::max(best, v);
        }
    }
    return best;
}

void check_allocation() {
    Bess b;
    PriceSignal p = PriceSignal::from_csv_file(data("prices_day.csv"));
    Partition part = partition_states(p);
    bool ok = true;
    std::string why = "caps 5x500 + 216.93 / 5x500 + 184.39; greedy = exhaustive oracle";

    const auto count = [&](const std::vector<double>& caps, const std::vector<int>& states,
                           double expect_rem) {
        int full = 0, partial = 0;
        double rem = 0.0;
        for (int s : states) {
            if (std::abs(caps[s] - 500.0) < 1e-9) ++full;
            else if (caps[s] > 0.0) { ++partial; rem = caps[s]; }
        }
        return full == 5 && partial == 1 && std::abs(rem - expect_rem) < 0.01;
    };
    if (!count(allocate_discharge_limits(b, p, part.discharge), part.discharge, 216.93)) {
        ok = false;
        why = "discharge caps are not five 500 kW states plus 216.93 kW";
    }
    if (!count(allocate_charge_limits(b, p, part.charge), part.charge, 184.39)) {
        ok = false;
        why = "charge caps are not five 500 kW states plus 184.39 kW";
    }

    // greedy vs exhaustive on small instances
    Bess small;
    small.capacity_kwh = 1000.0;  // usable 900 -> one full state + remainder
    const std::vector<std::vector<double>> instances = {
        {0.08, 0.09, 0.10, 0.11, 0.12, 0.13},
        {0.13, 0.08, 0.11, 0.09, 0.12, 0.10},
        {0.10, 0.10, 0.10, 0.10, 0.10},
        {0.07, 0.14, 0.09},
    };
    for (const auto& inst : instances) {
        PriceSignal ps;
        ps.grid = inst;
        for (double g : inst) ps.customer.push_back(g * 1.05);
        std::vector<int> t_d(inst.size());
        std::iota(t_d.begin(), t_d.end(), 0);
        const std::vector<double> caps = allocate_discharge_limits(small, ps, t_d);
        double value = 0.0;
        for (std::size_t s = 0; s < inst.size(); ++s) value += caps[s] * inst[s];
        const double usable = small.usable_kwh();
        const int z = static_cast<int>(usable / small.p_max_discharge_kw);
        const double rem = std::min(
            (usable - z * small.p_max_discharge_kw) / small.eta_discharge,
            small.p_max_discharge_kw);
        if (std::abs(value - brute_force_best(inst, small.p_max_discharge_kw, z, rem)) > 1e-9) {
            ok = false;
            why = "greedy allocation is not optimal on a small instance";
        }
    }
    report("allocation closure", ok, why);
}

// --- criterion 4: fictitious-charge neutrality --------------------------

void check_fc_neutrality() {
    Devices d;
    d.bess.assign(3, Bess{});
    d.mts.push_back(MicroTurbine{});
    d.renewables.push_back({17, DerKind::Spv, 2000.0, 0.028});
    d.renewables.push_back({30, DerKind::Wt, 2000.0, 0.029});

    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> kw(0.0, 500.0);
    std::uniform_real_distribution<double> price(0.03, 0.12);

    double worst = 0.0;
    for (int run = 0; run < 1000; ++run) {
        std::vector<StateLedger> with_fc, no_fc;
        for (int s = 0; s < 24; ++s) {
            StateSchedule sch;
            sch.bess_charge_kw.assign(3, 0.0);
            sch.bess_discharge_kw.assign(3, 0.0);
            sch.mt_kw = {kw(rng)};
            for (int b = 0; b < 3; ++b) {
                if (rng() & 1) sch.bess_charge_kw[b] = kw(rng);
                else sch.bess_discharge_kw[b] = kw(rng);
            }
            const std::vector<double> res = {kw(rng), kw(rng)};
            const double demand = 2500.0 + kw(rng);
            StatePrices pr{price(rng), 1.05 * price(rng)};
            PowerFlowResult pf;
            pf.p_loss_kw = 45.0;
            pf.p_grid_kw = demand + kw(rng);
            with_fc.push_back(state_profit(d, sch, res, demand, pr, pf, 0.067));
            no_fc.push_back(state_profit(d, sch, res, demand, pr, pf, 0.0));
        }
        worst = std::max(worst, std::abs(daily_profit(with_fc) - daily_profit(no_fc)));
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "max DPF shift over 1000 schedules: %.2e $ (tol 1e-9)", worst);
    report("fc neutrality", worst < 1e-9, buf);
}

// --- criterion 5: SOC invariants ----------------------------------------

void check_soc_invariants() {
    Bess b;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> req(0.0, 900.0);
    std::uniform_int_distribution<int> mode(0, 2);

    bool bounded = true, standby_ok = true;
    double soc = b.soc_init;
    for (int i = 0; i < 10000; ++i) {
        double c = 0.0, dis = 0.0;
        const int m = mode(rng);
        if (m == 0) c = clamp_charge(b, soc, req(rng));
        else if (m == 1) dis = clamp_discharge(b, soc, req(rng));
        const double next = soc_update(b, soc, c, dis);
        if (next < b.soc_min - 1e-12 || next > b.soc_max + 1e-12) bounded = false;
        if (m == 2 && next != soc) standby_ok = false;
        soc = next;
    }

    // full cycle round trip
    soc = b.soc_min;
    double in_kwh = 0.0, out_kwh = 0.0;
    while (soc < b.soc_max - 1e-12) {
        const double c = clamp_charge(b, soc, b.p_max_charge_kw);
        in_kwh += c;
        soc = soc_update(b, soc, c, 0.0);
    }
    while (soc > b.soc_min + 1e-12) {
        const double dis = clamp_discharge(b, soc, b.p_max_discharge_kw);
        out_kwh += dis;
        soc = soc_update(b, soc, 0.0, dis);
    }
    const double rt = out_kwh / in_kwh;
    const bool ok = bounded && standby_ok && std::abs(rt - 0.85) < 1e-6;
    char buf[96];
    std::snprintf(buf, sizeof buf, "10^4 steps in bounds: %s, standby inert: %s, round trip %.8f",
                  bounded ? "yes" : "no", standby_ok ? "yes" : "no", rt);
    report("soc invariants", ok, buf);
}

// --- criterion 6: optimizer vs grid search ------------------------------

void check_optimizer_oracle() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string why;

    // sphere sanity, median error over 30 seeds
    {
        const std::vector<double> target = {130.0, 310.0};
        const Objective sphere = [&](const std::vector<double>& x) {
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i)
                s += (x[i] - target[i]) * (x[i] - target[i]);
            return -s;
        };
        std::vector<double> errs;
        for (std::uint64_t seed = 1; seed <= 30; ++seed) {
            SwarmConfig cfg;
            cfg.seed = seed;
            BestResult r = swarm_kernel(sphere, {{0.0, 0.0}, {500.0, 500.0}}, cfg);
            errs.push_back(std::sqrt(-r.value));
        }
        std::sort(errs.begin(), errs.end());
        if (errs[15] >= 1e-2) {
            ok = false;
            why = "sphere median error " + std::to_string(errs[15]);
        }
    }

    // single-state instances against a 1 kW grid search
    CaseData network = load_case_file(data("case33.csv"));
    DayContext ctx;
    ctx.network = &network;
    MicroTurbine mt;
    mt.node = 25;
    ctx.devices.mts.push_back(mt);
    Bess bess;
    bess.node = 30;
    ctx.devices.bess.push_back(bess);
    ctx.prices = PriceSignal::from_csv_file(data("prices_day.csv"));
    ctx.plan = build_plan(ctx.devices.bess, ctx.devices.mts, ctx.prices);
    ctx.profiles.load.assign(24, 0.8);
    ctx.profiles.spv.assign(24, 0.0);
    ctx.profiles.wt.assign(24, 0.0);

    const auto value_of = [&](int state, const std::vector<double>& genes,
                              const std::vector<double>& soc) {
        const StateSchedule s = clamp_schedule(ctx, state, genes, soc);
        const StateEvaluation ev = evaluate_state(ctx, state, s);
        return ev.ledger.fitness_value() - ev.penalty;
    };

    {
        // one variable: MT alone in a standby state for the BESS
        const int state = 12;
        const std::vector<double> soc = {0.5};
        double best = -std::numeric_limits<double>::infinity();
        for (int m = 0; m <= 800; ++m)
            best = std::max(best, value_of(state, {0.0, double(m)}, soc));
        Individual got = optimize_state(ctx, state, soc, SwarmConfig{}, HerdOptimizer{});
        if (got.fitness < best - std::abs(best) * 0.01) {
            ok = false;
            why = "1-var instance: swarm " + std::to_string(got.fitness) + " vs grid " +
                  std::to_string(best);
        }
    }
    {
        // two variables: BESS discharge cap 500 and MT 800 in a peak state
        const int state = 19;
        const std::vector<double> soc = {0.9};
        double best = -std::numeric_limits<double>::infinity();
        for (int bkw = 0; bkw <= 500; ++bkw)
            for (int m = 0; m <= 800; m += 1)
                best = std::max(best, value_of(state, {double(bkw), double(m)}, soc));
        Individual got = optimize_state(ctx, state, soc, SwarmConfig{}, HerdOptimizer{});
        if (got.fitness < best - std::abs(best) * 0.01) {
            ok = false;
            why = "2-var instance: swarm " + std::to_string(got.fitness) + " vs grid " +
                  std::to_string(best);
        }
    }

    const double elapsed = seconds_since(t0);
    if (elapsed >= 30.0) {
        ok = false;
        why = "took " + std::to_string(elapsed) + " s";
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "within 1%% of 1 kW grid search, %.1f s (limit 30 s)", elapsed);
    report("optimizer oracle", ok, why.empty() ? buf : why.c_str());
}

// --- criteria 7 and 8: day behavior and strategy comparison -------------

void check_day_and_comparison() {
    DayResult mpas;
    DayResult fixed;
    try {
        mpas = run_day(bundled_config("mpas", 1));
        fixed = run_day(bundled_config("fixed-window", 1));
    } catch (const std::exception& e) {
        report("sequential behavior", false, std::string("day run failed: ") + e.what());
        report("strategy comparison", false, "day run failed");
        return;
    }

    PriceSignal p = PriceSignal::from_csv_file(data("prices_day.csv"));
    const double mean = p.mean_price();
    bool placement_ok = true, reverse_ok = true;
    bool any_charge = false, any_discharge = false, any_standby_gap = false;
    int first_discharge = -1, last_charge = -1;
    for (std::size_t s = 0; s < mpas.schedule.states.size(); ++s) {
        const StateSchedule& st = mpas.schedule.states[s];
        const double c = std::accumulate(st.bess_charge_kw.begin(), st.bess_charge_kw.end(), 0.0);
        const double dis =
            std::accumulate(st.bess_discharge_kw.begin(), st.bess_discharge_kw.end(), 0.0);
        if (c > 0.0) {
            any_charge = true;
            last_charge = static_cast<int>(s);
            if (!(p.grid[s] < mean)) placement_ok = false;
        }
        if (dis > 0.0) {
            any_discharge = true;
            if (first_discharge < 0) first_discharge = static_cast<int>(s);
            if (!(p.grid[s] > mean)) placement_ok = false;
        }
        if (mpas.flows[s].p_rev_kw != 0.0) reverse_ok = false;
    }
    for (int s = last_charge + 1; s < first_discharge; ++s) {
        const StateSchedule& st = mpas.schedule.states[s];
        const double moved =
            std::accumulate(st.bess_charge_kw.begin(), st.bess_charge_kw.end(), 0.0) +
            std::accumulate(st.bess_discharge_kw.begin(), st.bess_discharge_kw.end(), 0.0);
        if (moved == 0.0) any_standby_gap = true;
    }

    const bool seq_ok =
        placement_ok && reverse_ok && any_charge && any_discharge && any_standby_gap;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "charge below mean: %s, discharge above mean: %s, standby gap: %s, zero back-feed: %s",
                  placement_ok && any_charge ? "yes" : "no",
                  placement_ok && any_discharge ? "yes" : "no", any_standby_gap ? "yes" : "no",
                  reverse_ok ? "yes" : "no");
    report("sequential behavior", seq_ok, buf);

    // strategy comparison plus report completeness and closure
    bool cmp_ok = mpas.report.dpf >= fixed.report.dpf;
    const std::string text = report_to_text(mpas.report);
    for (const char* item :
         {"Grid", "SPV", "WT", "MT fuel", "MT O&M", "BESS O&M", "Cost of consumption",
          "Cost of losses", "Profit", "BESS discharge", "BESS charge", "Loss", "Billing", "LDI",
          "Peak", "valley"})
        if (text.find(item) == std::string::npos) cmp_ok = false;
    const auto& e = mpas.report.energy;
    const auto& m = mpas.report.money;
    if (std::abs(e.in_total - e.out_total) > 1e-3) cmp_ok = false;
    if (std::abs(m.revenue - m.payments - m.profit) > 1e-3) cmp_ok = false;
    std::snprintf(buf, sizeof buf,
                  "DPF mpas %.2f >= fixed-window %.2f (+%.2f%%), books close within 1e-3",
                  mpas.report.dpf, fixed.report.dpf,
                  100.0 * (mpas.report.dpf - fixed.report.dpf) / fixed.report.dpf);
    report("strategy comparison", cmp_ok, buf);
}

// --- criterion 9: uncertainty containment -------------------------------

void check_uncertainty() {
    bool ok = true;
    std::string why;
    for (const char* name : {"load", "spv", "wt"}) {
        HistoricalSeries h =
            HistoricalSeries::from_csv_file(data(std::string("profiles/") + name + ".csv"));
        UncertaintyEnvelope env = build_envelope(h, 1.0);
        // ~3333 seeds per profile, 10^4 synthetic days overall
        for (std::uint64_t seed = 0; seed < 3334 && ok; ++seed) {
            const std::vector<double> day = synthesize_day(env, seed);
            double total = 0.0;
            for (std::size_t s = 0; s < day.size(); ++s) {
                if (day[s] < env.lower[s] - 1e-12 || day[s] > env.upper[s] + 1e-12) {
                    ok = false;
                    why = std::string(name) + ": state bound violated";
                }
                total += day[s];
            }
            const double avg = total / static_cast<double>(day.size());
            if (avg < env.day_lower - 1e-9 || avg > env.day_upper + 1e-9) {
                ok = false;
                why = std::string(name) + ": daily budget violated";
            }
        }
    }

    // zero spread reproduces history
    HistoricalSeries flat;
    flat.values = {{0.25, 0.5, 0.75, 0.6}, {0.25, 0.5, 0.75, 0.6}};
    UncertaintyEnvelope env0 = build_envelope(flat, 1.0);
    const std::vector<double> day0 = synthesize_day(env0, 7);
    for (std::size_t s = 0; s < day0.size(); ++s)
        if (day0[s] != flat.values[0][s]) {
            ok = false;
            why = "zero-spread day differs from history";
        }
    report("uncertainty containment", ok,
           ok ? "10^4 synthetic days inside both budgets; zero spread is exact" : why);
}

}  // namespace

int main() {
    check_power_flow();
    check_partition();
    check_allocation();
    check_fc_neutrality();
    check_soc_invariants();
    check_optimizer_oracle();
    check_day_and_comparison();
    check_uncertainty();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
