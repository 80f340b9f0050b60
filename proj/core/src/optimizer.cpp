#include "gridsched/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <random>

namespace gridsched {

BestResult HerdOptimizer::maximize(const Objective& objective, const Box& bounds,
                                   const SwarmConfig& cfg) const {
    const std::size_t dim = bounds.lower.size();
    if (bounds.upper.size() != dim) throw InputError("mismatched bound vectors");
    for (std::size_t d = 0; d < dim; ++d)
        if (!(bounds.lower[d] <= bounds.upper[d]) || !std::isfinite(bounds.lower[d]) ||
            !std::isfinite(bounds.upper[d]))
            throw InputError("bounds must be finite with lower <= upper");

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto clamp_to_box = [&](std::vector<double>& x) {
        for (std::size_t d = 0; d < dim; ++d)
            x[d] = std::clamp(x[d], bounds.lower[d], bounds.upper[d]);
    };
    const auto random_point = [&] {
        std::vector<double> x(dim);
        for (std::size_t d = 0; d < dim; ++d)
            x[d] = bounds.lower[d] + unit(rng) * (bounds.upper[d] - bounds.lower[d]);
        return x;
    };
    const auto safe_eval = [&](const std::vector<double>& x) {
        const double v = objective(x);
        if (std::isnan(v)) {
            std::cerr << "gridsched: objective returned NaN, candidate discarded\n";
            return -std::numeric_limits<double>::infinity();
        }
        return v;
    };

    const int pop = std::max(2, cfg.population);
    std::vector<std::vector<double>> pos(pop), vel(pop, std::vector<double>(dim, 0.0));
    std::vector<std::vector<double>> best_pos(pop);
    std::vector<double> best_val(pop);
    BestResult herd{std::vector<double>(dim, 0.0), -std::numeric_limits<double>::infinity()};
    for (int k = 0; k < pop; ++k) {
        pos[k] = random_point();
        best_pos[k] = pos[k];
        best_val[k] = safe_eval(pos[k]);
        if (best_val[k] > herd.value) herd = {pos[k], best_val[k]};
    }
    if (!std::isfinite(herd.value)) {
        // Every start point was discarded; report a feasible corner anyway.
        herd.x = bounds.lower;
        herd.value = safe_eval(herd.x);
    }

    constexpr double kInertia = 0.72;
    int stagnant = 0;
    for (int g = 0; g < std::max(1, cfg.generations); ++g) {
        const double prev_best = herd.value;
        for (int k = 0; k < pop; ++k) {
            for (std::size_t d = 0; d < dim; ++d) {
                vel[k][d] = kInertia * vel[k][d] +
                            cfg.exploration * unit(rng) * (herd.x[d] - pos[k][d]) +
                            cfg.exploitation * unit(rng) * (best_pos[k][d] - pos[k][d]);
                pos[k][d] += vel[k][d];
            }
            clamp_to_box(pos[k]);
            const double v = safe_eval(pos[k]);
            if (v > best_val[k]) {
                best_val[k] = v;
                best_pos[k] = pos[k];
            }
            if (v > herd.value) herd = {pos[k], v};
        }
        stagnant = herd.value > prev_best ? 0 : stagnant + 1;
        if (stagnant >= 15) {
            // Scatter the weaker half to keep exploring; the herd best is kept.
            std::vector<int> idx(pop);
            std::iota(idx.begin(), idx.end(), 0);
            std::sort(idx.begin(), idx.end(),
                      [&](int a, int b) { return best_val[a] < best_val[b]; });
            for (int k = 0; k < pop / 2; ++k) {
                pos[idx[k]] = random_point();
                std::fill(vel[idx[k]].begin(), vel[idx[k]].end(), 0.0);
            }
            stagnant = 0;
        }
    }
    return herd;
}

BestResult swarm_kernel(const Objective& objective, const Box& bounds, const SwarmConfig& cfg) {
    return HerdOptimizer{}.maximize(objective, bounds, cfg);
}

double state_demand_kw(const DayContext& ctx, int state) {
    return ctx.network->total_p_load_kw() * ctx.profiles.load[state] * ctx.peak_factor;
}

std::vector<double> renewable_outputs_kw(const DayContext& ctx, int state) {
    std::vector<double> out;
    out.reserve(ctx.devices.renewables.size());
    for (const RenewableUnit& u : ctx.devices.renewables)
        out.push_back(u.rating_kw * (u.kind == DerKind::Spv ? ctx.profiles.spv[state]
                                                            : ctx.profiles.wt[state]));
    return out;
}

Injections build_injections(const DayContext& ctx, int state, const StateSchedule& schedule) {
    Injections inj(ctx.network->buses.size());
    const auto outputs = renewable_outputs_kw(ctx, state);
    for (std::size_t u = 0; u < ctx.devices.renewables.size(); ++u)
        inj.p_kw[ctx.network->index_of(ctx.devices.renewables[u].node)] += outputs[u];
    for (std::size_t r = 0; r < ctx.devices.mts.size(); ++r)
        inj.p_kw[ctx.network->index_of(ctx.devices.mts[r].node)] += schedule.mt_kw[r];
    for (std::size_t b = 0; b < ctx.devices.bess.size(); ++b)
        inj.p_kw[ctx.network->index_of(ctx.devices.bess[b].node)] +=
            schedule.bess_discharge_kw[b] - schedule.bess_charge_kw[b];
    return inj;
}

StateSchedule clamp_schedule(const DayContext& ctx, int state,
                             const std::vector<double>& genes,
                             const std::vector<double>& soc_prev) {
    const std::size_t n_bess = ctx.devices.bess.size();
    StateSchedule s;
    s.bess_charge_kw.assign(n_bess, 0.0);
    s.bess_discharge_kw.assign(n_bess, 0.0);
    s.mt_kw.assign(ctx.devices.mts.size(), 0.0);
    for (std::size_t b = 0; b < n_bess; ++b) {
        const BessPlan& plan = ctx.plan.bess[b];
        const double requested = std::min(genes[b], plan.cap_kw[state]);
        switch (plan.mode[state]) {
            case Mode::Charge:
                s.bess_charge_kw[b] =
                    clamp_charge(ctx.devices.bess[b], soc_prev[b], requested, ctx.dt_h);
                break;
            case Mode::Discharge:
                s.bess_discharge_kw[b] =
                    clamp_discharge(ctx.devices.bess[b], soc_prev[b], requested, ctx.dt_h);
                break;
            case Mode::Standby:
                break;
        }
    }
    for (std::size_t r = 0; r < ctx.devices.mts.size(); ++r) {
        const auto [lo, hi] = mt_bounds(ctx.devices.mts[r],
                                        ctx.plan.mt_cap_kw[state] > 0.0);
        s.mt_kw[r] = std::clamp(genes[n_bess + r], lo, hi);
    }
    return s;
}

StateEvaluation evaluate_state(const DayContext& ctx, int state, const StateSchedule& schedule) {
    StateEvaluation ev;
    const double load_scale = ctx.profiles.load[state] * ctx.peak_factor;
    ev.pf = run_power_flow(*ctx.network, build_injections(ctx, state, schedule), load_scale,
                           ctx.pf_options);
    const StatePrices prices{ctx.prices.grid[state], ctx.prices.customer[state]};
    ev.ledger = state_profit(ctx.devices, schedule, renewable_outputs_kw(ctx, state),
                             state_demand_kw(ctx, state), prices, ev.pf,
                             ctx.plan.fictitious_price, ctx.dt_h);
    for (double v : ev.pf.v_mag_pu) {
        if (v < ctx.limits.v_min_pu)
            ev.penalty += ctx.penalty_voltage_per_pu * (ctx.limits.v_min_pu - v);
        else if (v > ctx.limits.v_max_pu)
            ev.penalty += ctx.penalty_voltage_per_pu * (v - ctx.limits.v_max_pu);
    }
    for (std::size_t j = 0; j < ev.pf.i_line_a.size(); ++j)
        if (ev.pf.i_line_a[j] > ctx.network->lines[j].ampacity_a)
            ev.penalty += ctx.penalty_current_per_100a *
                          (ev.pf.i_line_a[j] - ctx.network->lines[j].ampacity_a) / 100.0;
    if (ctx.reverse_constraint)
        ev.penalty += ctx.penalty_reverse_per_kw * ev.pf.p_rev_kw;
    return ev;
}

Individual optimize_state(const DayContext& ctx, int state, const std::vector<double>& soc_prev,
                          const SwarmConfig& cfg, const SwarmOptimizer& kernel) {
    const std::size_t n_bess = ctx.devices.bess.size();
    Box box;
    box.lower.assign(n_bess + ctx.devices.mts.size(), 0.0);
    box.upper.assign(n_bess + ctx.devices.mts.size(), 0.0);
    for (std::size_t b = 0; b < n_bess; ++b) box.upper[b] = ctx.plan.bess[b].cap_kw[state];
    for (std::size_t r = 0; r < ctx.devices.mts.size(); ++r)
        box.upper[n_bess + r] =
            mt_bounds(ctx.devices.mts[r], ctx.plan.mt_cap_kw[state] > 0.0).second;

    const auto evaluate_genes = [&](const std::vector<double>& genes) {
        const StateSchedule s = clamp_schedule(ctx, state, genes, soc_prev);
        const StateEvaluation ev = evaluate_state(ctx, state, s);
        return ev.ledger.fitness_value() - ev.penalty;
    };

    const bool degenerate =
        std::all_of(box.upper.begin(), box.upper.end(), [](double u) { return u <= 0.0; });
    if (degenerate) {
        const std::vector<double> zeros(box.upper.size(), 0.0);
        return {zeros, evaluate_genes(zeros)};
    }

    SwarmConfig state_cfg = cfg;
    state_cfg.seed = cfg.seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(state + 1);
    const BestResult best = kernel.maximize(evaluate_genes, box, state_cfg);
    return {best.x, best.value};
}

DayResult optimize_day(const DayContext& ctx, const SwarmConfig& cfg,
                       const std::string& strategy_tag, const SwarmOptimizer* kernel) {
    const HerdOptimizer default_kernel;
    const SwarmOptimizer& k = kernel ? *kernel : default_kernel;
    const std::size_t n_states = ctx.prices.states();
    const std::size_t n_bess = ctx.devices.bess.size();
    if (ctx.profiles.load.size() != n_states || ctx.profiles.spv.size() != n_states ||
        ctx.profiles.wt.size() != n_states)
        throw InputError("profiles and prices disagree on the state count");

    DayResult out;
    out.schedule.soc.assign(n_bess, std::vector<double>(n_states, 0.0));
    std::vector<double> soc(n_bess);
    for (std::size_t b = 0; b < n_bess; ++b) soc[b] = ctx.devices.bess[b].soc_init;

    std::vector<double> base_profile(n_states), res_profile(n_states), net_profile(n_states);
    for (std::size_t i = 0; i < n_states; ++i) {
        const int state = static_cast<int>(i);
        Individual best;
        try {
            best = optimize_state(ctx, state, soc, cfg, k);
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("state " + std::to_string(i) + ": " + e.what());
        }
        const StateSchedule schedule = clamp_schedule(ctx, state, best.genes, soc);
        const StateEvaluation ev = evaluate_state(ctx, state, schedule);
        for (std::size_t b = 0; b < n_bess; ++b) {
            soc[b] = soc_update(ctx.devices.bess[b], soc[b], schedule.bess_charge_kw[b],
                                schedule.bess_discharge_kw[b], ctx.dt_h);
            out.schedule.soc[b][i] = soc[b];
        }
        const auto outputs = renewable_outputs_kw(ctx, state);
        const double res_kw = std::accumulate(outputs.begin(), outputs.end(), 0.0);
        const double mt_kw =
            std::accumulate(schedule.mt_kw.begin(), schedule.mt_kw.end(), 0.0);
        base_profile[i] = state_demand_kw(ctx, state);
        res_profile[i] = base_profile[i] - res_kw;
        net_profile[i] = base_profile[i] - res_kw - mt_kw -
                         ev.ledger.energy.bess_discharge / ctx.dt_h +
                         ev.ledger.energy.bess_charge / ctx.dt_h;
        out.schedule.states.push_back(schedule);
        out.ledgers.push_back(ev.ledger);
        out.flows.push_back(ev.pf);
    }
    out.report =
        build_report(out.ledgers, base_profile, res_profile, net_profile, strategy_tag, cfg.seed);
    return out;
}

}  // namespace gridsched
