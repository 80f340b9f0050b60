#include "gridsched/dms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>

#include "gridsched/csv.hpp"

namespace gridsched {

double PriceSignal::mean_price() const {
    if (grid.empty()) throw InputError("price signal is empty");
    return std::accumulate(grid.begin(), grid.end(), 0.0) / static_cast<double>(grid.size());
}

PriceSignal PriceSignal::from_csv(std::istream& in, double markup) {
    PriceSignal p;
    for (const auto& row : csv::read_rows(in)) {
        char* end = nullptr;
        std::strtod(row[0].c_str(), &end);
        if (end == row[0].c_str()) continue;  // header row
        if (row.size() < 2) throw InputError("price row needs state,grid_price");
        p.grid.push_back(csv::to_double(row[1], "grid price"));
        p.customer.push_back(row.size() > 2 && !row[2].empty()
                                 ? csv::to_double(row[2], "customer price")
                                 : p.grid.back() * markup);
    }
    if (p.grid.empty()) throw InputError("price file has no data rows");
    return p;
}

PriceSignal PriceSignal::from_csv_file(const std::string& path, double markup) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open price file '" + path + "'");
    return from_csv(in, markup);
}

Partition partition_states(const PriceSignal& p) {
    const double mean = p.mean_price();
    Partition part;
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
        if (p.grid[i] < mean) part.charge.push_back(static_cast<int>(i));
        else if (p.grid[i] > mean) part.discharge.push_back(static_cast<int>(i));
        // exactly at the mean: standby
    }
    return part;
}

namespace {

// States ordered by price priority; equal prices break toward earlier states.
std::vector<int> by_priority(const std::vector<int>& states, const PriceSignal& p,
                             bool descending) {
    std::vector<int> sorted = states;
    std::stable_sort(sorted.begin(), sorted.end(), [&](int a, int b) {
        if (p.grid[a] != p.grid[b]) return descending ? p.grid[a] > p.grid[b]
                                                      : p.grid[a] < p.grid[b];
        return a < b;
    });
    return sorted;
}

// Full-rating caps for the first z priority states, then the remainder.
std::vector<double> assign_caps(std::size_t n_states, const std::vector<int>& priority,
                                double energy_kwh, double p_max_kw, double remainder_scale) {
    std::vector<double> caps(n_states, 0.0);
    const auto z = static_cast<std::size_t>(std::floor(energy_kwh / p_max_kw));
    std::size_t i = 0;
    for (; i < priority.size() && i < z; ++i) caps[priority[i]] = p_max_kw;
    if (i < priority.size()) {
        const double remainder_kw =
            (energy_kwh - static_cast<double>(i) * p_max_kw) * remainder_scale;
        caps[priority[i]] = std::clamp(remainder_kw, 0.0, p_max_kw);
    }
    return caps;
}

}  // namespace

std::vector<double> allocate_discharge_limits(const Bess& b, const PriceSignal& p,
                                              const std::vector<int>& t_discharge) {
    if (t_discharge.empty()) return std::vector<double>(p.states(), 0.0);
    return assign_caps(p.states(), by_priority(t_discharge, p, true), b.usable_kwh(),
                       b.p_max_discharge_kw, 1.0 / b.eta_discharge);
}

std::vector<double> allocate_charge_limits(const Bess& b, const PriceSignal& p,
                                           const std::vector<int>& t_charge) {
    if (t_charge.empty()) return std::vector<double>(p.states(), 0.0);
    // Headroom shrinks when the battery starts above its floor.
    const double headroom_kwh = (b.soc_max - std::max(b.soc_init, b.soc_min)) * b.capacity_kwh;
    return assign_caps(p.states(), by_priority(t_charge, p, false), headroom_kwh,
                       b.p_max_charge_kw, b.eta_charge);
}

std::vector<int> mt_window(const MicroTurbine& mt, const PriceSignal& p) {
    std::vector<int> window;
    for (std::size_t i = 0; i < p.grid.size(); ++i)
        if (p.grid[i] > mt.marginal_cost()) window.push_back(static_cast<int>(i));
    return window;
}

double fictitious_price(const PriceSignal& p) { return p.mean_price(); }

namespace {

BessPlan plan_from_caps(std::size_t n, const std::vector<double>& charge_caps,
                        const std::vector<double>& discharge_caps) {
    BessPlan plan;
    plan.mode.assign(n, Mode::Standby);
    plan.cap_kw.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (charge_caps[i] > 0.0) {
            plan.mode[i] = Mode::Charge;
            plan.cap_kw[i] = charge_caps[i];
        } else if (discharge_caps[i] > 0.0) {
            plan.mode[i] = Mode::Discharge;
            plan.cap_kw[i] = discharge_caps[i];
        }
    }
    return plan;
}

std::vector<double> mt_caps(const std::vector<MicroTurbine>& mts, const PriceSignal& p,
                            std::vector<int>& window_out) {
    std::vector<double> caps(p.states(), 0.0);
    if (mts.empty()) return caps;
    window_out = mt_window(mts.front(), p);
    // A single utility MT is modeled; with several the windows coincide per unit.
    for (int i : window_out)
        for (const MicroTurbine& mt : mts) caps[i] += mt.dispatchable_kw();
    return caps;
}

}  // namespace

DmsPlan build_plan(const std::vector<Bess>& bess, const std::vector<MicroTurbine>& mts,
                   const PriceSignal& p) {
    const Partition part = partition_states(p);
    DmsPlan plan;
    plan.charge_states = part.charge;
    plan.discharge_states = part.discharge;
    plan.fictitious_price = fictitious_price(p);
    for (const Bess& b : bess)
        plan.bess.push_back(plan_from_caps(p.states(), allocate_charge_limits(b, p, part.charge),
                                           allocate_discharge_limits(b, p, part.discharge)));
    plan.mt_cap_kw = mt_caps(mts, p, plan.mt_states);
    return plan;
}

DmsPlan build_fixed_window_plan(const std::vector<Bess>& bess,
                                const std::vector<MicroTurbine>& mts, const PriceSignal& p) {
    const Partition part = partition_states(p);
    DmsPlan plan;
    plan.charge_states = part.charge;
    plan.fictitious_price = fictitious_price(p);
    const std::size_t n = p.states();
    for (const Bess& b : bess) {
        const auto charge_caps = allocate_charge_limits(b, p, part.charge);
        int last_charge = -1;
        for (std::size_t i = 0; i < n; ++i)
            if (charge_caps[i] > 0.0) last_charge = static_cast<int>(i);
        // Discharge in consecutive states right after the charging block.
        std::vector<int> window;
        for (int i = last_charge + 1; i < static_cast<int>(n); ++i) window.push_back(i);
        std::vector<double> discharge_caps(n, 0.0);
        if (!window.empty())
            discharge_caps = assign_caps(n, window, b.usable_kwh(), b.p_max_discharge_kw,
                                         1.0 / b.eta_discharge);
        for (std::size_t i = 0; i < n; ++i)
            if (discharge_caps[i] > 0.0 &&
                std::find(plan.discharge_states.begin(), plan.discharge_states.end(),
                          static_cast<int>(i)) == plan.discharge_states.end())
                plan.discharge_states.push_back(static_cast<int>(i));
        plan.bess.push_back(plan_from_caps(n, charge_caps, discharge_caps));
    }
    plan.mt_cap_kw = mt_caps(mts, p, plan.mt_states);
    return plan;
}

}  // namespace gridsched
