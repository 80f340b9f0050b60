#include "gridsched/economics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace gridsched {

StateLedger state_profit(const Devices& devices, const StateSchedule& schedule,
                         const std::vector<double>& renewable_kw, double demand_kw,
                         const StatePrices& prices, const PowerFlowResult& pf,
                         double fc_price, double dt_h) {
    if (renewable_kw.size() != devices.renewables.size())
        throw InputError("renewable output vector does not match the device list");
    StateLedger led;
    led.energy.billing = demand_kw * dt_h;
    led.energy.loss = pf.p_loss_kw * dt_h;
    led.energy.grid = pf.p_grid_kw * dt_h;
    led.energy.mt =
        std::accumulate(schedule.mt_kw.begin(), schedule.mt_kw.end(), 0.0) * dt_h;
    led.energy.bess_charge = std::accumulate(schedule.bess_charge_kw.begin(),
                                             schedule.bess_charge_kw.end(), 0.0) * dt_h;
    led.energy.bess_discharge = std::accumulate(schedule.bess_discharge_kw.begin(),
                                                schedule.bess_discharge_kw.end(), 0.0) * dt_h;

    // Revenue: customer billing, losses billed at the grid price, plus the
    // fictitious credit on BESS charging.
    led.billing = led.energy.billing * prices.customer;
    led.loss_cost = led.energy.loss * prices.grid;
    led.fc_credit = fc_price * led.energy.bess_charge;

    // Payments: grid purchase, contract tariffs, MT fuel and O&M, BESS O&M
    // on both directions, plus the fictitious debit on discharging.
    led.grid = led.energy.grid * prices.grid;
    for (std::size_t u = 0; u < devices.renewables.size(); ++u) {
        const double e = renewable_kw[u] * dt_h;
        if (devices.renewables[u].kind == DerKind::Spv) {
            led.energy.spv += e;
            led.spv += e * devices.renewables[u].price;
        } else {
            led.energy.wt += e;
            led.wt += e * devices.renewables[u].price;
        }
    }
    for (std::size_t r = 0; r < schedule.mt_kw.size(); ++r) {
        const double e = schedule.mt_kw[r] * dt_h;
        led.mt_fuel += e * devices.mts[r].fuel_price;
        led.mt_om += e * devices.mts[r].om_price;
    }
    for (std::size_t b = 0; b < schedule.bess_charge_kw.size(); ++b)
        led.bess_om += (schedule.bess_charge_kw[b] + schedule.bess_discharge_kw[b]) * dt_h *
                       devices.bess[b].om_price;
    led.fc_debit = fc_price * led.energy.bess_discharge;
    return led;
}

double fitness(const StateLedger& ledger) { return ledger.fitness_value(); }

double daily_profit(const std::vector<StateLedger>& ledgers) {
    return std::accumulate(ledgers.begin(), ledgers.end(), 0.0,
                           [](double a, const StateLedger& l) { return a + l.objective(); });
}

std::vector<Violation> check_constraints(const PowerFlowResult& pf, const CaseData& c,
                                         const Devices& devices, const StateSchedule& schedule,
                                         const ConstraintLimits& limits) {
    std::vector<Violation> v;
    for (std::size_t k = 0; k < pf.v_mag_pu.size(); ++k) {
        if (pf.v_mag_pu[k] < limits.v_min_pu)
            v.push_back({Violation::Kind::Voltage, static_cast<int>(k),
                         limits.v_min_pu - pf.v_mag_pu[k]});
        else if (pf.v_mag_pu[k] > limits.v_max_pu)
            v.push_back({Violation::Kind::Voltage, static_cast<int>(k),
                         pf.v_mag_pu[k] - limits.v_max_pu});
    }
    for (std::size_t j = 0; j < pf.i_line_a.size(); ++j)
        if (pf.i_line_a[j] > c.lines[j].ampacity_a)
            v.push_back({Violation::Kind::Current, static_cast<int>(j),
                         pf.i_line_a[j] - c.lines[j].ampacity_a});
    for (std::size_t b = 0; b < schedule.bess_charge_kw.size(); ++b) {
        const double over_c = schedule.bess_charge_kw[b] - devices.bess[b].p_max_charge_kw;
        const double over_d = schedule.bess_discharge_kw[b] - devices.bess[b].p_max_discharge_kw;
        const double over = std::max({over_c, over_d, -schedule.bess_charge_kw[b],
                                      -schedule.bess_discharge_kw[b]});
        if (over > 1e-9) v.push_back({Violation::Kind::Device, static_cast<int>(b), over});
    }
    for (std::size_t r = 0; r < schedule.mt_kw.size(); ++r) {
        const double over =
            std::max(schedule.mt_kw[r] - devices.mts[r].dispatchable_kw(), -schedule.mt_kw[r]);
        if (over > 1e-9)
            v.push_back({Violation::Kind::Device,
                         static_cast<int>(schedule.bess_charge_kw.size() + r), over});
    }
    if (limits.reverse_power && pf.p_rev_kw > 1e-6)
        v.push_back({Violation::Kind::ReversePower, 0, pf.p_rev_kw});
    return v;
}

double load_deviation_index(const std::vector<double>& profile_kw) {
    if (profile_kw.size() < 2) throw InputError("LDI needs at least two states");
    const double n = static_cast<double>(profile_kw.size());
    const double mean = std::accumulate(profile_kw.begin(), profile_kw.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : profile_kw) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / n);
}

namespace {
void profile_stats(const std::vector<double>& p, double& peak, int& peak_h, double& valley,
                   int& valley_h, double& mean) {
    const auto mx = std::max_element(p.begin(), p.end());
    const auto mn = std::min_element(p.begin(), p.end());
    peak = *mx;
    peak_h = static_cast<int>(mx - p.begin());
    valley = *mn;
    valley_h = static_cast<int>(mn - p.begin());
    mean = std::accumulate(p.begin(), p.end(), 0.0) / static_cast<double>(p.size());
}
}  // namespace

DayReport build_report(const std::vector<StateLedger>& ledgers,
                       const std::vector<double>& profile_base_kw,
                       const std::vector<double>& profile_res_kw,
                       const std::vector<double>& profile_net_kw,
                       const std::string& strategy, std::uint64_t seed) {
    DayReport r;
    r.strategy = strategy;
    r.seed = seed;
    r.states = ledgers;
    r.dpf = daily_profit(ledgers);
    for (const StateLedger& l : ledgers) {
        r.money.grid += l.grid;
        r.money.spv += l.spv;
        r.money.wt += l.wt;
        r.money.mt_fuel += l.mt_fuel;
        r.money.mt_om += l.mt_om;
        r.money.bess_om += l.bess_om;
        r.money.billing += l.billing;
        r.money.loss_cost += l.loss_cost;
        r.energy.grid += l.energy.grid;
        r.energy.spv += l.energy.spv;
        r.energy.wt += l.energy.wt;
        r.energy.mt += l.energy.mt;
        r.energy.bess_discharge += l.energy.bess_discharge;
        r.energy.billing += l.energy.billing;
        r.energy.loss += l.energy.loss;
        r.energy.bess_charge += l.energy.bess_charge;
    }
    r.money.payments = r.money.grid + r.money.spv + r.money.wt + r.money.mt_fuel +
                       r.money.mt_om + r.money.bess_om;
    r.money.revenue = r.money.billing + r.money.loss_cost;
    r.money.profit = r.money.revenue - r.money.payments;
    r.energy.in_total =
        r.energy.grid + r.energy.spv + r.energy.wt + r.energy.mt + r.energy.bess_discharge;
    r.energy.out_total = r.energy.billing + r.energy.loss + r.energy.bess_charge;

    if (std::abs(r.energy.in_total - r.energy.out_total) > 1e-3)
        throw AccountingError("energy books do not balance: in " +
                              std::to_string(r.energy.in_total) + " kWh vs out " +
                              std::to_string(r.energy.out_total) + " kWh");
    if (std::abs(r.money.payments + r.money.profit - r.money.revenue) > 1e-3)
        throw AccountingError("currency books do not balance");
    if (std::abs(r.money.profit - r.dpf) > 1e-6)
        throw AccountingError("aggregate profit disagrees with the per-state objective sum");

    r.profile_base_kw = profile_base_kw;
    r.profile_res_kw = profile_res_kw;
    r.profile_net_kw = profile_net_kw;
    r.ldi.base = load_deviation_index(profile_base_kw);
    r.ldi.with_res = load_deviation_index(profile_res_kw);
    r.ldi.net = load_deviation_index(profile_net_kw);
    profile_stats(profile_base_kw, r.shift.peak_base, r.shift.peak_hour_base,
                  r.shift.valley_base, r.shift.valley_hour_base, r.shift.mean_base);
    profile_stats(profile_net_kw, r.shift.peak_net, r.shift.peak_hour_net, r.shift.valley_net,
                  r.shift.valley_hour_net, r.shift.mean_net);
    return r;
}

std::string report_to_json(const DayReport& r) {
    nlohmann::json j;
    j["strategy"] = r.strategy;
    j["seed"] = r.seed;
    j["dpf_usd"] = r.dpf;
    j["payments_usd"] = {{"grid", r.money.grid},       {"spv", r.money.spv},
                         {"wt", r.money.wt},           {"mt_fuel", r.money.mt_fuel},
                         {"mt_om", r.money.mt_om},     {"bess_om", r.money.bess_om},
                         {"total", r.money.payments}};
    j["revenue_usd"] = {{"billing", r.money.billing},
                        {"loss_cost", r.money.loss_cost},
                        {"total", r.money.revenue}};
    j["energy_kwh"] = {{"purchased", {{"grid", r.energy.grid}, {"spv", r.energy.spv},
                                      {"wt", r.energy.wt}}},
                       {"supplied", {{"mt", r.energy.mt},
                                     {"bess_discharge", r.energy.bess_discharge}}},
                       {"in_total", r.energy.in_total},
                       {"consumed", {{"billing", r.energy.billing}, {"loss", r.energy.loss},
                                     {"bess_charge", r.energy.bess_charge}}},
                       {"out_total", r.energy.out_total}};
    j["ldi_kw"] = {{"base", r.ldi.base}, {"with_res", r.ldi.with_res}, {"net", r.ldi.net}};
    j["shift"] = {{"peak_base_kw", r.shift.peak_base},
                  {"peak_net_kw", r.shift.peak_net},
                  {"valley_base_kw", r.shift.valley_base},
                  {"valley_net_kw", r.shift.valley_net},
                  {"mean_base_kw", r.shift.mean_base},
                  {"mean_net_kw", r.shift.mean_net},
                  {"peak_hour_base", r.shift.peak_hour_base},
                  {"peak_hour_net", r.shift.peak_hour_net},
                  {"valley_hour_base", r.shift.valley_hour_base},
                  {"valley_hour_net", r.shift.valley_hour_net}};
    nlohmann::json states = nlohmann::json::array();
    for (std::size_t i = 0; i < r.states.size(); ++i) {
        const StateLedger& l = r.states[i];
        states.push_back({{"state", i},
                          {"revenue", l.revenue()},
                          {"payments", l.payments()},
                          {"fc", l.fc()},
                          {"profit", l.objective()},
                          {"energy",
                           {{"grid", l.energy.grid},
                            {"spv", l.energy.spv},
                            {"wt", l.energy.wt},
                            {"mt", l.energy.mt},
                            {"bess_charge", l.energy.bess_charge},
                            {"bess_discharge", l.energy.bess_discharge},
                            {"billing", l.energy.billing},
                            {"loss", l.energy.loss}}}});
    }
    j["states"] = states;
    return j.dump(2);
}

namespace {
std::string money_row(const char* name, double usd, double total) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "  %-18s %10.2f  %6.2f%%\n", name, usd,
                  total > 0.0 ? 100.0 * usd / total : 0.0);
    return buf;
}
std::string energy_row(const char* name, double kwh, double total) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "  %-18s %12.2f  %6.2f%%\n", name, kwh,
                  total > 0.0 ? 100.0 * kwh / total : 0.0);
    return buf;
}
}  // namespace

std::string report_to_text(const DayReport& r) {
    std::ostringstream os;
    char buf[128];
    os << "Day report (strategy " << r.strategy << ", seed " << r.seed << ")\n\n";
    os << "Payments (US$)\n";
    os << money_row("Grid", r.money.grid, r.money.payments);
    os << money_row("SPV", r.money.spv, r.money.payments);
    os << money_row("WT", r.money.wt, r.money.payments);
    os << money_row("MT fuel", r.money.mt_fuel, r.money.payments);
    os << money_row("MT O&M", r.money.mt_om, r.money.payments);
    os << money_row("BESS O&M", r.money.bess_om, r.money.payments);
    std::snprintf(buf, sizeof(buf), "  %-18s %10.2f\n", "Total", r.money.payments);
    os << buf << "Revenue (US$)\n";
    os << money_row("Cost of consumption", r.money.billing, r.money.revenue);
    os << money_row("Cost of losses", r.money.loss_cost, r.money.revenue);
    std::snprintf(buf, sizeof(buf), "  %-18s %10.2f\n", "Total", r.money.revenue);
    os << buf;
    std::snprintf(buf, sizeof(buf), "Profit (US$)      %12.2f  (%.2f%% of payments)\n\n",
                  r.money.profit,
                  r.money.payments > 0.0 ? 100.0 * r.money.profit / r.money.payments : 0.0);
    os << buf << "Energy purchased/supplied (kWh)\n";
    os << energy_row("Grid", r.energy.grid, r.energy.in_total);
    os << energy_row("SPV", r.energy.spv, r.energy.in_total);
    os << energy_row("WT", r.energy.wt, r.energy.in_total);
    os << energy_row("MT", r.energy.mt, r.energy.in_total);
    os << energy_row("BESS discharge", r.energy.bess_discharge, r.energy.in_total);
    std::snprintf(buf, sizeof(buf), "  %-18s %12.2f\n", "Total", r.energy.in_total);
    os << buf << "Energy consumed (kWh)\n";
    os << energy_row("Billing", r.energy.billing, r.energy.out_total);
    os << energy_row("Loss", r.energy.loss, r.energy.out_total);
    os << energy_row("BESS charge", r.energy.bess_charge, r.energy.out_total);
    std::snprintf(buf, sizeof(buf), "  %-18s %12.2f\n\n", "Total", r.energy.out_total);
    os << buf;
    std::snprintf(buf, sizeof(buf),
                  "LDI (kW): base %.2f, with renewables %.2f, net %.2f\n", r.ldi.base,
                  r.ldi.with_res, r.ldi.net);
    os << buf;
    std::snprintf(buf, sizeof(buf),
                  "Peak %.1f->%.1f kW (hour %d->%d), valley %.1f->%.1f kW (hour %d->%d), "
                  "mean %.1f->%.1f kW\n",
                  r.shift.peak_base, r.shift.peak_net, r.shift.peak_hour_base,
                  r.shift.peak_hour_net, r.shift.valley_base, r.shift.valley_net,
                  r.shift.valley_hour_base, r.shift.valley_hour_net, r.shift.mean_base,
                  r.shift.mean_net);
    os << buf;
    return os.str();
}

}  // namespace gridsched
