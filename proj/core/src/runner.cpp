#include "gridsched/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gridsched/uncertainty.hpp"

namespace gridsched {

namespace {

DayProfiles synthesize_profiles(const RunConfig& cfg, std::size_t n_states) {
    const auto synth = [&](const std::string& name, std::uint64_t salt) {
        const auto series =
            HistoricalSeries::from_csv_file(cfg.profiles_dir + "/" + name + ".csv");
        if (series.states() != n_states)
            throw InputError("profile '" + name + "' has " + std::to_string(series.states()) +
                             " states, prices have " + std::to_string(n_states));
        return synthesize_day(build_envelope(series, cfg.k), cfg.seed + salt);
    };
    DayProfiles p;
    p.load = synth("load", 1);
    p.spv = synth("spv", 2);
    p.wt = synth("wt", 3);
    return p;
}

Devices devices_from_case(const CaseData& net, const RunConfig& cfg) {
    Devices d;
    const double eta = std::sqrt(cfg.bess_round_trip);
    for (const DerPlacement& der : net.ders) {
        switch (der.kind) {
            case DerKind::Spv:
                d.renewables.push_back({der.node, DerKind::Spv, der.rating, cfg.spv_price});
                break;
            case DerKind::Wt:
                d.renewables.push_back({der.node, DerKind::Wt, der.rating, cfg.wt_price});
                break;
            case DerKind::Mt: {
                MicroTurbine mt;
                mt.node = der.node;
                mt.rating_kw = der.rating;
                mt.reserve_kw = cfg.mt_reserve_kw;
                mt.fuel_price = cfg.mt_fuel_price;
                mt.om_price = cfg.mt_om_price;
                d.mts.push_back(mt);
                break;
            }
            case DerKind::Bess: {
                Bess b;
                b.node = der.node;
                b.capacity_kwh = der.rating;
                b.p_max_charge_kw = cfg.bess_p_max_charge_kw;
                b.p_max_discharge_kw = cfg.bess_p_max_discharge_kw;
                b.soc_min = cfg.bess_soc_min;
                b.soc_max = cfg.bess_soc_max;
                b.soc_init = cfg.bess_soc_init;
                b.eta_charge = eta;
                b.eta_discharge = eta;
                b.om_price = cfg.bess_om_price;
                d.bess.push_back(b);
                break;
            }
        }
    }
    return d;
}

}  // namespace

RunSetup load_inputs(const RunConfig& cfg) {
    if (cfg.case_file.empty()) throw InputError("no case file given");
    if (cfg.prices_file.empty()) throw InputError("no price file given");
    if (cfg.profiles_dir.empty()) throw InputError("no profiles directory given");

    RunSetup setup;
    setup.network = load_case_file(cfg.case_file, cfg.default_ampacity_a);
    DayContext& ctx = setup.ctx;
    ctx.network = &setup.network;
    ctx.devices = devices_from_case(setup.network, cfg);
    ctx.prices = PriceSignal::from_csv_file(cfg.prices_file, cfg.customer_markup);
    ctx.profiles = synthesize_profiles(cfg, ctx.prices.states());
    if (cfg.strategy == "mpas")
        ctx.plan = build_plan(ctx.devices.bess, ctx.devices.mts, ctx.prices);
    else if (cfg.strategy == "fixed-window")
        ctx.plan = build_fixed_window_plan(ctx.devices.bess, ctx.devices.mts, ctx.prices);
    else
        throw InputError("unknown strategy '" + cfg.strategy + "'");
    if (!cfg.fc_enabled) ctx.plan.fictitious_price = 0.0;
    ctx.dt_h = cfg.dt_h;
    ctx.peak_factor = cfg.peak_factor;
    ctx.reverse_constraint = cfg.reverse_constraint;
    ctx.limits = {cfg.v_min_pu, cfg.v_max_pu, cfg.reverse_constraint};
    ctx.pf_options = {cfg.pf_tol_pu, cfg.pf_max_iter, cfg.slack_v_pu};
    setup.swarm = {cfg.population, cfg.generations, cfg.exploration, cfg.exploitation,
                   cfg.seed};
    return setup;
}

DayResult run_day(const RunConfig& cfg) {
    const RunSetup setup = load_inputs(cfg);
    return optimize_day(setup.ctx, setup.swarm, cfg.strategy);
}

namespace {

void write_schedule_csv(const std::string& path, const DayResult& r) {
    std::ofstream out(path);
    const std::size_t n_bess = r.schedule.soc.size();
    out << "state";
    for (std::size_t b = 0; b < n_bess; ++b)
        out << ",bess" << b + 1 << "_charge_kw,bess" << b + 1 << "_discharge_kw,bess" << b + 1
            << "_soc";
    for (std::size_t m = 0; m < (r.schedule.states.empty()
                                     ? 0
                                     : r.schedule.states.front().mt_kw.size());
         ++m)
        out << ",mt" << m + 1 << "_kw";
    out << "\n";
    for (std::size_t i = 0; i < r.schedule.states.size(); ++i) {
        out << i;
        const StateSchedule& s = r.schedule.states[i];
        for (std::size_t b = 0; b < n_bess; ++b)
            out << "," << s.bess_charge_kw[b] << "," << s.bess_discharge_kw[b] << ","
                << r.schedule.soc[b][i];
        for (double mt : s.mt_kw) out << "," << mt;
        out << "\n";
    }
}

void write_profit_csv(const std::string& path, const DayResult& r) {
    std::ofstream out(path);
    out << "state,revenue_usd,payments_usd,fc_usd,profit_usd\n";
    for (std::size_t i = 0; i < r.ledgers.size(); ++i) {
        const StateLedger& l = r.ledgers[i];
        out << i << "," << l.revenue() << "," << l.payments() << "," << l.fc() << ","
            << l.objective() << "\n";
    }
}

void write_profile_csv(const std::string& path, const DayReport& rep) {
    std::ofstream out(path);
    out << "state,demand_kw,demand_net_res_kw,net_kw\n";
    for (std::size_t i = 0; i < rep.profile_base_kw.size(); ++i)
        out << i << "," << rep.profile_base_kw[i] << "," << rep.profile_res_kw[i] << ","
            << rep.profile_net_kw[i] << "\n";
}

}  // namespace

DayResult run_and_write(const RunConfig& cfg) {
    DayResult result = run_day(cfg);
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    write_schedule_csv(cfg.out_dir + "/schedule.csv", result);
    write_profit_csv(cfg.out_dir + "/profit_per_state.csv", result);
    write_profile_csv(cfg.out_dir + "/load_profile.csv", result.report);
    {
        std::ofstream out(cfg.out_dir + "/report.json");
        out << report_to_json(result.report) << "\n";
    }
    {
        std::ofstream out(cfg.out_dir + "/report.txt");
        out << report_to_text(result.report);
    }
    {
        std::ofstream out(cfg.out_dir + "/effective.cfg");
        write_effective_config(cfg, out);
    }
    return result;
}

CompareResult compare_runs(const RunConfig& a, const RunConfig& b) {
    if (a.case_file != b.case_file || a.profiles_dir != b.profiles_dir ||
        a.prices_file != b.prices_file)
        throw InputError("comparison requires identical case, profiles and prices");
    CompareResult cmp;
    cmp.a = run_day(a);
    cmp.b = run_day(b);
    const DayReport& ra = cmp.a.report;
    const DayReport& rb = cmp.b.report;
    cmp.profit_delta_pct = rb.dpf != 0.0 ? 100.0 * (ra.dpf - rb.dpf) / std::abs(rb.dpf) : 0.0;
    cmp.loss_delta_pct = rb.energy.loss != 0.0
                             ? 100.0 * (ra.energy.loss - rb.energy.loss) / rb.energy.loss
                             : 0.0;

    nlohmann::json j;
    j["a"] = {{"strategy", ra.strategy}, {"dpf_usd", ra.dpf},
              {"loss_kwh", ra.energy.loss}, {"energy_kwh", ra.energy.in_total}};
    j["b"] = {{"strategy", rb.strategy}, {"dpf_usd", rb.dpf},
              {"loss_kwh", rb.energy.loss}, {"energy_kwh", rb.energy.in_total}};
    j["profit_delta_pct"] = cmp.profit_delta_pct;
    j["loss_delta_pct"] = cmp.loss_delta_pct;
    cmp.json = j.dump(2);

    std::ostringstream os;
    const auto row = [&](const char* name, double va, double vb) {
        char buf[112];
        std::snprintf(buf, sizeof(buf), "  %-22s %12.2f %12.2f %+9.2f%%\n", name, va, vb,
                      vb != 0.0 ? 100.0 * (va - vb) / std::abs(vb) : 0.0);
        os << buf;
    };
    os << "Comparison: A=" << ra.strategy << "  B=" << rb.strategy << "\n";
    os << "  metric                            A            B      A vs B\n";
    row("Profit (US$)", ra.dpf, rb.dpf);
    row("Payments (US$)", ra.money.payments, rb.money.payments);
    row("Revenue (US$)", ra.money.revenue, rb.money.revenue);
    row("Grid purchase (kWh)", ra.energy.grid, rb.energy.grid);
    row("Losses (kWh)", ra.energy.loss, rb.energy.loss);
    row("BESS charge (kWh)", ra.energy.bess_charge, rb.energy.bess_charge);
    row("BESS discharge (kWh)", ra.energy.bess_discharge, rb.energy.bess_discharge);
    row("Energy handled (kWh)", ra.energy.in_total, rb.energy.in_total);
    row("LDI net (kW)", ra.ldi.net, rb.ldi.net);
    cmp.text = os.str();
    return cmp;
}

}  // namespace gridsched
