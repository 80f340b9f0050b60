#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridsched/der.hpp"
#include "gridsched/dms.hpp"
#include "gridsched/network.hpp"

namespace gridsched {

struct Devices {
    std::vector<RenewableUnit> renewables;
    std::vector<MicroTurbine> mts;
    std::vector<Bess> bess;
};

// Decision values for one system state, already clamped feasible.
struct StateSchedule {
    std::vector<double> bess_charge_kw;
    std::vector<double> bess_discharge_kw;
    std::vector<double> mt_kw;
};

struct StatePrices {
    double grid = 0.0;      // E_G, $/kWh
    double customer = 0.0;  // E_C, $/kWh
};

// Energy moved during the state, kWh.
struct StateEnergy {
    double grid = 0.0;
    double spv = 0.0;
    double wt = 0.0;
    double mt = 0.0;
    double bess_discharge = 0.0;
    double bess_charge = 0.0;
    double billing = 0.0;  // customer demand
    double loss = 0.0;
};

struct StateLedger {
    // Revenue components ($)
    double billing = 0.0;
    double loss_cost = 0.0;
    double fc_credit = 0.0;  // fictitious credit on BESS charging
    // Payment components ($)
    double grid = 0.0;
    double spv = 0.0;
    double wt = 0.0;
    double mt_fuel = 0.0;
    double mt_om = 0.0;
    double bess_om = 0.0;
    double fc_debit = 0.0;   // fictitious debit on BESS discharging
    StateEnergy energy;

    double revenue() const { return billing + loss_cost + fc_credit; }
    double payments() const { return grid + spv + wt + mt_fuel + mt_om + bess_om + fc_debit; }
    double fc() const { return fc_credit - fc_debit; }
    // Reported profit; the fictitious terms cancel out of it exactly.
    double objective() const { return revenue() - payments() - fc(); }
    // What the optimizer sees; the fictitious terms stay active here.
    double fitness_value() const { return revenue() - payments(); }
};

// Per-state books. renewable_kw holds the output of each unit in
// Devices::renewables, in order; demand_kw is the billed customer demand.
StateLedger state_profit(const Devices& devices, const StateSchedule& schedule,
                         const std::vector<double>& renewable_kw, double demand_kw,
                         const StatePrices& prices, const PowerFlowResult& pf,
                         double fc_price, double dt_h = 1.0);

double fitness(const StateLedger& ledger);
double daily_profit(const std::vector<StateLedger>& ledgers);

struct Violation {
    enum class Kind { Voltage, Current, Device, ReversePower };
    Kind kind;
    int index;      // node, line, or device index
    double amount;  // p.u., A, or kW beyond the limit
};

struct ConstraintLimits {
    double v_min_pu = 0.95;
    double v_max_pu = 1.05;
    bool reverse_power = true;  // enforce zero back-feed
};

std::vector<Violation> check_constraints(const PowerFlowResult& pf, const CaseData& c,
                                         const Devices& devices, const StateSchedule& schedule,
                                         const ConstraintLimits& limits = {});

// Population standard deviation of a demand profile.
double load_deviation_index(const std::vector<double>& profile_kw);

struct DayReport {
    std::string strategy;
    std::uint64_t seed = 0;
    std::vector<StateLedger> states;
    double dpf = 0.0;

    struct EconomicTotals {
        double grid = 0.0, spv = 0.0, wt = 0.0, mt_fuel = 0.0, mt_om = 0.0, bess_om = 0.0;
        double payments = 0.0;
        double billing = 0.0, loss_cost = 0.0;
        double revenue = 0.0;
        double profit = 0.0;
    } money;

    struct EnergyTotals {  // kWh
        double grid = 0.0, spv = 0.0, wt = 0.0;        // purchased
        double mt = 0.0, bess_discharge = 0.0;         // supplied
        double in_total = 0.0;
        double billing = 0.0, loss = 0.0, bess_charge = 0.0;  // consumed
        double out_total = 0.0;
    } energy;

    struct LdiTriple {
        double base = 0.0;      // customer demand only
        double with_res = 0.0;  // demand net of SPV/WT
        double net = 0.0;       // demand net of all dispatches
    } ldi;

    struct ProfileShift {
        double peak_base = 0.0, peak_net = 0.0;
        double valley_base = 0.0, valley_net = 0.0;
        double mean_base = 0.0, mean_net = 0.0;
        int peak_hour_base = 0, peak_hour_net = 0;
        int valley_hour_base = 0, valley_hour_net = 0;
    } shift;

    std::vector<double> profile_base_kw;
    std::vector<double> profile_res_kw;
    std::vector<double> profile_net_kw;
};

// Aggregates the day and checks the books: energy in equals energy out and
// payments plus profit equal revenue, both within 1e-3. Throws
// AccountingError otherwise.
DayReport build_report(const std::vector<StateLedger>& ledgers,
                       const std::vector<double>& profile_base_kw,
                       const std::vector<double>& profile_res_kw,
                       const std::vector<double>& profile_net_kw,
                       const std::string& strategy, std::uint64_t seed);

std::string report_to_json(const DayReport& r);
std::string report_to_text(const DayReport& r);

}  // namespace gridsched
