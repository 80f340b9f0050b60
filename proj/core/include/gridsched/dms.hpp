#pragma once

#include <iosfwd>
#include <vector>

#include "gridsched/der.hpp"

namespace gridsched {

struct PriceSignal {
    std::vector<double> grid;      // E_G per state, $/kWh
    std::vector<double> customer;  // E_C per state, $/kWh

    double mean_price() const;
    std::size_t states() const { return grid.size(); }

    // CSV: state,grid_price[,customer_price]; a missing customer column is
    // derived as grid price times `markup`.
    static PriceSignal from_csv(std::istream& in, double markup = 1.05);
    static PriceSignal from_csv_file(const std::string& path, double markup = 1.05);
};

enum class Mode { Charge, Standby, Discharge };

struct BessPlan {
    std::vector<Mode> mode;    // per state
    std::vector<double> cap_kw;
};

// A-priori day plan: modes and dispatch caps per BESS plus the MT window.
struct DmsPlan {
    std::vector<BessPlan> bess;
    std::vector<double> mt_cap_kw;
    std::vector<int> charge_states;     // T^C
    std::vector<int> discharge_states;  // T^D
    std::vector<int> mt_states;         // T_MT^D
    double fictitious_price = 0.0;      // E_BESS^F
};

struct Partition {
    std::vector<int> charge;     // states strictly below the mean price
    std::vector<int> discharge;  // states strictly above the mean price
};

Partition partition_states(const PriceSignal& p);

// Greedy priority allocation: highest-price discharge states get the full
// rating, the first partially-used state gets the energy remainder, the rest
// get zero. Ties break toward the earlier state.
std::vector<double> allocate_discharge_limits(const Bess& b, const PriceSignal& p,
                                              const std::vector<int>& t_discharge);

// Mirror image over the cheapest states, with the remainder scaled by the
// charging efficiency.
std::vector<double> allocate_charge_limits(const Bess& b, const PriceSignal& p,
                                           const std::vector<int>& t_charge);

// States where the grid price exceeds the MT marginal cost (fuel + O&M).
std::vector<int> mt_window(const MicroTurbine& mt, const PriceSignal& p);

double fictitious_price(const PriceSignal& p);

DmsPlan build_plan(const std::vector<Bess>& bess, const std::vector<MicroTurbine>& mts,
                   const PriceSignal& p);

// Comparison baseline: charge exactly as build_plan, then discharge in
// consecutive states immediately after the last charging state.
DmsPlan build_fixed_window_plan(const std::vector<Bess>& bess,
                                const std::vector<MicroTurbine>& mts, const PriceSignal& p);

}  // namespace gridsched
