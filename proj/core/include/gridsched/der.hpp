#pragma once

#include <cmath>
#include <utility>

#include "gridsched/network.hpp"

namespace gridsched {

// Third-party renewable unit, non-dispatchable, bought at a contract tariff.
struct RenewableUnit {
    int node = 0;
    DerKind kind = DerKind::Spv;  // Spv or Wt
    double rating_kw = 0.0;
    double price = 0.0;  // $/kWh
};

struct MicroTurbine {
    int node = 0;
    double rating_kw = 1200.0;
    double reserve_kw = 400.0;
    double fuel_price = 0.0335;  // $/kWh
    double om_price = 0.012;     // $/kWh

    double dispatchable_kw() const { return std::max(0.0, rating_kw - reserve_kw); }
    double marginal_cost() const { return fuel_price + om_price; }
};

struct Bess {
    int node = 0;
    double capacity_kwh = 3000.0;
    double p_max_charge_kw = 500.0;
    double p_max_discharge_kw = 500.0;
    double soc_min = 0.1;
    double soc_max = 1.0;
    double soc_init = 0.1;
    double eta_charge = std::sqrt(0.85);
    double eta_discharge = std::sqrt(0.85);
    double om_price = 0.0015;  // $/kWh on |charge| + |discharge|

    double usable_kwh() const { return (soc_max - soc_min) * capacity_kwh; }
    double round_trip() const { return eta_charge * eta_discharge; }
};

// Largest admissible grid-side charging power given the previous-state SOC.
double clamp_charge(const Bess& b, double soc_prev, double requested_kw, double dt_h = 1.0);

// Largest admissible grid-side discharging power given the previous-state SOC.
double clamp_discharge(const Bess& b, double soc_prev, double requested_kw, double dt_h = 1.0);

// SOC advance for one state. Charge and discharge are mutually exclusive and
// must already be clamped; a result outside [soc_min, soc_max] means the
// caller broke that contract.
double soc_update(const Bess& b, double soc_prev, double p_charge_kw, double p_discharge_kw,
                  double dt_h = 1.0);

// (lower, upper) MT dispatch bounds; zero outside the dispatch window.
std::pair<double, double> mt_bounds(const MicroTurbine& mt, bool state_in_window);

}  // namespace gridsched
