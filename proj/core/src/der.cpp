#include "gridsched/der.hpp"

#include <algorithm>
#include <string>

namespace gridsched {

double clamp_charge(const Bess& b, double soc_prev, double requested_kw, double dt_h) {
    if (requested_kw <= 0.0) return 0.0;
    // Grid-side power that exactly fills the remaining headroom in one state.
    const double headroom_kw = (b.soc_max - soc_prev) * b.capacity_kwh / (b.eta_charge * dt_h);
    return std::max(0.0, std::min({requested_kw, b.p_max_charge_kw, headroom_kw}));
}

double clamp_discharge(const Bess& b, double soc_prev, double requested_kw, double dt_h) {
    if (requested_kw <= 0.0) return 0.0;
    // Grid-side power available from the energy stored above the floor.
    const double available_kw = (soc_prev - b.soc_min) * b.capacity_kwh * b.eta_discharge / dt_h;
    return std::max(0.0, std::min({requested_kw, b.p_max_discharge_kw, available_kw}));
}

double soc_update(const Bess& b, double soc_prev, double p_charge_kw, double p_discharge_kw,
                  double dt_h) {
    const double soc = soc_prev + (b.eta_charge * p_charge_kw / b.capacity_kwh -
                                   p_discharge_kw / (b.eta_discharge * b.capacity_kwh)) *
                                      dt_h;
    constexpr double kTol = 1e-9;
    if (soc < b.soc_min - kTol || soc > b.soc_max + kTol)
        throw std::logic_error("SOC " + std::to_string(soc) +
                               " left its bounds; dispatch was not clamped");
    return std::clamp(soc, b.soc_min, b.soc_max);
}

std::pair<double, double> mt_bounds(const MicroTurbine& mt, bool state_in_window) {
    if (!state_in_window) return {0.0, 0.0};
    return {0.0, mt.dispatchable_kw()};
}

}  // namespace gridsched
