#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace gridsched {

// Layered run configuration: Table-style defaults, overridden by a sectioned
// key=value file, overridden again by CLI flags.
struct RunConfig {
    // [files]
    std::string case_file;
    std::string profiles_dir;
    std::string prices_file;
    std::string out_dir = "out";

    // [bess] applied to every BESS placement in the case file
    double bess_p_max_charge_kw = 500.0;
    double bess_p_max_discharge_kw = 500.0;
    double bess_soc_min = 0.1;
    double bess_soc_max = 1.0;
    double bess_soc_init = 0.1;
    double bess_round_trip = 0.85;  // eta_c = eta_d = sqrt of this
    double bess_om_price = 0.0015;

    // [mt]
    double mt_reserve_kw = 400.0;
    double mt_fuel_price = 0.0335;
    double mt_om_price = 0.012;

    // [prices]
    double spv_price = 0.028;
    double wt_price = 0.029;
    double customer_markup = 1.05;

    // [uncertainty]
    double k = 1.0;

    // [swarm]
    int population = 10;
    int generations = 100;
    double exploration = 0.6;
    double exploitation = 0.9;

    // [network]
    double default_ampacity_a = 400.0;
    double pf_tol_pu = 1e-10;
    int pf_max_iter = 200;
    double slack_v_pu = 1.0;  // assumed flat substation setpoint
    double v_min_pu = 0.95;
    double v_max_pu = 1.05;

    // [run]
    std::uint64_t seed = 1;
    std::string strategy = "mpas";  // or "fixed-window"
    bool reverse_constraint = true;
    bool fc_enabled = true;
    double peak_factor = 1.3;
    double dt_h = 1.0;
};

// Reads a sectioned key=value file into cfg; unknown keys are rejected.
void apply_config_file(RunConfig& cfg, const std::string& path);
void apply_config_stream(RunConfig& cfg, std::istream& in, const std::string& origin);

// Echoes every effective setting; feeding the output back through
// apply_config_* reproduces the run.
void write_effective_config(const RunConfig& cfg, std::ostream& out);

}  // namespace gridsched
