#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "gridsched/errors.hpp"

namespace gridsched {

struct Bus {
    int id = 0;               // 1-based node index, substation is 1
    double p_load_kw = 0.0;   // nominal active demand
    double q_load_kvar = 0.0; // nominal reactive demand
};

struct Line {
    int from = 0;
    int to = 0;
    double r_ohm = 0.0;
    double x_ohm = 0.0;
    double ampacity_a = 400.0;
};

enum class DerKind { Spv, Wt, Mt, Bess };

std::string der_kind_name(DerKind kind);
DerKind der_kind_from_name(const std::string& name);

struct DerPlacement {
    int node = 0;
    DerKind kind = DerKind::Spv;
    double rating = 0.0;  // kW for generators, kWh for BESS
};

// Radial distribution case. Immutable after load; the substation is bus 1.
struct CaseData {
    double base_kv = 12.66;
    double base_mva = 100.0;
    int substation = 1;
    std::vector<Bus> buses;   // sorted by id; buses[k].id == k + 1
    std::vector<Line> lines;
    std::vector<DerPlacement> ders;

    double total_p_load_kw() const;
    double total_q_load_kvar() const;
    std::size_t index_of(int bus_id) const;  // 0-based; throws ReferenceError
};

// Parses the sectioned case CSV ("bus" / "line" / "der" sections) and
// validates the tree topology and DER node references.
CaseData load_case(std::istream& in, double default_ampacity_a = 400.0);
CaseData load_case_file(const std::string& path, double default_ampacity_a = 400.0);

// Net generation per node (0-based, aligned with CaseData::buses).
// Positive values inject power; BESS charging enters as a negative entry.
struct Injections {
    std::vector<double> p_kw;
    std::vector<double> q_kvar;
    explicit Injections(std::size_t n) : p_kw(n, 0.0), q_kvar(n, 0.0) {}
};

struct PowerFlowOptions {
    double tol_pu = 1e-10;   // max |dV| between sweeps; tight so the books close
    int max_iter = 200;
    double slack_v_pu = 1.0; // flat substation setpoint
};

struct PowerFlowResult {
    std::vector<double> v_mag_pu;
    std::vector<double> v_ang_rad;
    std::vector<double> i_line_a;  // aligned with CaseData::lines
    double p_loss_kw = 0.0;
    double p_grid_kw = 0.0;    // substation injection; negative when back-feeding
    double q_grid_kvar = 0.0;
    double p_rev_kw = 0.0;     // back-feed magnitude, 0 when importing
    int iterations = 0;
};

// Backward/forward sweep solve. Loads are scaled by load_scale; injections
// are added on top. Throws ConvergenceError when the iteration cap is hit.
PowerFlowResult run_power_flow(const CaseData& c, const Injections& inj,
                               double load_scale = 1.0,
                               const PowerFlowOptions& opt = {});

// Back-feed per the substation voltage-angle test: 0 when the feeder
// imports, otherwise the magnitude of power flowing toward the grid.
double reverse_power(const PowerFlowResult& pf);

}  // namespace gridsched
