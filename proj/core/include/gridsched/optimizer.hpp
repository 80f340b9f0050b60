#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gridsched/economics.hpp"

namespace gridsched {

struct SwarmConfig {
    int population = 10;
    int generations = 100;
    double exploration = 0.6;   // pull toward the herd best
    double exploitation = 0.9;  // pull toward the personal best
    std::uint64_t seed = 1;
};

struct Box {
    std::vector<double> lower;
    std::vector<double> upper;
};

struct BestResult {
    std::vector<double> x;
    double value = 0.0;
};

using Objective = std::function<double(const std::vector<double>&)>;

// Bounded continuous maximizer contract: any implementation must keep
// candidates inside the box, never lose the best-of-run, and be
// deterministic for a fixed seed. NaN objective values discard the
// candidate.
class SwarmOptimizer {
public:
    virtual ~SwarmOptimizer() = default;
    virtual BestResult maximize(const Objective& objective, const Box& bounds,
                                const SwarmConfig& cfg) const = 0;
};

// Default herd-style implementation: agents move under randomized pulls
// toward their own best position and the herd best, with periodic
// re-scattering of the laggards.
class HerdOptimizer final : public SwarmOptimizer {
public:
    BestResult maximize(const Objective& objective, const Box& bounds,
                        const SwarmConfig& cfg) const override;
};

BestResult swarm_kernel(const Objective& objective, const Box& bounds, const SwarmConfig& cfg);

struct Individual {
    std::vector<double> genes;  // N_B BESS dispatch magnitudes then MT dispatches, kW
    double fitness = 0.0;
};

struct Schedule {
    std::vector<StateSchedule> states;
    std::vector<std::vector<double>> soc;  // [bess][state], end-of-state SOC
};

struct DayProfiles {
    std::vector<double> load;  // per-state multipliers in [0,1]
    std::vector<double> spv;
    std::vector<double> wt;
};

// Everything a day run needs; immutable while optimizing.
struct DayContext {
    const CaseData* network = nullptr;
    Devices devices;
    DayProfiles profiles;
    PriceSignal prices;
    DmsPlan plan;
    double dt_h = 1.0;
    double peak_factor = 1.3;  // peak demand relative to the nominal system load
    bool reverse_constraint = true;
    ConstraintLimits limits;
    PowerFlowOptions pf_options;
    // Static penalties added to the negated fitness.
    double penalty_voltage_per_pu = 1e3;
    double penalty_current_per_100a = 1e3;
    double penalty_reverse_per_kw = 1e3;
};

// Scaled per-bus demand and DER injections for one state and schedule.
Injections build_injections(const DayContext& ctx, int state, const StateSchedule& schedule);
double state_demand_kw(const DayContext& ctx, int state);
std::vector<double> renewable_outputs_kw(const DayContext& ctx, int state);

// Turns raw genes into a clamped, mode-consistent state schedule.
StateSchedule clamp_schedule(const DayContext& ctx, int state,
                             const std::vector<double>& genes,
                             const std::vector<double>& soc_prev);

struct StateEvaluation {
    StateLedger ledger;
    PowerFlowResult pf;
    double penalty = 0.0;
};
StateEvaluation evaluate_state(const DayContext& ctx, int state, const StateSchedule& schedule);

// Best individual for one state given the previous SOC chain position.
Individual optimize_state(const DayContext& ctx, int state, const std::vector<double>& soc_prev,
                          const SwarmConfig& cfg, const SwarmOptimizer& kernel);

struct DayResult {
    Schedule schedule;
    std::vector<StateLedger> ledgers;
    std::vector<PowerFlowResult> flows;
    DayReport report;
};

// Sequential state-by-state optimization with the SOC chain advanced after
// every state.
DayResult optimize_day(const DayContext& ctx, const SwarmConfig& cfg,
                       const std::string& strategy_tag = "mpas",
                       const SwarmOptimizer* kernel = nullptr);

}  // namespace gridsched
