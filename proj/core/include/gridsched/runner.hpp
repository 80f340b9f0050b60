#pragma once

#include <string>

#include "gridsched/config.hpp"
#include "gridsched/optimizer.hpp"

namespace gridsched {

// Everything loaded and derived for one run. The network is owned here;
// DayContext points into it.
struct RunSetup {
    CaseData network;
    DayContext ctx;
    SwarmConfig swarm;
};

RunSetup load_inputs(const RunConfig& cfg);

// Full pipeline: load, plan, optimize, report.
DayResult run_day(const RunConfig& cfg);

// Runs the pipeline and writes the artifact set (schedule.csv, report.json,
// report.txt, profit_per_state.csv, load_profile.csv, effective.cfg) into
// cfg.out_dir. Returns the result for further inspection.
DayResult run_and_write(const RunConfig& cfg);

struct CompareResult {
    DayResult a;
    DayResult b;
    double profit_delta_pct = 0.0;  // (A - B) / B
    double loss_delta_pct = 0.0;
    std::string text;
    std::string json;
};

// Side-by-side comparison of two runs sharing case, profiles and prices.
// Mismatched inputs raise InputError.
CompareResult compare_runs(const RunConfig& a, const RunConfig& b);

}  // namespace gridsched
