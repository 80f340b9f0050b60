#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gridsched/errors.hpp"

namespace gridsched {

// Historical normalized multipliers, one row per day, one column per state.
struct HistoricalSeries {
    std::vector<std::vector<double>> values;

    std::size_t days() const { return values.size(); }
    std::size_t states() const { return values.empty() ? 0 : values.front().size(); }

    static HistoricalSeries from_csv(std::istream& in);
    static HistoricalSeries from_csv_file(const std::string& path);
};

// Data-spread and budget-of-uncertainty intervals derived from history.
struct UncertaintyEnvelope {
    std::vector<double> mean;      // per-state historical mean
    std::vector<double> lower;     // data spread, mean - k*sd (clipped at 0)
    std::vector<double> upper;     // data spread, mean + k*sd
    std::vector<double> mu_lower;  // hourly budget band around the mean
    std::vector<double> mu_upper;
    double day_mean = 0.0;         // daily-basis budget on the day aggregate
    double day_lower = 0.0;
    double day_upper = 0.0;
    double k = 1.0;
};

// Sample (n-1) statistics per state plus the day-aggregate budget band.
// Needs at least two days of data.
UncertaintyEnvelope build_envelope(const HistoricalSeries& h, double k = 1.0);

// One synthetic day: a uniform draw inside the per-state spread, then the
// deviations from the mean are scaled down until the day aggregate sits
// inside the daily-basis budget. Deterministic per seed.
std::vector<double> synthesize_day(const UncertaintyEnvelope& env, std::uint64_t seed);

}  // namespace gridsched
