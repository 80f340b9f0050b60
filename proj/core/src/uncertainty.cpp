#include "gridsched/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "gridsched/csv.hpp"

namespace gridsched {

HistoricalSeries HistoricalSeries::from_csv(std::istream& in) {
    HistoricalSeries h;
    for (const auto& row : csv::read_rows(in)) {
        std::vector<double> day;
        day.reserve(row.size());
        for (const auto& field : row) day.push_back(csv::to_double(field, "profile value"));
        if (!h.values.empty() && day.size() != h.values.front().size())
            throw InputError("profile rows have inconsistent state counts");
        h.values.push_back(std::move(day));
    }
    if (h.values.empty()) throw InputError("profile file has no data rows");
    return h;
}

HistoricalSeries HistoricalSeries::from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open profile file '" + path + "'");
    return from_csv(in);
}

namespace {
std::pair<double, double> mean_sd(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0))};
}
}  // namespace

UncertaintyEnvelope build_envelope(const HistoricalSeries& h, double k) {
    if (h.days() < 2) throw EnvelopeError("need at least two days of history");
    if (k <= 0.0) throw EnvelopeError("spread coefficient k must be positive");
    const std::size_t n_states = h.states();
    if (n_states == 0) throw EnvelopeError("history has no states");
    for (const auto& row : h.values)
        if (row.size() != n_states)
            throw EnvelopeError("history rows have inconsistent state counts");
    UncertaintyEnvelope env;
    env.k = k;
    env.mean.resize(n_states);
    env.lower.resize(n_states);
    env.upper.resize(n_states);
    env.mu_lower.resize(n_states);
    env.mu_upper.resize(n_states);

    const double sqrt_days = std::sqrt(static_cast<double>(h.days()));
    std::vector<double> column(h.days());
    for (std::size_t i = 0; i < n_states; ++i) {
        for (std::size_t d = 0; d < h.days(); ++d) column[d] = h.values[d][i];
        const auto [mean, sd] = mean_sd(column);
        env.mean[i] = mean;
        env.lower[i] = std::max(0.0, mean - k * sd);
        env.upper[i] = mean + k * sd;
        // Hourly budget band: the spread of the state mean itself.
        env.mu_lower[i] = std::max(0.0, mean - k * sd / sqrt_days);
        env.mu_upper[i] = mean + k * sd / sqrt_days;
    }

    std::vector<double> aggregates(h.days());
    for (std::size_t d = 0; d < h.days(); ++d)
        aggregates[d] = std::accumulate(h.values[d].begin(), h.values[d].end(), 0.0) /
                        static_cast<double>(n_states);
    const auto [day_mean, day_sd] = mean_sd(aggregates);
    env.day_mean = day_mean;
    env.day_lower = std::max(0.0, day_mean - k * day_sd);
    env.day_upper = day_mean + k * day_sd;
    return env;
}

std::vector<double> synthesize_day(const UncertaintyEnvelope& env, std::uint64_t seed) {
    const std::size_t n = env.mean.size();
    if (n == 0) throw EnvelopeError("empty envelope");
    for (std::size_t i = 0; i < n; ++i)
        if (env.lower[i] > env.upper[i]) throw EnvelopeError("inverted spread bounds");
    if (env.day_lower > env.day_upper) throw EnvelopeError("inverted daily budget bounds");

    std::mt19937_64 rng(seed);
    std::vector<double> day(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uniform_real_distribution<double> u(env.lower[i], env.upper[i]);
        day[i] = env.lower[i] == env.upper[i] ? env.lower[i] : u(rng);
    }

    // Project the day aggregate into the daily budget by shrinking the
    // deviations from the historical mean; shrinking keeps every value
    // inside its own spread band.
    const double inv_n = 1.0 / static_cast<double>(n);
    for (int pass = 0; pass < 50; ++pass) {
        const double aggregate = std::accumulate(day.begin(), day.end(), 0.0) * inv_n;
        if (aggregate >= env.day_lower && aggregate <= env.day_upper) return day;
        const double base =
            std::accumulate(env.mean.begin(), env.mean.end(), 0.0) * inv_n;
        const double deviation = aggregate - base;
        const double target = aggregate > env.day_upper ? env.day_upper : env.day_lower;
        const double scale =
            deviation == 0.0 ? 0.0 : std::clamp((target - base) / deviation, 0.0, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            day[i] = env.mean[i] + scale * (day[i] - env.mean[i]);
            day[i] = std::clamp(day[i], std::max(0.0, env.lower[i]), env.upper[i]);
        }
    }
    const double aggregate = std::accumulate(day.begin(), day.end(), 0.0) * inv_n;
    if (aggregate < env.day_lower - 1e-12 || aggregate > env.day_upper + 1e-12)
        throw EnvelopeError("daily budget cannot be met inside the spread bounds");
    return day;
}

}  // namespace gridsched
