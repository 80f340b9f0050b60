#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "gridsched/uncertainty.hpp"

using namespace gridsched;

namespace {

HistoricalSeries two_days() {
    HistoricalSeries h;
    h.values = {{0.4, 0.6, 0.8}, {0.6, 0.8, 0.6}};
    return h;
}

HistoricalSeries bundled(const char* name) {
    return HistoricalSeries::from_csv_file(std::string(GRIDSCHED_DATA_DIR) + "/profiles/" +
                                           name + ".csv");
}

}  // namespace

TEST_CASE("envelope statistics match the hand calculation") {
    UncertaintyEnvelope env = build_envelope(two_days(), 1.0);

    // per-state mean and sample (n-1) deviation of {0.4,0.6}, {0.6,0.8}, {0.8,0.6}
    const double sd = std::sqrt(0.02);  // each pair differs by 0.2
    CHECK(env.mean[0] == doctest::Approx(0.5));
    CHECK(env.mean[1] == doctest::Approx(0.7));
    CHECK(env.mean[2] == doctest::Approx(0.7));
    for (int s = 0; s < 3; ++s) {
        CHECK(env.upper[s] - env.mean[s] == doctest::Approx(sd));
        CHECK(env.mean[s] - env.lower[s] == doctest::Approx(sd));
        // budget band is the spread shrunk by sqrt(days)
        CHECK(env.mu_upper[s] - env.mean[s] == doctest::Approx(sd / std::sqrt(2.0)));
    }

    // day averages are 0.6 and 2/3; budget is mean +- k * sample sd
    const double day_sd = std::sqrt((0.6 - 19.0 / 30.0) * (0.6 - 19.0 / 30.0) * 2.0);
    CHECK(env.day_mean == doctest::Approx(19.0 / 30.0));
    CHECK(env.day_upper == doctest::Approx(env.day_mean + day_sd));
    CHECK(env.day_lower == doctest::Approx(env.day_mean - day_sd));
}

TEST_CASE("spread scales with k and never goes negative") {
    HistoricalSeries h;
    h.values = {{0.01, 0.5}, {0.05, 0.6}, {0.02, 0.4}};
    UncertaintyEnvelope e1 = build_envelope(h, 1.0);
    UncertaintyEnvelope e3 = build_envelope(h, 3.0);
    CHECK(e3.upper[1] - e3.mean[1] == doctest::Approx(3.0 * (e1.upper[1] - e1.mean[1])));
    CHECK(e3.lower[0] == 0.0);  // clipped
}

TEST_CASE("degenerate or empty history is rejected") {
    HistoricalSeries one;
    one.values = {{0.5, 0.6}};
    CHECK_THROWS_AS(build_envelope(one, 1.0), EnvelopeError);
    CHECK_THROWS_AS(build_envelope(HistoricalSeries{}, 1.0), EnvelopeError);
    CHECK_THROWS_AS(build_envelope(two_days(), 0.0), EnvelopeError);
    HistoricalSeries ragged;
    ragged.values = {{0.5, 0.6}, {0.5}};
    CHECK_THROWS_AS(build_envelope(ragged, 1.0), EnvelopeError);
}

TEST_CASE("synthetic days stay inside both budgets") {
    UncertaintyEnvelope env = build_envelope(bundled("load"), 1.0);
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        std::vector<double> day = synthesize_day(env, seed);
        REQUIRE(day.size() == env.mean.size());
        double total = 0.0;
        for (std::size_t s = 0; s < day.size(); ++s) {
            CHECK(day[s] >= env.lower[s] - 1e-12);
            CHECK(day[s] <= env.upper[s] + 1e-12);
            total += day[s];
        }
        const double day_avg = total / static_cast<double>(day.size());
        CHECK(day_avg >= env.day_lower - 1e-9);
        CHECK(day_avg <= env.day_upper + 1e-9);
    }
}

TEST_CASE("same seed reproduces the same day, different seeds differ") {
    UncertaintyEnvelope env = build_envelope(bundled("wt"), 1.0);
    std::vector<double> a = synthesize_day(env, 42);
    std::vector<double> b = synthesize_day(env, 42);
    std::vector<double> c = synthesize_day(env, 43);
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("zero spread reproduces the historical mean day exactly") {
    HistoricalSeries h;
    h.values = {{0.3, 0.5, 0.7}, {0.3, 0.5, 0.7}};  // identical days, sd = 0
    UncertaintyEnvelope env = build_envelope(h, 1.0);
    std::vector<double> day = synthesize_day(env, 99);
    CHECK(day[0] == doctest::Approx(0.3));
    CHECK(day[1] == doctest::Approx(0.5));
    CHECK(day[2] == doctest::Approx(0.7));
}

TEST_CASE("ensemble mean lands inside the hourly budget band") {
    UncertaintyEnvelope env = build_envelope(bundled("spv"), 1.0);
    const int n = 2000;
    std::vector<double> acc(env.mean.size(), 0.0);
    for (int seed = 0; seed < n; ++seed) {
        std::vector<double> day = synthesize_day(env, static_cast<std::uint64_t>(seed));
        for (std::size_t s = 0; s < acc.size(); ++s) acc[s] += day[s];
    }
    for (std::size_t s = 0; s < acc.size(); ++s) {
        const double m = acc[s] / n;
        CHECK(m >= env.mu_lower[s] - 1e-9);
        CHECK(m <= env.mu_upper[s] + 1e-9);
    }
}

TEST_CASE("profile csv loader handles comments and blank lines") {
    std::istringstream in("# comment\n0.1,0.2,0.3\n\n0.2,0.3,0.4\n");
    HistoricalSeries h = HistoricalSeries::from_csv(in);
    CHECK(h.days() == 2);
    CHECK(h.states() == 3);
    CHECK(h.values[1][2] == doctest::Approx(0.4));
}
