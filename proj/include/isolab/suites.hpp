#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isolab/density.hpp"

namespace isolab {

/// Default seed used by the CLI when none is given.
constexpr std::uint64_t kDefaultSeed = 424242;

/// One verified statement within a suite run.
struct SuiteCheck {
    std::string statement_id;
    bool pass = false;
    double worst = 0.0;                // worst margin/violation over the suite
    double tol = 0.0;
    std::string note;
};

/// Aggregate result of a randomized verification suite; csv holds one row per
/// instance (or grid point), json_summary one line per statement.
struct SuiteReport {
    std::string name;
    std::uint64_t seed = 0;
    int instances = 0;
    int skipped = 0;                   // draws rejected by hypothesis filters
    std::vector<SuiteCheck> checks;
    std::string csv;

    bool passed() const;
    std::string json_summary() const;
};

SuiteReport run_hermite_suite(int instances, std::uint64_t seed, double tol = 1e-9);
SuiteReport run_linear_suite(int instances, std::uint64_t seed, double tol = 1e-6);
SuiteReport run_riccati_suite(int instances, std::uint64_t seed, double tol = 1e-6);
SuiteReport run_symmetrization_suite(int instances, std::uint64_t seed);
SuiteReport run_isoperimetric_suite(int runs, int trials, std::uint64_t seed);

} // namespace isolab
