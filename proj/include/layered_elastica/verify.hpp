#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "layered_elastica/medium.hpp"

namespace le {

struct VerifyOptions {
    std::uint64_t seed = 7;
};

struct Metric {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool upper = true;  // pass when value <= threshold, else value >= threshold
    bool pass = false;
    bool error = true;  // counts toward max_error (false for ratios, rates, timings)
};

struct SuiteReport {
    std::string name;
    std::string description;
    std::uint64_t seed = 0;
    std::vector<Metric> metrics;
    std::vector<std::string> notes;
    double runtime = 0.0;
    double runtime_limit = 0.0;
    bool pass = false;

    std::string to_json() const;
};

// Suite names in the order `verify --all` runs them:
// stress-identity, spectral-system, sommerfeld, green2d, green3d, degenerate-media,
// far-field, radiation, angular-identities, bie2d-flat, bie2d-rough.
const std::vector<std::string>& suite_names();

// One-line summary of what a suite checks.
std::string suite_description(const std::string& name);

// Throws invalid_input for an unknown name.
SuiteReport run_suite(const std::string& name, const VerifyOptions& opt = {});

// Medium used by the suites.
ElasticMedium verify_medium(int dim);

}  // namespace le
