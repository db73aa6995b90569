#pragma once

#include <string>
#include <vector>

#include "fattail/config.hpp"

namespace fattail {

struct CheckResult {
    std::string key;
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    bool all_passed() const;
    std::string to_json() const;
};

struct VerifyOptions {
    int n = 400;
    unsigned seed = 20240611u;
    // asymmetric scattering kernel perturbation; nonzero makes dissipativity fail
    double mutate = 0.0;
};

// Largest eigenvalue of the symmetric part of L in L^2(dmu), relative to its norm.
double dissipativity_defect(const CollisionOperator& op);

VerifyReport verify_suite(const AppConfig& cfg, const VerifyOptions& opts = {});

}  // namespace fattail
