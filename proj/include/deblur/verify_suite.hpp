#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace deblur {

struct OracleCheck {
    std::string name;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct VerifyOptions {
    std::uint64_t seed = 20240917;
    /// Random problems per identity check; prox checks use 25x as many signals.
    std::size_t trials = 20;
    /// Perturbs one gamma entry before the gamma = t_K comparison (negative control).
    bool inject_fault = false;
};

std::vector<OracleCheck> run_verification_suite(const VerifyOptions& options = {});

bool all_passed(const std::vector<OracleCheck>& checks) noexcept;

} // namespace deblur
