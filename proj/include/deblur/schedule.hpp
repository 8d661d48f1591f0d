#pragma once

#include <cstddef>
#include <vector>

namespace deblur {

/// Momentum and step multipliers for a run of exactly K iterations.
///
///   alpha[0] = 1
///   alpha[k] = (1 + sqrt(1 + 4 alpha[k-1]^2)) / 2        1 <= k <= K-1
///   alpha[K] = (1 + sqrt(1 + 8 alpha[K-1]^2)) / 2
///   gamma[k] = (2 alpha[k] / alpha[K]^2) (alpha[K]^2 - 2 alpha[k]^2 + alpha[k])
///
/// gamma depends on alpha[K], so K has to be fixed before iterating.
struct Schedule {
    std::size_t K = 0;
    std::vector<double> alpha;  // K + 1 entries
    std::vector<double> gamma;  // K entries
};

Schedule build_schedule(std::size_t K);

/// Plain Nesterov/FISTA sequence: a[0] = 1, a[k+1] = (1 + sqrt(1 + 4 a[k]^2)) / 2.
/// Has `count` entries.
std::vector<double> nesterov_sequence(std::size_t count);

} // namespace deblur
