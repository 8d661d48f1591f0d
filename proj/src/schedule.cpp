#include "deblur/schedule.hpp"

#include <cmath>

#include "deblur/errors.hpp"

namespace deblur {

Schedule build_schedule(std::size_t K) {
    if (K == 0) throw ParameterError("build_schedule: K must be >= 1");
    Schedule s;
    s.K = K;
    s.alpha.resize(K + 1);
    s.alpha[0] = 1.0;
    for (std::size_t k = 1; k < K; ++k) {
        s.alpha[k] = (1.0 + std::sqrt(1.0 + 4.0 * s.alpha[k - 1] * s.alpha[k - 1])) / 2.0;
    }
    s.alpha[K] = (1.0 + std::sqrt(1.0 + 8.0 * s.alpha[K - 1] * s.alpha[K - 1])) / 2.0;

    const double aK2 = s.alpha[K] * s.alpha[K];
    s.gamma.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        const double a = s.alpha[k];
        s.gamma[k] = (2.0 * a / aK2) * (aK2 - 2.0 * a * a + a);
    }
    return s;
}

std::vector<double> nesterov_sequence(std::size_t count) {
    std::vector<double> a(count);
    if (count == 0) return a;
    a[0] = 1.0;
    for (std::size_t k = 1; k < count; ++k) a[k] = (1.0 + std::sqrt(1.0 + 4.0 * a[k - 1] * a[k - 1])) / 2.0;
    return a;
}

} // namespace deblur
