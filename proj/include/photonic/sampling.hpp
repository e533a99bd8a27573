#pragma once

#include <random>

#include "photonic/router.hpp"

namespace photonic {

/// Uniform-on-the-Bloch-sphere polarization state, reproducible from the
/// caller's seeded engine.
inline SignalQubit random_signal(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double polar = std::acos(1 - 2 * uni(rng));
    double az = 2 * std::numbers::pi * uni(rng);
    SignalQubit q;
    q.alpha = cplx{std::cos(polar / 2), 0.0};
    q.beta = std::exp(cplx{0, 1} * az) * std::sin(polar / 2);
    return q;
}

} // namespace photonic
