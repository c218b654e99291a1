#pragma once

#include <cmath>

#include "seclend/types.hpp"

namespace seclend {

/// Conditional sd of the exact log-OU transition over dt; reduces to
/// sigma sqrt(dt) as k -> 0.
inline double ou_transition_sd(const CreditParams& p, double dt) {
    if (p.k * dt < 1e-12)
        return p.sigma * std::sqrt(dt);
    return p.sigma * std::sqrt(-std::expm1(-2.0 * p.k * dt) / (2.0 * p.k));
}

/// Exact transition of log-intensity: y' = ybar + (y - ybar) e^{-k dt} + sd * z,
/// z a standard normal draw shared with the asset's correlated diffusion.
inline double sample_intensity_step(double y_prev, const CreditParams& p, double dt, double z) {
    const double decay = std::exp(-p.k * dt);
    return p.ybar + (y_prev - p.ybar) * decay + ou_transition_sd(p, dt) * z;
}

/// Stationary variance sigma^2 / (2k) of the log-intensity (k > 0).
inline double ou_stationary_variance(const CreditParams& p) {
    return p.sigma * p.sigma / (2.0 * p.k);
}

} // namespace seclend
