#pragma once

#include <cmath>
#include <functional>
#include <numbers>

namespace seclend {

inline double norm_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

inline double norm_pdf(double x, double mean, double sd) {
    return norm_pdf((x - mean) / sd) / sd;
}

inline double norm_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

/// Scaled complementary error function exp(x^2) * erfc(x).
/// Stable for large positive x where erfc underflows; for x < 0 uses the
/// reflection erfcx(-x) = 2 exp(x^2) - erfcx(x) (overflows near x < -26).
double erfcx(double x);

/// Undiscounted Gaussian call value E[(e^X - k)^+], X ~ Normal(mean, sd^2).
double gaussian_call(double mean, double sd, double strike);

/// Composite Simpson on [a, b] with n subintervals (n made even).
double simpson(const std::function<double(double)>& f, double a, double b, int n);

/// Adaptive Simpson to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 48);

} // namespace seclend
