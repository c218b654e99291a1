#pragma once

#include <functional>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "seclend/types.hpp"

namespace seclend {

/// Double-exponential jump magnitude density
/// f_Y(y) = p_u eta e^{-eta y} 1{y >= 0} + q_d theta e^{theta y} 1{y < 0}.
double jump_density(double y, const DejdParams& p);

/// E[X(dt)] = mu dt + lambda_a dt (p_u/eta - q_d/theta).
double dejd_mean_increment(const DejdParams& p, double dt);

/// Var[X(dt)] = sigma_a^2 dt + lambda_a dt (2 p_u/eta^2 + 2 q_d/theta^2).
double dejd_variance_increment(const DejdParams& p, double dt);

/// Third central moment (= third cumulant): lambda_a dt 6 (p_u/eta^3 - q_d/theta^3).
double dejd_third_central_moment(const DejdParams& p, double dt);

/// Cumulant generating function psi(r) dt with
/// psi(r) = mu r + sigma_a^2 r^2 / 2 + lambda_a (p_u eta/(eta-r) + q_d theta/(theta+r) - 1),
/// finite for r in (-theta, eta). E[e^{r X(dt)}] = exp(dejd_log_mgf(p, dt, r)).
double dejd_log_mgf(const DejdParams& p, double dt, double r);

/// E[e^{X(dt)}]; finite because eta > 1.
inline double dejd_exp_moment(const DejdParams& p, double dt) {
    return std::exp(dejd_log_mgf(p, dt, 1.0));
}

/// Chernoff bound on P(X(dt) > x) (upper = true) or P(X(dt) < x),
/// minimized over the admissible tilt. Used to size quadrature grids.
double dejd_tail_bound(const DejdParams& p, double dt, double x, bool upper);

/// Compound-Poisson jump part of one increment: Poisson(lambda_a dt) double
/// exponential jumps. Exposed separately so the diffusion draw can share a
/// Brownian with the credit process.
double sample_jump_sum(const DejdParams& p, double dt, std::mt19937_64& rng);

/// Assembles an increment from an externally drawn standard normal and a
/// jump sum: mu dt + sigma_a sqrt(dt) z + jumps.
inline double dejd_increment(const DejdParams& p, double dt, double diffusion_z,
                             double jump_sum) {
    return p.mu * dt + p.sigma_a * std::sqrt(dt) * diffusion_z + jump_sum;
}

/// One log-return increment over dt with its own draws.
double sample_dejd_increment(const DejdParams& p, double dt, std::mt19937_64& rng);

/// Density of X(u) as the Poisson-weighted mixture over jump counts: the
/// Gaussian diffusion convolved with Erlang mixtures collected from the
/// double-exponential jump sum. Poisson truncation at n_max with the omitted
/// mass reported.
class MprReturnDensity {
  public:
    /// tail_tol bounds the omitted Poisson mass; n_max grows to meet it.
    MprReturnDensity(const DejdParams& p, double window_years, double tail_tol = 1e-12);

    double pdf(double x) const;
    double operator()(double x) const { return pdf(x); }

    /// CDF of the truncated mixture by adaptive integration of pdf.
    double cdf(double x) const;

    /// E[(e^X - strike)^+ 1{X > lower_cut}] under the truncated density, by
    /// adaptive quadrature; the analytic bound on what truncation and the
    /// finite grid omit must stay below tol or this throws.
    double call_moment(double strike, double tol = 1e-10,
                       double lower_cut = -std::numeric_limits<double>::infinity()) const;

    /// E[(strike - e^X)^+ 1{X < upper_cut}] under the truncated density.
    double put_moment(double strike, double tol = 1e-10,
                      double upper_cut = std::numeric_limits<double>::infinity()) const;

    int n_max() const { return n_max_; }
    double truncation_mass() const { return truncation_mass_; }
    /// Bound on the truncated part of E[e^X 1{N > n_max}].
    double truncated_exp_mass() const { return truncated_exp_mass_; }
    double window() const { return window_; }
    const DejdParams& params() const { return params_; }

    /// Integration span [lo, hi] outside which the density mass is below tol.
    std::pair<double, double> support_span(double tol = 1e-12) const;

    /// Adaptive integral of f over [a, b], chunked at the density's own
    /// scale so narrow peaks inside wide spans are never missed.
    double integrate(const std::function<double(double)>& f, double a, double b,
                     double tol) const;

  private:
    DejdParams params_;
    double window_ = 0.0;
    double mean_gauss_ = 0.0; // mu * u
    double sd_gauss_ = 0.0;   // sigma_a * sqrt(u)
    int n_max_ = 0;
    double w0_ = 0.0;               // Poisson(0) weight on the pure Gaussian
    Eigen::ArrayXd w_up_, w_down_;  // Erlang(i, eta) / Erlang(j, theta) weights
    double truncation_mass_ = 0.0;
    double truncated_exp_mass_ = 0.0;
};

/// Tabulated density over an explicit grid, with cumulative probabilities and
/// the truncation report. The grid is uniform with n_points samples.
struct DensityTable {
    Eigen::ArrayXd x;
    Eigen::ArrayXd pdf;
    Eigen::ArrayXd cdf;
    double truncation_mass = 0.0;
    double integral = 0.0;
};

DensityTable tabulate_density(const MprReturnDensity& density, double x_lo, double x_hi,
                              int n_points);

/// Auto-spanned table: grid covers all but span_tol of the mass.
DensityTable tabulate_density(const MprReturnDensity& density, int n_points,
                              double span_tol = 1e-12);

} // namespace seclend
