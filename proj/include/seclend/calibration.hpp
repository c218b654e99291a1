#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "seclend/dejd.hpp"
#include "seclend/types.hpp"

namespace seclend {

/// Daily log-returns computed from adjusted closes, log(P_t / P_{t-1}).
/// Dates are strictly increasing; calendar gaps are simply absent days.
struct ReturnSeries {
    std::vector<std::string> dates; // ISO-8601, one per return (the P_t date)
    std::vector<double> log_returns;
    std::string source;
};

class CsvError : public std::runtime_error {
  public:
    CsvError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

/// Reads a "date,close" CSV (header required). Throws CsvError with the
/// offending 1-based line number on malformed rows or non-increasing dates.
ReturnSeries load_return_series_csv(const std::string& path);

ReturnSeries return_series_from_closes(const std::vector<std::string>& dates,
                                       const std::vector<double>& closes, std::string source);

struct LikelihoodDiagnostics {
    int floored_observations = 0;
};

/// Sum over observations of the log mixture density at dt = 1/250. Densities
/// below floor_density are floored there and counted in the diagnostics.
double log_likelihood(const ReturnSeries& series, const DejdParams& params,
                      LikelihoodDiagnostics* diag = nullptr, double floor_density = 1e-300);

struct ParamBounds {
    double mu_lo = -5.0, mu_hi = 5.0;
    double sigma_lo = 1e-4, sigma_hi = 5.0;
    double lambda_lo = 1e-3, lambda_hi = 2500.0;
    double pu_lo = 1e-6, pu_hi = 1.0 - 1e-6;
    double eta_lo = 1.0 + 1e-6, eta_hi = 5000.0;
    double theta_lo = 1e-4, theta_hi = 5000.0;
};

struct FitReport {
    DejdParams params;
    double log_likelihood = 0.0;
    int iterations = 0;
    bool converged = false;
    /// Order: mu, sigma_a, lambda_a, p_u, eta, theta. NaN when the observed
    /// information matrix is not positive definite (e.g. jumps pinned at a
    /// bound on jump-free data).
    std::array<double, 6> std_errors{};
    int starts_tried = 0;
    int floored_observations = 0;
    bool short_history_warning = false; // below ~5y of daily data
};

class FitError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bounded quasi-Newton maximum likelihood from init plus a deterministic
/// multi-start grid over jump initializations; returns the best converged
/// fit. Throws FitError with per-start diagnostics when no start converges.
/// Series shorter than 500 observations are rejected.
FitReport fit_dejd(const ReturnSeries& series, const DejdParams& init,
                   const ParamBounds& bounds = {});

struct CdsOverrides {
    double k = 0.5;     // assumed defaults, flagged in output when not overridden
    double sigma = 1.0;
    double rho = 0.0;
    std::optional<double> y0; // defaults to ybar
};

/// Credit-triangle mapping: mean intensity = spread / (1 - R), ybar = log of
/// it, y0 = ybar unless overridden.
CreditParams cds_to_credit(double spread_bp, double recovery,
                           const CdsOverrides& overrides = {});

} // namespace seclend
