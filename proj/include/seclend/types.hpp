#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "seclend/rng.hpp"

namespace seclend {

/// Business-day convention used throughout: margin periods of risk are quoted
/// in business days and convert to year fractions as days / 250.
inline constexpr double kBusinessDaysPerYear = 250.0;

inline double business_days_to_years(int days) { return days / kBusinessDaysPerYear; }

/// Double-exponential jump-diffusion asset parameters.
/// Log-return dynamics: dX = mu dt + sigma_a dW + jump, jumps arriving at
/// rate lambda_a with up magnitude Exp(eta) w.p. p_u and down magnitude
/// -Exp(theta) w.p. 1 - p_u.
struct DejdParams {
    double mu = 0.0;       // drift, per year
    double sigma_a = 0.0;  // diffusion volatility, per sqrt-year
    double lambda_a = 0.0; // jump intensity, per year
    double p_u = 0.5;      // up-jump probability
    double eta = 2.0;      // up-jump rate (> 1 so E[e^X] is finite)
    double theta = 2.0;    // down-jump rate (> 0)

    double q_d() const { return 1.0 - p_u; }
};

/// Log-OU (Black-Karasinski) default-intensity parameters plus recovery and
/// asset-credit correlation: d log(lambda) = k (ybar - log(lambda)) dt + sigma dW.
struct CreditParams {
    double k = 0.0;        // mean-reversion speed, per year
    double ybar = 0.0;     // long-run mean of log-intensity
    double sigma = 0.0;    // log-intensity volatility, per sqrt-year
    double y0 = 0.0;       // initial log-intensity
    double recovery = 0.0; // recovery rate R in [0, 1)
    double rho = 0.0;      // correlation between credit and asset Brownians
};

enum class Side { SecLending, Repo };

std::string to_string(Side side);
Side side_from_string(const std::string& s);

/// One securities-lending or repo transaction. Haircut h and liquidity
/// spread g are decimal fractions; collateral is (1+h) B(t) for lending and
/// (1-h) B(t) enters the repo loss with the signs flipped.
struct TransactionSpec {
    double haircut = 0.0;          // h
    double liquidity_spread = 0.0; // g, ask-to-fair spread
    int mpr_days = 3;              // margin period of risk, business days
    Side side = Side::SecLending;
    double notional = 1.0;         // B0
    double horizon = 1.0;          // default-indicator horizon T, years

    double mpr_years() const { return business_days_to_years(mpr_days); }
};

enum class RatingCriterion { ExpectedLoss, DefaultProbability };

std::string to_string(RatingCriterion c);
RatingCriterion criterion_from_string(const std::string& s);

/// A rating target: EL threshold (fraction of notional) or PD threshold
/// (probability of any loss), with a display label.
struct RatingTarget {
    RatingCriterion criterion = RatingCriterion::ExpectedLoss;
    double threshold = 0.0;
    std::string label;
};

/// Moody's idealized 1-year expected-loss rates for the top grades.
const std::map<std::string, double>& moodys_el_targets();

/// S&P-style 1-year PD thresholds are not built in; this table ships empty
/// and must be supplied via configuration.
const std::map<std::string, double>& pd_targets();

/// Builds an EL target from the built-in Moody's table. Throws if the label
/// is unknown.
RatingTarget moodys_target(const std::string& label);

struct LossSample {
    double loss = 0.0;   // fraction of initial notional, >= 0
    bool defaulted = false;
    double tau = std::numeric_limits<double>::quiet_NaN(); // years, set iff defaulted
};

struct LossDistribution {
    std::vector<LossSample> samples;
    std::size_t path_count = 0;
    SeedDescriptor seed_descriptor;
};

/// The indemnification charge decomposition. All levels are decimal
/// fractions of loaned-security market value, annualized; basis points are a
/// display concern only.
struct IndemnitySheet {
    double transaction_haircut = 0.0; // h_c
    double triple_a_haircut = 0.0;    // \ddot{h}_c
    double gap = 0.0;                 // max(hddot - h, 0)
    double el = 0.0;
    double es = 0.0;
    double redundant_fund = 0.0; // max(gap - el - es, 0)
    double cost_of_capital = 0.0; // s_c
    double funding_spread = 0.0;  // s_f
    double risk_charge = 0.0;
    double capital_charge = 0.0;
    double funding_charge = 0.0;
    double total = 0.0;
    bool undercapitalized_gap = false; // gap > 0 but el + es > gap
};

inline double to_bps(double fraction) { return fraction * 1.0e4; }
inline double from_bps(double bps) { return bps * 1.0e-4; }

struct ValidationReport {
    std::vector<std::string> errors;
    bool ok() const { return errors.empty(); }
    std::string joined() const;
};

ValidationReport validate(const DejdParams& p);
ValidationReport validate(const CreditParams& p);
ValidationReport validate(const TransactionSpec& t);
ValidationReport validate(const RatingTarget& t);

/// Returns the value unchanged if it validates; throws std::invalid_argument
/// listing every violated invariant otherwise. Out-of-range inputs are
/// rejected, never repaired.
template <typename T>
const T& require_valid(const T& value) {
    ValidationReport report = validate(value);
    if (!report.ok())
        throw std::invalid_argument(report.joined());
    return value;
}

} // namespace seclend
