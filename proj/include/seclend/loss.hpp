#pragma once

#include <iosfwd>

#include "seclend/dejd.hpp"
#include "seclend/path_sim.hpp"
#include "seclend/types.hpp"

namespace seclend {

struct RiskMetrics {
    double el = 0.0;
    double el_stderr = 0.0;
    double pd = 0.0; // probability of any loss
    double pd_stderr = 0.0;
    double es = 0.0; // unconditional tail mean at es_confidence
    double es_stderr = 0.0;
    double es_confidence = 0.99;
    std::size_t path_count = 0;
    bool es_tail_thin = false; // fewer than 20 samples in the averaged tail
};

/// Eq. 1 loss on one simulated path, as a fraction of initial notional:
/// lending  (1-R) e^{X(tau)} ((1+g) e^{dX} - (1+h))^+
/// repo     (1-R) e^{X(tau)} ((1-h) - (1-g) e^{dX})^+
double loss_from_exposure(const DefaultRecord& d, const TransactionSpec& txn, double recovery);

LossSample loss_from_path(const PathSample& path, const TransactionSpec& txn,
                          const CreditParams& credit);

/// Maps simulated exposures through the loss function. Zero-loss paths are
/// retained so the estimators are plain functions of the sample vector.
LossDistribution losses(const JointExposures& exposures, const TransactionSpec& txn,
                        double recovery);

/// Borrower-independent Eq. 2 losses (Gamma = 1, R = 0, unit growth).
LossDistribution losses(const IndependentExposures& exposures, const TransactionSpec& txn);

LossDistribution build_distribution_joint(const DejdParams& dejd, const CreditParams& credit,
                                          const TransactionSpec& txn, std::size_t n_paths,
                                          std::uint64_t seed, int workers = 1);

LossDistribution build_distribution_independent(const DejdParams& dejd,
                                                const TransactionSpec& txn, std::size_t n_paths,
                                                std::uint64_t seed, int workers = 1);

/// Sample-mean / tail-mean estimators with Monte Carlo standard errors.
/// ES averages the worst ceil((1-confidence) n) samples, zeros included.
RiskMetrics metrics(const LossDistribution& dist, double es_confidence = 0.99);

/// Common-random-number objective: losses are re-priced at any haircut from
/// one frozen exposure set, so EL and PD are exactly (not statistically)
/// nonincreasing in h. Evaluations cost O(log n) from sorted prefix sums.
class HaircutObjective {
  public:
    HaircutObjective(const JointExposures& exposures, const TransactionSpec& txn,
                     double recovery, RatingCriterion criterion);
    HaircutObjective(const IndependentExposures& exposures, const TransactionSpec& txn,
                     RatingCriterion criterion);

    double operator()(double haircut) const;

    RiskMetrics metrics_at(double haircut, double es_confidence) const;

  private:
    void finalize();
    Side side_;
    double liquidity_spread_ = 0.0;
    RatingCriterion criterion_;
    std::size_t path_count_ = 0;
    // Per defaulted path: scale a_i = (1-R) growth_i and the side-adjusted
    // gross return; sorted so any haircut level is a binary search.
    std::vector<double> scaled_return_; // lending: (1+g) r_i, repo: (1-g) r_i
    std::vector<double> scale_;         // a_i, sorted alongside
    std::vector<double> prefix_scale_;
    std::vector<double> prefix_scaled_return_;
};

/// Analytic borrower-independent loss metrics: the Eq. 2 payoff integrated
/// against the Poisson-truncated MPR return density.
class AnalyticIndependentLoss {
  public:
    AnalyticIndependentLoss(const DejdParams& dejd, const TransactionSpec& txn,
                            double tail_tol = 1e-15, double quad_tol = 1e-12);

    double el() const;
    double pd() const;
    /// Unconditional tail mean at the given confidence.
    double es(double confidence) const;

    const MprReturnDensity& density() const { return density_; }

  private:
    TransactionSpec txn_;
    MprReturnDensity density_;
    double quad_tol_;
    double strike() const;
};

/// CSV export in "loss,defaulted,tau" rows (tau blank when no default).
void write_loss_csv(const LossDistribution& dist, std::ostream& os);

} // namespace seclend
