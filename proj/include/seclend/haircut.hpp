#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "seclend/loss.hpp"
#include "seclend/types.hpp"

namespace seclend {

struct HaircutResult {
    double haircut = 0.0;         // h*, smallest grid haircut meeting the target
    double achieved_metric = 0.0; // objective at h*
    RatingTarget target;
    double bracket_lo = 0.0; // objective(bracket_lo) > threshold unless h* = 0
    double bracket_hi = 0.0; // = h*
    std::string mode;        // "joint" or "independent"
    std::size_t evaluations = 0;
};

class TargetUnreachableError : public std::runtime_error {
  public:
    TargetUnreachableError(const RatingTarget& target, double achieved, double h_max);
    double achieved() const { return achieved_; }
    double h_max() const { return h_max_; }

  private:
    double achieved_;
    double h_max_;
};

struct SolverSettings {
    double resolution = 1e-4; // 1 bp of haircut
    /// NaN resolves to the side default: 1.0 for lending, 0.99 for repo.
    double h_max = std::numeric_limits<double>::quiet_NaN();
};

double default_h_max(Side side);

/// Smallest haircut on the resolution grid {0, r, 2r, ...} with
/// objective(h) <= threshold, found by binary search. The objective must be
/// nonincreasing in h (common random numbers or quadrature), which makes the
/// result identical to an exhaustive grid scan and gives the bracket property
/// objective(h*) <= L0 < objective(h* - r) directly.
HaircutResult solve_haircut(const std::function<double(double)>& objective,
                            const RatingTarget& target, const SolverSettings& settings,
                            const std::string& mode = "joint");

/// Borrower-independent (credit-worthless Eq. 2) solve on the analytic
/// MPR-return density: deterministic, no Monte Carlo noise.
HaircutResult solve_haircut_independent(const DejdParams& dejd, const TransactionSpec& txn,
                                        const RatingTarget& target,
                                        const SolverSettings& settings);

struct TripleAOptions {
    /// Required when criterion is DefaultProbability; no threshold ships
    /// built in.
    double pd_threshold = std::numeric_limits<double>::quiet_NaN();
    SolverSettings solver;
    /// Credit-worthless Eq. 2 mode: ignores the borrower entirely and solves
    /// on the analytic MPR-return density.
    bool credit_worthless = false;
    int workers = 1;
};

/// Solves for the triple-A haircut: Moody's Aaa EL threshold 3.00e-7 under
/// the EL criterion, or the configured PD threshold.
HaircutResult triple_a_haircut(const DejdParams& dejd, const CreditParams& credit,
                               const TransactionSpec& txn, RatingCriterion criterion,
                               std::size_t n_paths, std::uint64_t seed,
                               const TripleAOptions& opts = {});

struct CreditGrade {
    std::string label;
    CreditParams params;
};

struct HaircutSchedule {
    std::vector<CreditGrade> grades;   // rows, best credit first
    std::vector<RatingTarget> targets; // columns, tightest target first
    std::vector<std::vector<HaircutResult>> cells; // [grade][target]
};

struct ScheduleOptions {
    SolverSettings solver;
    int workers = 1;
};

/// Full grades x targets grid. Every grade reuses the same base seed
/// (shared sample-generation scheme) and every target within a row is solved
/// on the same frozen path set, so row monotonicity is exact.
/// Grades must be ordered by worsening credit (nondecreasing mean intensity).
HaircutSchedule haircut_schedule(const DejdParams& dejd, const std::vector<CreditGrade>& grades,
                                 const std::vector<RatingTarget>& targets,
                                 const TransactionSpec& txn, std::size_t n_paths,
                                 std::uint64_t seed, const ScheduleOptions& opts = {});

} // namespace seclend
