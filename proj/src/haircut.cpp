#include "seclend/haircut.hpp"

#include <cmath>

namespace seclend {

TargetUnreachableError::TargetUnreachableError(const RatingTarget& target, double achieved,
                                               double h_max)
    : std::runtime_error("target " + (target.label.empty() ? std::string("<unlabeled>")
                                                           : target.label) +
                         " unreachable: objective at h_max " + std::to_string(h_max) + " is " +
                         std::to_string(achieved) + " > threshold " +
                         std::to_string(target.threshold)),
      achieved_(achieved), h_max_(h_max) {}

double default_h_max(Side side) { return side == Side::SecLending ? 1.0 : 0.99; }

HaircutResult solve_haircut(const std::function<double(double)>& objective,
                            const RatingTarget& target, const SolverSettings& settings,
                            const std::string& mode) {
    require_valid(target);
    if (!(settings.resolution > 0.0))
        throw std::invalid_argument("solve_haircut: resolution must be > 0");
    if (!(settings.h_max > 0.0))
        throw std::invalid_argument("solve_haircut: h_max must be > 0 (resolve side default)");

    HaircutResult res;
    res.target = target;
    res.mode = mode;

    auto eval = [&](double h) {
        ++res.evaluations;
        return objective(h);
    };

    const double f0 = eval(0.0);
    if (f0 <= target.threshold) {
        res.haircut = 0.0;
        res.achieved_metric = f0;
        return res;
    }

    const double r = settings.resolution;
    const long k_max = static_cast<long>(std::floor(settings.h_max / r + 1e-9));
    if (k_max < 1)
        throw std::invalid_argument("solve_haircut: h_max below one resolution step");
    const double f_max = eval(k_max * r);
    if (f_max > target.threshold)
        throw TargetUnreachableError(target, f_max, k_max * r);

    long lo = 0, hi = k_max; // f(lo r) > L0, f(hi r) <= L0 throughout
    double f_hi = f_max;
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        const double fm = eval(mid * r);
        if (fm <= target.threshold) {
            hi = mid;
            f_hi = fm;
        } else {
            lo = mid;
        }
    }
    res.haircut = hi * r;
    res.achieved_metric = f_hi;
    res.bracket_lo = lo * r;
    res.bracket_hi = hi * r;
    return res;
}

namespace {

SolverSettings resolve(const SolverSettings& settings, Side side) {
    SolverSettings s = settings;
    if (std::isnan(s.h_max))
        s.h_max = default_h_max(side);
    return s;
}

RatingTarget triple_a_target(RatingCriterion criterion, double pd_threshold) {
    if (criterion == RatingCriterion::ExpectedLoss)
        return moodys_target("Aaa");
    if (std::isnan(pd_threshold))
        throw std::invalid_argument(
            "triple-A PD criterion requires a configured pd_threshold; none is built in");
    return RatingTarget{RatingCriterion::DefaultProbability, pd_threshold, "AAA-PD"};
}

} // namespace

HaircutResult solve_haircut_independent(const DejdParams& dejd, const TransactionSpec& txn,
                                        const RatingTarget& target,
                                        const SolverSettings& settings_in) {
    require_valid(dejd);
    require_valid(txn);
    require_valid(target);
    const SolverSettings settings = resolve(settings_in, txn.side);
    const MprReturnDensity density(dejd, txn.mpr_years(), 1e-15);
    const double g = txn.liquidity_spread;
    const double quad_tol = std::max(1e-13, 1e-3 * target.threshold);
    auto objective = [&](double h) {
        if (txn.side == Side::SecLending) {
            const double strike = (1.0 + h) / (1.0 + g);
            if (target.criterion == RatingCriterion::ExpectedLoss)
                return (1.0 + g) * density.call_moment(strike, quad_tol);
            return 1.0 - density.cdf(std::log(strike));
        }
        const double strike = (1.0 - h) / (1.0 - g);
        if (target.criterion == RatingCriterion::ExpectedLoss)
            return (1.0 - g) * density.put_moment(strike, quad_tol);
        return density.cdf(std::log(strike));
    };
    return solve_haircut(objective, target, settings, "independent");
}

HaircutResult triple_a_haircut(const DejdParams& dejd, const CreditParams& credit,
                               const TransactionSpec& txn, RatingCriterion criterion,
                               std::size_t n_paths, std::uint64_t seed,
                               const TripleAOptions& opts) {
    require_valid(dejd);
    require_valid(txn);
    const RatingTarget target = triple_a_target(criterion, opts.pd_threshold);
    const SolverSettings settings = resolve(opts.solver, txn.side);

    if (opts.credit_worthless)
        return solve_haircut_independent(dejd, txn, target, settings);

    require_valid(credit);
    SimulationGrid grid{txn.horizon, txn.mpr_days};
    const JointExposures exposures =
        simulate_joint_exposures(dejd, credit, grid, n_paths, seed, opts.workers);
    HaircutObjective objective(exposures, txn, credit.recovery, criterion);
    return solve_haircut(objective, target, settings, "joint");
}

HaircutSchedule haircut_schedule(const DejdParams& dejd, const std::vector<CreditGrade>& grades,
                                 const std::vector<RatingTarget>& targets,
                                 const TransactionSpec& txn, std::size_t n_paths,
                                 std::uint64_t seed, const ScheduleOptions& opts) {
    require_valid(dejd);
    require_valid(txn);
    if (grades.empty() || targets.empty())
        throw std::invalid_argument("haircut_schedule: grades and targets must be nonempty");
    for (std::size_t i = 1; i < grades.size(); ++i)
        if (grades[i].params.ybar < grades[i - 1].params.ybar)
            throw std::invalid_argument(
                "haircut_schedule: grades must be ordered by worsening credit "
                "(nondecreasing mean intensity)");
    for (const auto& g : grades)
        require_valid(g.params);
    for (const auto& t : targets)
        require_valid(t);

    const SolverSettings settings = resolve(opts.solver, txn.side);
    HaircutSchedule schedule;
    schedule.grades = grades;
    schedule.targets = targets;
    schedule.cells.resize(grades.size());

    SimulationGrid grid{txn.horizon, txn.mpr_days};
    for (std::size_t gi = 0; gi < grades.size(); ++gi) {
        // Same base seed for every grade: worse grades default on a pathwise
        // superset of the better grades' default events.
        const JointExposures exposures = simulate_joint_exposures(
            dejd, grades[gi].params, grid, n_paths, seed, opts.workers);
        HaircutObjective el_objective(exposures, txn, grades[gi].params.recovery,
                                      RatingCriterion::ExpectedLoss);
        HaircutObjective pd_objective(exposures, txn, grades[gi].params.recovery,
                                      RatingCriterion::DefaultProbability);
        schedule.cells[gi].reserve(targets.size());
        for (const auto& target : targets) {
            const auto& objective = target.criterion == RatingCriterion::ExpectedLoss
                                        ? el_objective
                                        : pd_objective;
            schedule.cells[gi].push_back(
                solve_haircut([&](double h) { return objective(h); }, target, settings, "joint"));
        }
    }
    return schedule;
}

} // namespace seclend
