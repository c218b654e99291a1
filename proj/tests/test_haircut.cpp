#include <doctest.h>

#include <cmath>

#include "seclend/haircut.hpp"

using namespace seclend;

namespace {
const DejdParams kAsset{0.05, 0.2, 25.0, 0.4, 60.0, 45.0};

TransactionSpec lending(double h, double g, int mpr = 3) {
    TransactionSpec t;
    t.haircut = h;
    t.liquidity_spread = g;
    t.mpr_days = mpr;
    t.side = Side::SecLending;
    return t;
}

CreditParams flat_intensity(double lambda, double recovery = 0.0, double rho = 0.0) {
    return CreditParams{0.0, std::log(lambda), 0.0, std::log(lambda), recovery, rho};
}
} // namespace

TEST_CASE("vacuous target solves to zero haircut") {
    const RatingTarget vacuous{RatingCriterion::ExpectedLoss, 1.0, "anything"};
    std::size_t evals = 0;
    const HaircutResult r = solve_haircut(
        [&](double) {
            ++evals;
            return 0.5;
        },
        vacuous, SolverSettings{1e-4, 1.0});
    CHECK(r.haircut == 0.0);
    CHECK(r.achieved_metric == 0.5);
    CHECK(evals == 1);
}

TEST_CASE("unreachable target raises with the achieved metric at h_max") {
    const RatingTarget target{RatingCriterion::ExpectedLoss, 1e-9, "tight"};
    auto objective = [](double h) { return 0.1 * std::exp(-h); };
    try {
        solve_haircut(objective, target, SolverSettings{1e-4, 1.0});
        FAIL("expected TargetUnreachableError");
    } catch (const TargetUnreachableError& e) {
        CHECK(e.achieved() == doctest::Approx(0.1 * std::exp(-1.0)));
        CHECK(e.h_max() == doctest::Approx(1.0));
    }
}

TEST_CASE("solver equals exhaustive grid search and brackets the threshold") {
    // 1e5-path common-random-number fixture.
    CreditParams credit = flat_intensity(0.25, 0.0, 0.0);
    const TransactionSpec txn = lending(0.0, 0.01);
    const JointExposures exposures =
        simulate_joint_exposures(kAsset, credit, SimulationGrid{1.0, 3}, 100'000, 2718, 2);
    const HaircutObjective objective(exposures, txn, credit.recovery,
                                     RatingCriterion::ExpectedLoss);

    const double resolution = 1e-4;
    for (double threshold : {3e-4, 5e-5, 1e-5, 2e-6}) {
        const RatingTarget target{RatingCriterion::ExpectedLoss, threshold, "fixture"};
        const HaircutResult r = solve_haircut([&](double h) { return objective(h); }, target,
                                              SolverSettings{resolution, 1.0});
        // Exhaustive scan at the same resolution.
        double grid_h = -1.0;
        for (long k = 0;; ++k) {
            const double h = k * resolution;
            if (h > 1.0)
                break;
            if (objective(h) <= threshold) {
                grid_h = h;
                break;
            }
        }
        REQUIRE(grid_h >= 0.0);
        CHECK(r.haircut == grid_h);
        // Bracket property.
        CHECK(objective(r.haircut) <= threshold);
        if (r.haircut > 0.0)
            CHECK(objective(r.haircut - resolution) > threshold);
        CHECK(r.achieved_metric == objective(r.haircut));
    }
}

TEST_CASE("solver output is deterministic across repeat solves") {
    CreditParams credit = flat_intensity(0.1);
    const JointExposures exposures =
        simulate_joint_exposures(kAsset, credit, SimulationGrid{1.0, 3}, 50'000, 5, 2);
    const HaircutObjective objective(exposures, lending(0.0, 0.0), 0.0,
                                     RatingCriterion::ExpectedLoss);
    const RatingTarget target{RatingCriterion::ExpectedLoss, 1e-4, "x"};
    const HaircutResult a =
        solve_haircut([&](double h) { return objective(h); }, target, SolverSettings{1e-4, 1.0});
    const HaircutResult b =
        solve_haircut([&](double h) { return objective(h); }, target, SolverSettings{1e-4, 1.0});
    CHECK(a.haircut == b.haircut);
    CHECK(a.achieved_metric == b.achieved_metric);
    CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("tightening the threshold never lowers the solved haircut") {
    CreditParams credit = flat_intensity(0.25);
    const JointExposures exposures =
        simulate_joint_exposures(kAsset, credit, SimulationGrid{1.0, 3}, 50'000, 6, 2);
    const HaircutObjective objective(exposures, lending(0.0, 0.01), 0.0,
                                     RatingCriterion::ExpectedLoss);
    double prev = 0.0;
    for (double threshold : {1e-3, 3e-4, 1e-4, 3e-5, 1e-5}) {
        const RatingTarget target{RatingCriterion::ExpectedLoss, threshold, "t"};
        const HaircutResult r = solve_haircut([&](double h) { return objective(h); }, target,
                                              SolverSettings{1e-4, 1.0});
        CHECK(r.haircut >= prev);
        prev = r.haircut;
    }
}

TEST_CASE("solved haircut is nonincreasing in the recovery rate (same paths)") {
    CreditParams credit = flat_intensity(0.25);
    const JointExposures exposures =
        simulate_joint_exposures(kAsset, credit, SimulationGrid{1.0, 3}, 50'000, 8, 2);
    const RatingTarget target{RatingCriterion::ExpectedLoss, 5e-5, "t"};
    double prev = 1.0;
    for (double recovery : {0.0, 0.2, 0.4, 0.6}) {
        const HaircutObjective objective(exposures, lending(0.0, 0.01), recovery,
                                         RatingCriterion::ExpectedLoss);
        const HaircutResult r = solve_haircut([&](double h) { return objective(h); }, target,
                                              SolverSettings{1e-4, 1.0});
        CHECK(r.haircut <= prev);
        prev = r.haircut;
        // PD is indifferent to recovery.
        const HaircutObjective pd(exposures, lending(0.0, 0.01), recovery,
                                  RatingCriterion::DefaultProbability);
        CHECK(pd(0.05) ==
              HaircutObjective(exposures, lending(0.0, 0.01), 0.0,
                               RatingCriterion::DefaultProbability)(0.05));
    }
}

TEST_CASE("triple-A haircut for a riskless borrower is zero") {
    CreditParams credit = flat_intensity(1e-12);
    const HaircutResult r = triple_a_haircut(kAsset, credit, lending(0.0, 0.0),
                                             RatingCriterion::ExpectedLoss, 20'000, 3);
    CHECK(r.haircut == 0.0);
    CHECK(r.mode == "joint");
}

TEST_CASE("credit-worthless triple-A haircut dominates the joint-mode haircut") {
    CreditParams credit = flat_intensity(0.04, 0.0, 0.0);
    const TransactionSpec txn = lending(0.0, 0.0);
    TripleAOptions opts;
    const HaircutResult joint = triple_a_haircut(kAsset, credit, txn,
                                                 RatingCriterion::ExpectedLoss, 200'000, 44, opts);
    opts.credit_worthless = true;
    const HaircutResult worthless = triple_a_haircut(
        kAsset, credit, txn, RatingCriterion::ExpectedLoss, 200'000, 44, opts);
    CHECK(worthless.mode == "independent");
    CHECK(worthless.haircut >= joint.haircut);
    CHECK(worthless.haircut > 0.0);
}

TEST_CASE("PD criterion requires a configured threshold") {
    CreditParams credit = flat_intensity(0.04);
    CHECK_THROWS_AS(triple_a_haircut(kAsset, credit, lending(0.0, 0.0),
                                     RatingCriterion::DefaultProbability, 1000, 1),
                    std::invalid_argument);
    TripleAOptions opts;
    opts.pd_threshold = 1e-4;
    opts.credit_worthless = true;
    const HaircutResult r = triple_a_haircut(kAsset, credit, lending(0.0, 0.0),
                                             RatingCriterion::DefaultProbability, 1000, 1, opts);
    CHECK(r.haircut > 0.0);
    CHECK(r.target.criterion == RatingCriterion::DefaultProbability);
}

TEST_CASE("independent-mode haircuts increase strictly with the MPR") {
    const RatingTarget aaa = moodys_target("Aaa");
    double prev = 0.0;
    for (int mpr : {1, 3, 5}) {
        const HaircutResult r =
            solve_haircut_independent(kAsset, lending(0.0, 0.0, mpr), aaa, SolverSettings{});
        CHECK(r.haircut > prev);
        prev = r.haircut;
    }
}

TEST_CASE("haircut schedule: single cell equals a direct solve") {
    CreditParams credit = flat_intensity(0.1, 0.3, 0.2);
    const TransactionSpec txn = lending(0.0, 0.01);
    const RatingTarget target{RatingCriterion::ExpectedLoss, 1e-4, "AA"};
    const HaircutSchedule schedule = haircut_schedule(
        kAsset, {CreditGrade{"BBB", credit}}, {target}, txn, 50'000, 7, ScheduleOptions{});
    REQUIRE(schedule.cells.size() == 1);
    REQUIRE(schedule.cells[0].size() == 1);

    const JointExposures exposures =
        simulate_joint_exposures(kAsset, credit, SimulationGrid{1.0, 3}, 50'000, 7, 1);
    const HaircutObjective objective(exposures, txn, credit.recovery,
                                     RatingCriterion::ExpectedLoss);
    const HaircutResult direct =
        solve_haircut([&](double h) { return objective(h); }, target, SolverSettings{1e-4, 1.0});
    CHECK(schedule.cells[0][0].haircut == direct.haircut);
}

TEST_CASE("haircut schedule is monotone across rows and columns") {
    // Grades share (k, sigma, rho) and differ only in the mean intensity, so
    // defaults are pathwise nested across rows under the shared seed.
    std::vector<CreditGrade> grades;
    for (auto [label, lam] : {std::pair{"A", 0.01}, {"BBB", 0.05}, {"B", 0.25}}) {
        CreditParams c{0.5, std::log(lam), 1.0, std::log(lam), 0.3, 0.2};
        grades.push_back(CreditGrade{label, c});
    }
    std::vector<RatingTarget> targets{{RatingCriterion::ExpectedLoss, 1e-5, "AAA"},
                                      {RatingCriterion::ExpectedLoss, 5e-5, "AA"},
                                      {RatingCriterion::ExpectedLoss, 2e-4, "A"}};
    const HaircutSchedule schedule = haircut_schedule(kAsset, grades, targets,
                                                      lending(0.0, 0.01), 60'000, 11,
                                                      ScheduleOptions{});
    for (std::size_t gi = 0; gi < schedule.cells.size(); ++gi)
        for (std::size_t ti = 1; ti < schedule.cells[gi].size(); ++ti)
            CHECK(schedule.cells[gi][ti].haircut <= schedule.cells[gi][ti - 1].haircut);
    for (std::size_t gi = 1; gi < schedule.cells.size(); ++gi)
        for (std::size_t ti = 0; ti < schedule.cells[gi].size(); ++ti)
            CHECK(schedule.cells[gi][ti].haircut >= schedule.cells[gi - 1][ti].haircut);
}

TEST_CASE("schedule rejects grades ordered by improving credit") {
    CreditParams better{0.5, std::log(0.01), 1.0, std::log(0.01), 0.0, 0.0};
    CreditParams worse{0.5, std::log(0.25), 1.0, std::log(0.25), 0.0, 0.0};
    const std::vector<RatingTarget> targets{{RatingCriterion::ExpectedLoss, 1e-4, "AA"}};
    CHECK_THROWS_AS(haircut_schedule(kAsset, {CreditGrade{"B", worse}, CreditGrade{"A", better}},
                                     targets, lending(0.0, 0.0), 1000, 1, ScheduleOptions{}),
                    std::invalid_argument);
}

TEST_CASE("repo h_max default keeps the repo haircut below one") {
    CHECK(default_h_max(Side::SecLending) == 1.0);
    CHECK(default_h_max(Side::Repo) == 0.99);
}
