#include "seclend/indemnity.hpp"

#include <cmath>
#include <stdexcept>

namespace seclend {

IndemnitySheet price_indemnity(double transaction_haircut, double triple_a_haircut, double el,
                               double es, double cost_of_capital, double funding_spread) {
    if (!(cost_of_capital >= 0.0) || !(funding_spread >= 0.0))
        throw std::invalid_argument("price_indemnity: s_c and s_f must be >= 0");
    if (!(el >= 0.0) || !(es >= 0.0))
        throw std::invalid_argument("price_indemnity: el and es must be >= 0");
    if (el > es)
        throw std::invalid_argument("price_indemnity: inconsistent metrics input (el > es)");

    IndemnitySheet s;
    s.transaction_haircut = transaction_haircut;
    s.triple_a_haircut = triple_a_haircut;
    s.el = el;
    s.es = es;
    s.cost_of_capital = cost_of_capital;
    s.funding_spread = funding_spread;
    s.gap = std::max(triple_a_haircut - transaction_haircut, 0.0);
    if (s.gap == 0.0) {
        // Transaction haircut already delivers triple-A; nothing to fund.
        return s;
    }
    s.risk_charge = el;
    s.capital_charge = es * cost_of_capital;
    s.redundant_fund = std::max(s.gap - el - es, 0.0);
    s.undercapitalized_gap = el + es > s.gap;
    s.funding_charge = s.redundant_fund * funding_spread;
    s.total = s.risk_charge + s.capital_charge + s.funding_charge;
    return s;
}

IndemnitySheet pricing_sheet(const DejdParams& dejd, const CreditParams& credit,
                             const TransactionSpec& txn, std::size_t n_paths, std::uint64_t seed,
                             const PricingOptions& opts) {
    require_valid(dejd);
    require_valid(credit);
    require_valid(txn);

    SimulationGrid grid{txn.horizon, txn.mpr_days};
    const JointExposures exposures =
        simulate_joint_exposures(dejd, credit, grid, n_paths, seed, opts.workers);

    SolverSettings settings = opts.solver;
    if (std::isnan(settings.h_max))
        settings.h_max = default_h_max(txn.side);
    RatingTarget target;
    if (opts.criterion == RatingCriterion::ExpectedLoss) {
        target = moodys_target("Aaa");
    } else {
        if (std::isnan(opts.pd_threshold))
            throw std::invalid_argument(
                "pricing_sheet: PD criterion requires a configured pd_threshold");
        target = RatingTarget{RatingCriterion::DefaultProbability, opts.pd_threshold, "AAA-PD"};
    }

    HaircutObjective objective(exposures, txn, credit.recovery, opts.criterion);
    const HaircutResult hddot =
        solve_haircut([&](double h) { return objective(h); }, target, settings, "joint");

    HaircutObjective el_objective(exposures, txn, credit.recovery,
                                  RatingCriterion::ExpectedLoss);
    const RiskMetrics at_hc = el_objective.metrics_at(txn.haircut, opts.es_confidence);
    return price_indemnity(txn.haircut, hddot.haircut, at_hc.el, at_hc.es, opts.cost_of_capital,
                           opts.funding_spread);
}

const ScenarioCell& ScenarioGrid::at(std::size_t criterion, std::size_t borrower, std::size_t mpr,
                                     std::size_t haircut) const {
    const std::size_t idx =
        ((criterion * axes.borrowers.size() + borrower) * axes.mpr_days.size() + mpr) *
            axes.haircuts.size() +
        haircut;
    return cells.at(idx);
}

ScenarioGrid scenario_grid(const DejdParams& dejd, const ScenarioAxes& axes,
                           const TransactionSpec& base_txn, std::size_t n_paths,
                           std::uint64_t seed, const PricingOptions& opts) {
    if (axes.haircuts.empty() || axes.borrowers.empty() || axes.criteria.empty() ||
        axes.mpr_days.empty())
        throw std::invalid_argument("scenario_grid: every axis must be nonempty");
    require_valid(dejd);

    ScenarioGrid grid;
    grid.axes = axes;
    grid.cells.resize(axes.criteria.size() * axes.borrowers.size() * axes.mpr_days.size() *
                      axes.haircuts.size());

    for (std::size_t bi = 0; bi < axes.borrowers.size(); ++bi) {
        for (std::size_t mi = 0; mi < axes.mpr_days.size(); ++mi) {
            TransactionSpec txn = base_txn;
            txn.mpr_days = axes.mpr_days[mi];
            require_valid(txn);
            const CreditParams& credit = axes.borrowers[bi].params;
            require_valid(credit);

            SimulationGrid sim_grid{txn.horizon, txn.mpr_days};
            const JointExposures exposures =
                simulate_joint_exposures(dejd, credit, sim_grid, n_paths, seed, opts.workers);
            const HaircutObjective el_objective(exposures, txn, credit.recovery,
                                                RatingCriterion::ExpectedLoss);
            const HaircutObjective pd_objective(exposures, txn, credit.recovery,
                                                RatingCriterion::DefaultProbability);

            SolverSettings settings = opts.solver;
            if (std::isnan(settings.h_max))
                settings.h_max = default_h_max(txn.side);

            for (std::size_t ci = 0; ci < axes.criteria.size(); ++ci) {
                const RatingCriterion criterion = axes.criteria[ci];
                ScenarioCell solved;
                double hddot = 0.0;
                try {
                    RatingTarget target;
                    if (criterion == RatingCriterion::ExpectedLoss) {
                        target = moodys_target("Aaa");
                    } else {
                        if (std::isnan(opts.pd_threshold))
                            throw std::invalid_argument(
                                "PD criterion requires a configured pd_threshold");
                        target = RatingTarget{RatingCriterion::DefaultProbability,
                                              opts.pd_threshold, "AAA-PD"};
                    }
                    const auto& objective = criterion == RatingCriterion::ExpectedLoss
                                                ? el_objective
                                                : pd_objective;
                    hddot = solve_haircut([&](double h) { return objective(h); }, target,
                                          settings, "joint")
                                .haircut;
                    solved.ok = true;
                } catch (const std::exception& e) {
                    solved.ok = false;
                    solved.error = e.what();
                }
                for (std::size_t hi = 0; hi < axes.haircuts.size(); ++hi) {
                    const std::size_t idx =
                        ((ci * axes.borrowers.size() + bi) * axes.mpr_days.size() + mi) *
                            axes.haircuts.size() +
                        hi;
                    ScenarioCell& cell = grid.cells[idx];
                    if (!solved.ok) {
                        cell = solved;
                        continue;
                    }
                    try {
                        const RiskMetrics at_hc =
                            el_objective.metrics_at(axes.haircuts[hi], opts.es_confidence);
                        cell.sheet = price_indemnity(axes.haircuts[hi], hddot, at_hc.el,
                                                     at_hc.es, opts.cost_of_capital,
                                                     opts.funding_spread);
                        cell.ok = true;
                    } catch (const std::exception& e) {
                        cell.ok = false;
                        cell.error = e.what();
                    }
                }
            }
        }
    }
    return grid;
}

} // namespace seclend
