#pragma once

#include <string>
#include <vector>

#include "seclend/haircut.hpp"
#include "seclend/types.hpp"

namespace seclend {

/// The charge decomposition S = EL + ES s_c + (gap - EL - ES)^+ s_f with
/// gap = (hddot_c - h_c)^+; a zero gap zeroes every charge. A gap too small
/// to hold EL + ES floors the funding term at zero and flags the sheet.
IndemnitySheet price_indemnity(double transaction_haircut, double triple_a_haircut, double el,
                               double es, double cost_of_capital, double funding_spread);

struct PricingOptions {
    RatingCriterion criterion = RatingCriterion::ExpectedLoss;
    double pd_threshold = std::numeric_limits<double>::quiet_NaN(); // PD criterion only
    double cost_of_capital = 0.15;
    double funding_spread = 0.01;
    double es_confidence = 0.99;
    SolverSettings solver;
    int workers = 1;
};

/// End-to-end pricing: solves the borrower's triple-A haircut, measures EL
/// and ES at the transaction haircut on the same frozen path set, then
/// decomposes the charges.
IndemnitySheet pricing_sheet(const DejdParams& dejd, const CreditParams& credit,
                             const TransactionSpec& txn, std::size_t n_paths, std::uint64_t seed,
                             const PricingOptions& opts = {});

struct ScenarioAxes {
    std::vector<double> haircuts;
    std::vector<CreditGrade> borrowers;
    std::vector<RatingCriterion> criteria;
    std::vector<int> mpr_days;
};

struct ScenarioCell {
    IndemnitySheet sheet;
    bool ok = false;
    std::string error; // set when the cell's solve failed; the grid completes
};

struct ScenarioGrid {
    ScenarioAxes axes;
    /// Indexed [criterion][borrower][mpr][haircut], flattened in that order.
    std::vector<ScenarioCell> cells;

    const ScenarioCell& at(std::size_t criterion, std::size_t borrower, std::size_t mpr,
                           std::size_t haircut) const;
};

/// Cross product of pricing sheets. One simulation per (borrower, MPR) pair
/// serves every criterion and haircut level in that slice.
ScenarioGrid scenario_grid(const DejdParams& dejd, const ScenarioAxes& axes,
                           const TransactionSpec& base_txn, std::size_t n_paths,
                           std::uint64_t seed, const PricingOptions& opts = {});

} // namespace seclend
