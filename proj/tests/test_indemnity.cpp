#include <doctest.h>

#include <cmath>
#include <json.hpp>

#include "seclend/indemnity.hpp"
#include "seclend/io.hpp"

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
} // namespace

TEST_CASE("published pricing sheet arithmetic") {
    // EL 0.0933 bp, ES 0.8946%, gap 3.1%, cost of capital 15%, funding 1%.
    const IndemnitySheet s = price_indemnity(0.05, 0.081, 9.33e-6, 0.008946, 0.15, 0.01);
    CHECK(s.gap == doctest::Approx(0.031).epsilon(1e-12));
    CHECK(to_bps(s.risk_charge) == doctest::Approx(0.09).epsilon(0.15));
    CHECK(std::abs(to_bps(s.risk_charge) - 0.09) < 0.01);
    CHECK(std::abs(to_bps(s.capital_charge) - 13.42) < 0.01);
    CHECK(std::abs(to_bps(s.funding_charge) - 2.20) < 0.01);
    CHECK(std::abs(to_bps(s.total) - 15.72) < 0.01);
    CHECK(s.redundant_fund == doctest::Approx(0.031 - 9.33e-6 - 0.008946).epsilon(1e-12));
    CHECK(!s.undercapitalized_gap);
}

TEST_CASE("no gap means no charges") {
    const IndemnitySheet s = price_indemnity(0.09, 0.081, 1e-5, 0.01, 0.15, 0.01);
    CHECK(s.gap == 0.0);
    CHECK(s.total == 0.0);
    CHECK(s.risk_charge == 0.0);
    CHECK(s.capital_charge == 0.0);
    CHECK(s.funding_charge == 0.0);
    // Metrics are still recorded for the audit trail.
    CHECK(s.el == 1e-5);
    CHECK(s.es == 0.01);
}

TEST_CASE("zero spreads leave only the pass-through risk charge") {
    const IndemnitySheet s = price_indemnity(0.02, 0.08, 2e-4, 5e-3, 0.0, 0.0);
    CHECK(s.total == doctest::Approx(2e-4));
    CHECK(s.total == s.risk_charge);
}

TEST_CASE("charge additivity holds exactly for every sheet") {
    for (double h : {0.0, 0.02, 0.05, 0.2}) {
        for (double el : {0.0, 1e-6, 5e-4}) {
            for (double es_mult : {1.0, 20.0, 400.0}) {
                const double es = el * es_mult;
                const IndemnitySheet s = price_indemnity(h, 0.081, el, es, 0.15, 0.01);
                CHECK(s.total == s.risk_charge + s.capital_charge + s.funding_charge);
            }
        }
    }
}

TEST_CASE("undercapitalized gap floors funding at zero and flags") {
    const IndemnitySheet s = price_indemnity(0.05, 0.06, 1e-3, 0.02, 0.15, 0.01);
    REQUIRE(s.gap == doctest::Approx(0.01));
    CHECK(s.undercapitalized_gap);
    CHECK(s.redundant_fund == 0.0);
    CHECK(s.funding_charge == 0.0);
    CHECK(s.total == doctest::Approx(1e-3 + 0.02 * 0.15));
}

TEST_CASE("inconsistent metrics are rejected") {
    CHECK_THROWS_AS(price_indemnity(0.05, 0.081, 0.01, 0.001, 0.15, 0.01),
                    std::invalid_argument);
    CHECK_THROWS_AS(price_indemnity(0.05, 0.081, 1e-5, 1e-4, -0.1, 0.01),
                    std::invalid_argument);
}

TEST_CASE("sheet JSON round-trips fractions to 1e-12") {
    const IndemnitySheet s = price_indemnity(0.05, 0.081, 9.33e-6, 0.008946, 0.15, 0.01);
    nlohmann::json j = s;
    const std::string text = j.dump();
    const IndemnitySheet back = nlohmann::json::parse(text).get<IndemnitySheet>();
    CHECK(back.total == doctest::Approx(s.total).epsilon(1e-14));
    CHECK(back.el == doctest::Approx(s.el).epsilon(1e-14));
    CHECK(back.gap == doctest::Approx(s.gap).epsilon(1e-14));
    CHECK(back.redundant_fund == doctest::Approx(s.redundant_fund).epsilon(1e-14));
}

TEST_CASE("pricing sheet: riskless borrower prices to zero") {
    CreditParams credit{0.5, std::log(1e-12), 0.0, std::log(1e-12), 0.0, 0.0};
    const IndemnitySheet s =
        pricing_sheet(kAsset, credit, lending(0.02, 0.0), 20'000, 3, PricingOptions{});
    CHECK(s.triple_a_haircut == 0.0);
    CHECK(s.gap == 0.0);
    CHECK(s.total == 0.0);
}

TEST_CASE("raising the transaction haircut never raises the total charge") {
    CreditParams credit{0.5, std::log(0.05), 1.0, std::log(0.05), 0.3, 0.2};
    PricingOptions opts;
    double prev = std::numeric_limits<double>::infinity();
    for (double h : {0.0, 0.01, 0.02, 0.03, 0.05, 0.08, 0.12}) {
        const IndemnitySheet s =
            pricing_sheet(kAsset, credit, lending(h, 0.01), 60'000, 77, opts);
        CHECK(s.total <= prev + 1e-15);
        prev = s.total;
    }
}

TEST_CASE("scenario grid: a 1x1x1x1 grid equals the single pricing sheet") {
    CreditParams credit{0.5, std::log(0.05), 1.0, std::log(0.05), 0.3, 0.2};
    ScenarioAxes axes;
    axes.haircuts = {0.03};
    axes.borrowers = {CreditGrade{"BBB", credit}};
    axes.criteria = {RatingCriterion::ExpectedLoss};
    axes.mpr_days = {3};
    const TransactionSpec base = lending(0.03, 0.01);
    const ScenarioGrid grid = scenario_grid(kAsset, axes, base, 40'000, 5, PricingOptions{});
    REQUIRE(grid.cells.size() == 1);
    REQUIRE(grid.cells[0].ok);
    const IndemnitySheet direct = pricing_sheet(kAsset, credit, base, 40'000, 5, PricingOptions{});
    CHECK(grid.cells[0].sheet.total == doctest::Approx(direct.total).epsilon(1e-14));
    CHECK(grid.cells[0].sheet.triple_a_haircut == direct.triple_a_haircut);
}

TEST_CASE("scenario grid monotonicities") {
    CreditParams a{0.5, std::log(0.01), 1.0, std::log(0.01), 0.3, 0.2};
    CreditParams bbb{0.5, std::log(0.05), 1.0, std::log(0.05), 0.3, 0.2};
    ScenarioAxes axes;
    axes.haircuts = {0.02, 0.03, 0.05};
    axes.borrowers = {CreditGrade{"A", a}, CreditGrade{"BBB", bbb}};
    axes.criteria = {RatingCriterion::ExpectedLoss};
    axes.mpr_days = {3, 5};
    const ScenarioGrid grid =
        scenario_grid(kAsset, axes, lending(0.02, 0.01), 60'000, 9, PricingOptions{});
    REQUIRE(grid.cells.size() == 12);
    for (const auto& cell : grid.cells)
        REQUIRE(cell.ok);
    for (std::size_t mi = 0; mi < 2; ++mi) {
        for (std::size_t bi = 0; bi < 2; ++bi) {
            // Totals fall as the haircut rises.
            CHECK(grid.at(0, bi, mi, 0).sheet.total >= grid.at(0, bi, mi, 1).sheet.total);
            CHECK(grid.at(0, bi, mi, 1).sheet.total >= grid.at(0, bi, mi, 2).sheet.total);
        }
        for (std::size_t hi = 0; hi < 3; ++hi) {
            // The worse borrower pays more.
            CHECK(grid.at(0, 1, mi, hi).sheet.total >= grid.at(0, 0, mi, hi).sheet.total);
        }
    }
    for (std::size_t bi = 0; bi < 2; ++bi)
        for (std::size_t hi = 0; hi < 3; ++hi)
            // The longer buy-in period costs more.
            CHECK(grid.at(0, bi, 1, hi).sheet.total >= grid.at(0, bi, 0, hi).sheet.total);
}

TEST_CASE("scenario grid records per-cell errors and completes") {
    CreditParams credit{0.5, std::log(0.05), 1.0, std::log(0.05), 0.3, 0.2};
    ScenarioAxes axes;
    axes.haircuts = {0.02};
    axes.borrowers = {CreditGrade{"BBB", credit}};
    axes.criteria = {RatingCriterion::DefaultProbability}; // no threshold configured
    axes.mpr_days = {3};
    const ScenarioGrid grid =
        scenario_grid(kAsset, axes, lending(0.02, 0.01), 5'000, 5, PricingOptions{});
    REQUIRE(grid.cells.size() == 1);
    CHECK(!grid.cells[0].ok);
    CHECK(grid.cells[0].error.find("pd_threshold") != std::string::npos);
}

TEST_CASE("table layouts render") {
    const IndemnitySheet s = price_indemnity(0.05, 0.081, 9.33e-6, 0.008946, 0.15, 0.01);
    std::ostringstream sheet_csv;
    write_sheet_csv(s, sheet_csv);
    CHECK(sheet_csv.str().find("item,value\nmargin,1.05\n") == 0);
    CHECK(sheet_csv.str().find("total,") != std::string::npos);
    const std::string human = sheet_summary(s);
    CHECK(human.find("15.72 bp") != std::string::npos);
    CHECK(human.find("13.42 bp") != std::string::npos);
}
