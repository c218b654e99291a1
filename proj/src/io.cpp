#include "seclend/io.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "seclend/format.hpp"

namespace seclend {

void to_json(nlohmann::json& j, const DejdParams& p) {
    j = nlohmann::json{{"mu", p.mu},   {"sigma_a", p.sigma_a}, {"lambda_a", p.lambda_a},
                       {"p_u", p.p_u}, {"eta", p.eta},         {"theta", p.theta}};
}

void from_json(const nlohmann::json& j, DejdParams& p) {
    j.at("mu").get_to(p.mu);
    j.at("sigma_a").get_to(p.sigma_a);
    j.at("lambda_a").get_to(p.lambda_a);
    j.at("p_u").get_to(p.p_u);
    j.at("eta").get_to(p.eta);
    j.at("theta").get_to(p.theta);
}

void to_json(nlohmann::json& j, const CreditParams& p) {
    j = nlohmann::json{{"k", p.k},   {"ybar", p.ybar},         {"sigma", p.sigma},
                       {"y0", p.y0}, {"recovery", p.recovery}, {"rho", p.rho}};
}

void from_json(const nlohmann::json& j, CreditParams& p) {
    j.at("k").get_to(p.k);
    j.at("ybar").get_to(p.ybar);
    j.at("sigma").get_to(p.sigma);
    p.y0 = j.value("y0", j.at("ybar").get<double>());
    j.at("recovery").get_to(p.recovery);
    p.rho = j.value("rho", 0.0);
}

void to_json(nlohmann::json& j, const TransactionSpec& t) {
    j = nlohmann::json{{"haircut", t.haircut},
                       {"liquidity_spread", t.liquidity_spread},
                       {"mpr_days", t.mpr_days},
                       {"side", to_string(t.side)},
                       {"notional", t.notional},
                       {"horizon", t.horizon}};
}

void from_json(const nlohmann::json& j, TransactionSpec& t) {
    j.at("haircut").get_to(t.haircut);
    t.liquidity_spread = j.value("liquidity_spread", 0.0);
    t.mpr_days = j.value("mpr_days", 3);
    t.side = side_from_string(j.value("side", std::string("sec_lending")));
    t.notional = j.value("notional", 1.0);
    t.horizon = j.value("horizon", 1.0);
}

void to_json(nlohmann::json& j, const RatingTarget& t) {
    j = nlohmann::json{{"criterion", to_string(t.criterion)},
                       {"threshold", t.threshold},
                       {"label", t.label}};
}

void from_json(const nlohmann::json& j, RatingTarget& t) {
    if (j.contains("moodys_label")) {
        t = moodys_target(j.at("moodys_label").get<std::string>());
        return;
    }
    t.criterion = criterion_from_string(j.value("criterion", std::string("expected_loss")));
    j.at("threshold").get_to(t.threshold);
    t.label = j.value("label", std::string());
}

void to_json(nlohmann::json& j, const RiskMetrics& m) {
    j = nlohmann::json{{"el", m.el},
                       {"el_stderr", m.el_stderr},
                       {"pd", m.pd},
                       {"pd_stderr", m.pd_stderr},
                       {"es", m.es},
                       {"es_stderr", m.es_stderr},
                       {"es_confidence", m.es_confidence},
                       {"path_count", m.path_count},
                       {"es_tail_thin", m.es_tail_thin}};
}

void to_json(nlohmann::json& j, const IndemnitySheet& s) {
    j = nlohmann::json{{"transaction_haircut", s.transaction_haircut},
                       {"triple_a_haircut", s.triple_a_haircut},
                       {"gap", s.gap},
                       {"el", s.el},
                       {"es", s.es},
                       {"redundant_fund", s.redundant_fund},
                       {"cost_of_capital", s.cost_of_capital},
                       {"funding_spread", s.funding_spread},
                       {"risk_charge", s.risk_charge},
                       {"capital_charge", s.capital_charge},
                       {"funding_charge", s.funding_charge},
                       {"total", s.total},
                       {"undercapitalized_gap", s.undercapitalized_gap}};
}

void from_json(const nlohmann::json& j, IndemnitySheet& s) {
    j.at("transaction_haircut").get_to(s.transaction_haircut);
    j.at("triple_a_haircut").get_to(s.triple_a_haircut);
    j.at("gap").get_to(s.gap);
    j.at("el").get_to(s.el);
    j.at("es").get_to(s.es);
    j.at("redundant_fund").get_to(s.redundant_fund);
    j.at("cost_of_capital").get_to(s.cost_of_capital);
    j.at("funding_spread").get_to(s.funding_spread);
    j.at("risk_charge").get_to(s.risk_charge);
    j.at("capital_charge").get_to(s.capital_charge);
    j.at("funding_charge").get_to(s.funding_charge);
    j.at("total").get_to(s.total);
    s.undercapitalized_gap = j.value("undercapitalized_gap", false);
}

void to_json(nlohmann::json& j, const SeedDescriptor& s) {
    j = nlohmann::json{{"base_seed", s.base_seed},
                       {"block_size", s.block_size},
                       {"block_count", s.block_count}};
}

void to_json(nlohmann::json& j, const HaircutResult& r) {
    j = nlohmann::json{{"haircut", r.haircut},
                       {"achieved_metric", r.achieved_metric},
                       {"target", r.target},
                       {"bracket_lo", r.bracket_lo},
                       {"bracket_hi", r.bracket_hi},
                       {"mode", r.mode},
                       {"evaluations", r.evaluations}};
}

void to_json(nlohmann::json& j, const FitReport& r) {
    j = nlohmann::json{{"params", r.params},
                       {"log_likelihood", r.log_likelihood},
                       {"iterations", r.iterations},
                       {"converged", r.converged},
                       {"std_errors", r.std_errors},
                       {"starts_tried", r.starts_tried},
                       {"floored_observations", r.floored_observations},
                       {"short_history_warning", r.short_history_warning}};
}

void write_schedule_csv(const HaircutSchedule& schedule, std::ostream& os) {
    os << "cpty\\target";
    for (const auto& t : schedule.targets)
        os << ',' << (t.label.empty() ? format_double(t.threshold) : t.label);
    os << '\n';
    for (std::size_t gi = 0; gi < schedule.grades.size(); ++gi) {
        os << schedule.grades[gi].label;
        for (const auto& cell : schedule.cells[gi])
            os << ',' << format_double(cell.haircut);
        os << '\n';
    }
}

void write_sheet_csv(const IndemnitySheet& s, std::ostream& os) {
    os << "item,value\n";
    os << "margin," << format_double(1.0 + s.transaction_haircut) << '\n';
    os << "triple_a_haircut," << format_double(s.triple_a_haircut) << '\n';
    os << "haircut_gap," << format_double(s.gap) << '\n';
    os << "el," << format_double(s.el) << '\n';
    os << "es," << format_double(s.es) << '\n';
    os << "redundant_fund," << format_double(s.redundant_fund) << '\n';
    os << "cost_of_capital," << format_double(s.cost_of_capital) << '\n';
    os << "funding_spread," << format_double(s.funding_spread) << '\n';
    os << "risk_charge," << format_double(s.risk_charge) << '\n';
    os << "capital_charge," << format_double(s.capital_charge) << '\n';
    os << "funding_charge," << format_double(s.funding_charge) << '\n';
    os << "total," << format_double(s.total) << '\n';
    os << "undercapitalized_gap," << (s.undercapitalized_gap ? 1 : 0) << '\n';
}

void write_scenario_csv(const ScenarioGrid& grid, std::ostream& os) {
    os << "criterion,borrower";
    for (int mpr : grid.axes.mpr_days)
        for (double h : grid.axes.haircuts)
            os << ",mpr" << mpr << "d_h" << format_double(h);
    os << '\n';
    for (std::size_t ci = 0; ci < grid.axes.criteria.size(); ++ci) {
        for (std::size_t bi = 0; bi < grid.axes.borrowers.size(); ++bi) {
            os << to_string(grid.axes.criteria[ci]) << ',' << grid.axes.borrowers[bi].label;
            for (std::size_t mi = 0; mi < grid.axes.mpr_days.size(); ++mi) {
                for (std::size_t hi = 0; hi < grid.axes.haircuts.size(); ++hi) {
                    const ScenarioCell& cell = grid.at(ci, bi, mi, hi);
                    os << ',';
                    if (cell.ok)
                        os << format_double(cell.sheet.total);
                    else
                        os << "\"error: " << cell.error << '"';
                }
            }
            os << '\n';
        }
    }
}

namespace {

std::string fixed(double v, int digits) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

} // namespace

std::string sheet_summary(const IndemnitySheet& s) {
    std::ostringstream os;
    os << "margin              " << fixed(100.0 * (1.0 + s.transaction_haircut), 2) << "%\n";
    os << "triple-A haircut    " << fixed(100.0 * s.triple_a_haircut, 2) << "%\n";
    os << "haircut gap         " << fixed(100.0 * s.gap, 2) << "%\n";
    os << "EL                  " << fixed(to_bps(s.el), 4) << " bp\n";
    os << "ES                  " << fixed(100.0 * s.es, 4) << "%\n";
    os << "redundant fund      " << fixed(100.0 * s.redundant_fund, 4) << "%\n";
    os << "cost of capital     " << fixed(100.0 * s.cost_of_capital, 2) << "%\n";
    os << "funding spread      " << fixed(100.0 * s.funding_spread, 2) << "%\n";
    os << "risk charge         " << fixed(to_bps(s.risk_charge), 2) << " bp\n";
    os << "capital charge      " << fixed(to_bps(s.capital_charge), 2) << " bp\n";
    os << "funding charge      " << fixed(to_bps(s.funding_charge), 2) << " bp\n";
    os << "total               " << fixed(to_bps(s.total), 2) << " bp\n";
    if (s.undercapitalized_gap)
        os << "note: gap smaller than EL + ES; funding charge floored at zero\n";
    return os.str();
}

std::string scenario_summary(const ScenarioGrid& grid) {
    std::ostringstream os;
    os << "total charge (bp)\n";
    os << std::left << std::setw(22) << "criterion" << std::setw(10) << "borrower";
    for (int mpr : grid.axes.mpr_days)
        for (double h : grid.axes.haircuts) {
            std::string head = std::to_string(mpr) + "d/" + fixed(100.0 * h, 0) + "%";
            os << std::right << std::setw(10) << head;
        }
    os << '\n';
    for (std::size_t ci = 0; ci < grid.axes.criteria.size(); ++ci) {
        for (std::size_t bi = 0; bi < grid.axes.borrowers.size(); ++bi) {
            os << std::left << std::setw(22) << to_string(grid.axes.criteria[ci]) << std::setw(10)
               << grid.axes.borrowers[bi].label;
            for (std::size_t mi = 0; mi < grid.axes.mpr_days.size(); ++mi)
                for (std::size_t hi = 0; hi < grid.axes.haircuts.size(); ++hi) {
                    const ScenarioCell& cell = grid.at(ci, bi, mi, hi);
                    os << std::right << std::setw(10)
                       << (cell.ok ? fixed(to_bps(cell.sheet.total), 2) : std::string("err"));
                }
            os << '\n';
        }
    }
    return os.str();
}

} // namespace seclend
