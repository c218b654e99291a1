#include "seclend/types.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace seclend {

std::string to_string(Side side) {
    return side == Side::SecLending ? "sec_lending" : "repo";
}

Side side_from_string(const std::string& s) {
    if (s == "sec_lending")
        return Side::SecLending;
    if (s == "repo")
        return Side::Repo;
    throw std::invalid_argument("unknown side '" + s + "' (expected sec_lending or repo)");
}

std::string to_string(RatingCriterion c) {
    return c == RatingCriterion::ExpectedLoss ? "expected_loss" : "default_probability";
}

RatingCriterion criterion_from_string(const std::string& s) {
    if (s == "expected_loss")
        return RatingCriterion::ExpectedLoss;
    if (s == "default_probability")
        return RatingCriterion::DefaultProbability;
    throw std::invalid_argument("unknown criterion '" + s +
                                "' (expected expected_loss or default_probability)");
}

const std::map<std::string, double>& moodys_el_targets() {
    static const std::map<std::string, double> table = {
        {"Aaa", 3.00e-7},
        {"Aa1", 3.10e-6},
        {"Aa2", 7.50e-6},
        {"Aa3", 1.66e-5},
    };
    return table;
}

const std::map<std::string, double>& pd_targets() {
    static const std::map<std::string, double> table;
    return table;
}

RatingTarget moodys_target(const std::string& label) {
    auto it = moodys_el_targets().find(label);
    if (it == moodys_el_targets().end())
        throw std::invalid_argument("no built-in Moody's EL target for label '" + label + "'");
    return RatingTarget{RatingCriterion::ExpectedLoss, it->second, label};
}

std::string ValidationReport::joined() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (i > 0)
            os << "; ";
        os << errors[i];
    }
    return os.str();
}

ValidationReport validate(const DejdParams& p) {
    ValidationReport r;
    if (!(p.sigma_a >= 0.0))
        r.errors.push_back("sigma_a must be >= 0");
    if (!(p.lambda_a >= 0.0))
        r.errors.push_back("lambda_a must be >= 0");
    if (!(p.p_u >= 0.0 && p.p_u <= 1.0))
        r.errors.push_back("p_u must lie in [0, 1]");
    if (!(p.eta > 1.0))
        r.errors.push_back("eta must exceed 1");
    if (!(p.theta > 0.0))
        r.errors.push_back("theta must be > 0");
    if (!std::isfinite(p.mu))
        r.errors.push_back("mu must be finite");
    return r;
}

ValidationReport validate(const CreditParams& p) {
    ValidationReport r;
    if (!(p.k >= 0.0))
        r.errors.push_back("k must be >= 0");
    if (!(p.sigma >= 0.0))
        r.errors.push_back("sigma must be >= 0");
    if (!(p.recovery >= 0.0 && p.recovery < 1.0))
        r.errors.push_back("recovery must lie in [0, 1)");
    if (!(p.rho >= -1.0 && p.rho <= 1.0))
        r.errors.push_back("rho must lie in [-1, 1]");
    if (!std::isfinite(p.ybar) || !std::isfinite(p.y0))
        r.errors.push_back("ybar and y0 must be finite");
    return r;
}

ValidationReport validate(const TransactionSpec& t) {
    ValidationReport r;
    if (!(t.haircut >= 0.0))
        r.errors.push_back("haircut must be >= 0");
    if (t.side == Side::Repo && !(t.haircut < 1.0))
        r.errors.push_back("haircut must be < 1 for repo");
    if (!(t.liquidity_spread >= 0.0 && t.liquidity_spread < 1.0))
        r.errors.push_back("liquidity_spread must lie in [0, 1)");
    if (t.mpr_days < 1)
        r.errors.push_back("mpr_days must be >= 1");
    if (!(t.notional > 0.0))
        r.errors.push_back("notional must be > 0");
    if (!(t.horizon > 0.0))
        r.errors.push_back("horizon must be > 0");
    return r;
}

ValidationReport validate(const RatingTarget& t) {
    ValidationReport r;
    if (!(t.threshold > 0.0))
        r.errors.push_back("threshold must be > 0");
    return r;
}

} // namespace seclend
