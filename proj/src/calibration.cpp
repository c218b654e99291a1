#include "seclend/calibration.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "seclend/optim.hpp"

namespace seclend {

namespace {

bool valid_iso_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-')
        return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            return false;
    const int month = (s[5] - '0') * 10 + (s[6] - '0');
    const int day = (s[8] - '0') * 10 + (s[9] - '0');
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

std::string strip(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

ReturnSeries return_series_from_closes(const std::vector<std::string>& dates,
                                       const std::vector<double>& closes, std::string source) {
    if (dates.size() != closes.size())
        throw std::invalid_argument("return_series_from_closes: size mismatch");
    if (dates.size() < 2)
        throw std::invalid_argument("return_series_from_closes: need at least two closes");
    ReturnSeries out;
    out.source = std::move(source);
    out.dates.reserve(dates.size() - 1);
    out.log_returns.reserve(dates.size() - 1);
    for (std::size_t i = 1; i < closes.size(); ++i) {
        out.dates.push_back(dates[i]);
        out.log_returns.push_back(std::log(closes[i] / closes[i - 1]));
    }
    return out;
}

ReturnSeries load_return_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw CsvError(0, "cannot open '" + path + "'");
    std::string line;
    int line_no = 0;
    std::vector<std::string> dates;
    std::vector<double> closes;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string row = strip(line);
        if (row.empty())
            continue;
        if (line_no == 1) {
            if (row != "date,close")
                throw CsvError(1, "expected header 'date,close', got '" + row + "'");
            continue;
        }
        const auto comma = row.find(',');
        if (comma == std::string::npos)
            throw CsvError(line_no, "expected 'date,close' row, got '" + row + "'");
        const std::string date = strip(row.substr(0, comma));
        const std::string close_str = strip(row.substr(comma + 1));
        if (!valid_iso_date(date))
            throw CsvError(line_no, "invalid ISO-8601 date '" + date + "'");
        if (!dates.empty() && !(dates.back() < date))
            throw CsvError(line_no, "dates must be strictly increasing; '" + date +
                                        "' does not follow '" + dates.back() + "'");
        double close = 0.0;
        const auto [ptr, ec] =
            std::from_chars(close_str.data(), close_str.data() + close_str.size(), close);
        if (ec != std::errc{} || ptr != close_str.data() + close_str.size())
            throw CsvError(line_no, "invalid close '" + close_str + "'");
        if (!(close > 0.0))
            throw CsvError(line_no, "close must be > 0, got " + close_str);
        dates.push_back(date);
        closes.push_back(close);
    }
    if (dates.size() < 2)
        throw CsvError(line_no, "need at least two price rows");
    return return_series_from_closes(dates, closes, path);
}

double log_likelihood(const ReturnSeries& series, const DejdParams& params,
                      LikelihoodDiagnostics* diag, double floor_density) {
    require_valid(params);
    const MprReturnDensity density(params, 1.0 / kBusinessDaysPerYear);
    double ll = 0.0;
    int floored = 0;
    for (double r : series.log_returns) {
        double f = density.pdf(r);
        if (!(f >= floor_density)) {
            f = floor_density;
            ++floored;
        }
        ll += std::log(f);
    }
    if (diag)
        diag->floored_observations = floored;
    return ll;
}

namespace {

// Logistic box transform between the six bounded parameters and R^6.
constexpr int kNumParams = 6;

std::array<std::pair<double, double>, kNumParams> bound_pairs(const ParamBounds& b) {
    return {{{b.mu_lo, b.mu_hi},
             {b.sigma_lo, b.sigma_hi},
             {b.lambda_lo, b.lambda_hi},
             {b.pu_lo, b.pu_hi},
             {b.eta_lo, b.eta_hi},
             {b.theta_lo, b.theta_hi}}};
}

DejdParams unpack(const Eigen::VectorXd& t, const ParamBounds& bounds) {
    const auto bp = bound_pairs(bounds);
    std::array<double, kNumParams> v{};
    for (int i = 0; i < kNumParams; ++i) {
        const double s = 1.0 / (1.0 + std::exp(-t[i]));
        v[i] = bp[i].first + (bp[i].second - bp[i].first) * s;
    }
    return DejdParams{v[0], v[1], v[2], v[3], v[4], v[5]};
}

Eigen::VectorXd pack(const DejdParams& p, const ParamBounds& bounds) {
    const auto bp = bound_pairs(bounds);
    const std::array<double, kNumParams> v = {p.mu, p.sigma_a, p.lambda_a, p.p_u, p.eta, p.theta};
    Eigen::VectorXd t(kNumParams);
    for (int i = 0; i < kNumParams; ++i) {
        const double lo = bp[i].first, hi = bp[i].second;
        const double margin = 1e-6 * (hi - lo);
        const double x = std::clamp(v[i], lo + margin, hi - margin);
        t[i] = std::log((x - lo) / (hi - x));
    }
    return t;
}

std::array<double, kNumParams> param_array(const DejdParams& p) {
    return {p.mu, p.sigma_a, p.lambda_a, p.p_u, p.eta, p.theta};
}

} // namespace

FitReport fit_dejd(const ReturnSeries& series, const DejdParams& init, const ParamBounds& bounds) {
    const std::size_t n = series.log_returns.size();
    if (n < 500)
        throw std::invalid_argument("fit_dejd: need at least 500 observations, got " +
                                    std::to_string(n));

    const double dn = static_cast<double>(n);
    auto negative_mean_ll = [&](const Eigen::VectorXd& t) {
        const DejdParams p = unpack(t, bounds);
        const double ll = log_likelihood(series, p);
        return std::isfinite(ll) ? -ll / dn : 1e10;
    };

    // Moment-informed baseline plus a deterministic grid of jump starts.
    double mean_r = 0.0;
    for (double r : series.log_returns)
        mean_r += r;
    mean_r /= dn;
    double var_r = 0.0;
    for (double r : series.log_returns)
        var_r += (r - mean_r) * (r - mean_r);
    var_r /= dn;
    const double mu0 = mean_r * kBusinessDaysPerYear;
    const double sd0 = std::sqrt(std::max(var_r * kBusinessDaysPerYear, 1e-8));

    std::vector<DejdParams> starts;
    starts.push_back(init);
    starts.push_back(DejdParams{mu0, 0.8 * sd0, 5.0, 0.5, 50.0, 50.0});
    starts.push_back(DejdParams{mu0, 0.6 * sd0, 60.0, 0.5, 100.0, 100.0});
    starts.push_back(DejdParams{mu0, 0.9 * sd0, 10.0, 0.3, 30.0, 60.0});
    starts.push_back(DejdParams{mu0, 0.7 * sd0, 25.0, 0.6, 80.0, 40.0});

    BfgsOptions opts;
    opts.grad_tolerance = 1e-6;
    std::vector<BfgsResult> runs;
    runs.reserve(starts.size());
    for (const auto& s : starts)
        runs.push_back(minimize_bfgs(negative_mean_ll, pack(s, bounds), opts));

    int best = -1;
    for (int i = 0; i < static_cast<int>(runs.size()); ++i) {
        if (!runs[i].converged)
            continue;
        if (best < 0 || runs[i].f < runs[best].f)
            best = i;
    }
    if (best < 0) {
        std::ostringstream os;
        os << "fit_dejd: no start converged;";
        for (std::size_t i = 0; i < runs.size(); ++i)
            os << " start " << i << ": f=" << runs[i].f << " iters=" << runs[i].iterations
               << " |grad|=" << runs[i].gradient.lpNorm<Eigen::Infinity>() << ";";
        throw FitError(os.str());
    }

    FitReport report;
    report.params = unpack(runs[best].x, bounds);
    LikelihoodDiagnostics diag;
    report.log_likelihood = log_likelihood(series, report.params, &diag);
    report.iterations = runs[best].iterations;
    report.converged = true;
    report.starts_tried = static_cast<int>(starts.size());
    report.floored_observations = diag.floored_observations;
    report.short_history_warning = n < 1250;

    // Standard errors from the observed information in original coordinates.
    const auto bp = bound_pairs(bounds);
    const auto at = param_array(report.params);
    auto negative_ll_original = [&](const Eigen::VectorXd& v) {
        DejdParams p{v[0], v[1], v[2], v[3], v[4], v[5]};
        for (int i = 0; i < kNumParams; ++i)
            if (!(v[i] > bp[i].first && v[i] < bp[i].second))
                return 1e12;
        const double ll = log_likelihood(series, p);
        return std::isfinite(ll) ? -ll : 1e12;
    };
    Eigen::VectorXd v0(kNumParams);
    for (int i = 0; i < kNumParams; ++i)
        v0[i] = at[i];
    const Eigen::MatrixXd info = numerical_hessian(negative_ll_original, v0, 1e-4);
    report.std_errors.fill(std::numeric_limits<double>::quiet_NaN());
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        const Eigen::MatrixXd cov =
            ldlt.solve(Eigen::MatrixXd::Identity(kNumParams, kNumParams));
        for (int i = 0; i < kNumParams; ++i)
            if (cov(i, i) > 0.0)
                report.std_errors[i] = std::sqrt(cov(i, i));
    }
    return report;
}

CreditParams cds_to_credit(double spread_bp, double recovery, const CdsOverrides& overrides) {
    if (!(spread_bp > 0.0))
        throw std::invalid_argument("cds_to_credit: spread must be > 0");
    if (!(recovery >= 0.0 && recovery < 1.0))
        throw std::invalid_argument("cds_to_credit: recovery must lie in [0, 1)");
    const double mean_intensity = spread_bp * 1e-4 / (1.0 - recovery);
    CreditParams credit;
    credit.k = overrides.k;
    credit.sigma = overrides.sigma;
    credit.rho = overrides.rho;
    credit.recovery = recovery;
    credit.ybar = std::log(mean_intensity);
    credit.y0 = overrides.y0.value_or(credit.ybar);
    return require_valid(credit);
}

} // namespace seclend
