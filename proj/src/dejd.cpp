#include "seclend/dejd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "seclend/math.hpp"

namespace seclend {

double jump_density(double y, const DejdParams& p) {
    if (y >= 0.0)
        return p.p_u * p.eta * std::exp(-p.eta * y);
    return p.q_d() * p.theta * std::exp(p.theta * y);
}

double dejd_mean_increment(const DejdParams& p, double dt) {
    return p.mu * dt + p.lambda_a * dt * (p.p_u / p.eta - p.q_d() / p.theta);
}

double dejd_variance_increment(const DejdParams& p, double dt) {
    const double jump_m2 = 2.0 * p.p_u / (p.eta * p.eta) + 2.0 * p.q_d() / (p.theta * p.theta);
    return p.sigma_a * p.sigma_a * dt + p.lambda_a * dt * jump_m2;
}

double dejd_third_central_moment(const DejdParams& p, double dt) {
    const double e3 = p.eta * p.eta * p.eta;
    const double t3 = p.theta * p.theta * p.theta;
    return p.lambda_a * dt * 6.0 * (p.p_u / e3 - p.q_d() / t3);
}

double dejd_log_mgf(const DejdParams& p, double dt, double r) {
    if (p.lambda_a > 0.0 && !(r < p.eta && r > -p.theta))
        throw std::domain_error("dejd_log_mgf: r outside (-theta, eta)");
    const double jump = p.lambda_a > 0.0
                            ? p.lambda_a * (p.p_u * p.eta / (p.eta - r) +
                                            p.q_d() * p.theta / (p.theta + r) - 1.0)
                            : 0.0;
    return dt * (p.mu * r + 0.5 * p.sigma_a * p.sigma_a * r * r + jump);
}

double dejd_tail_bound(const DejdParams& p, double dt, double x, bool upper) {
    // min over admissible r of exp(psi(r) dt -+ r x); log objective is convex.
    auto log_bound = [&](double r) {
        const double rr = upper ? r : -r;
        return dejd_log_mgf(p, dt, rr) - rr * x;
    };
    double lo = 1e-9;
    double hi;
    if (p.lambda_a > 0.0) {
        hi = (upper ? p.eta : p.theta) * (1.0 - 1e-9);
    } else {
        // No MGF pole without jumps; expand until the minimum is interior.
        hi = 1.0;
        while (hi < 1e12 && log_bound(hi) < log_bound(0.999 * hi))
            hi *= 2.0;
    }
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (log_bound(m1) < log_bound(m2))
            hi = m2;
        else
            lo = m1;
    }
    return std::min(1.0, std::exp(log_bound(0.5 * (lo + hi))));
}

double sample_jump_sum(const DejdParams& p, double dt, std::mt19937_64& rng) {
    if (p.lambda_a <= 0.0)
        return 0.0;
    std::poisson_distribution<int> pois(p.lambda_a * dt);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::exponential_distribution<double> unit_exp(1.0);
    const int n = pois(rng);
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
        if (u01(rng) < p.p_u)
            sum += unit_exp(rng) / p.eta;
        else
            sum -= unit_exp(rng) / p.theta;
    }
    return sum;
}

double sample_dejd_increment(const DejdParams& p, double dt, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double z = normal(rng);
    return dejd_increment(p, dt, z, sample_jump_sum(p, dt, rng));
}

namespace {

/// Densities at x of Gaussian(a, s^2) + Erlang(i, beta) for i = 1..imax.
/// Written via truncated-Gaussian-moment recursions with the exponential
/// prefactor folded into scaled erfc terms so nothing overflows.
void gauss_erlang_pdfs(double x, double a, double s, double beta, int imax, double* out) {
    const double delta = (x - a) / s;
    const double c = x - a - beta * s * s;
    const double alpha = c / s;
    const double e_phi = norm_pdf(delta); // = exp(pre) * phi(alpha)
    double e_cdf;                         // = exp(pre) * Phi(alpha)
    if (alpha <= 0.0) {
        e_cdf = 0.5 * erfcx(-alpha / std::numbers::sqrt2) * std::exp(-0.5 * delta * delta);
    } else {
        // alpha > 0 implies pre = beta^2 s^2/2 - beta (x-a) < 0: safe directly.
        e_cdf = norm_cdf(alpha) * std::exp(0.5 * beta * beta * s * s - beta * (x - a));
    }
    // M_k = P_k * Phi(alpha) + Q_k * s * phi(alpha); h_i uses M_{i-1}.
    double p_prev = 1.0, q_prev = 0.0; // k = 0
    double p_cur = c, q_cur = 1.0;     // k = 1
    double fac = beta;                 // beta^i / (i-1)!
    out[0] = std::max(0.0, fac * (p_prev * e_cdf + q_prev * s * e_phi));
    for (int i = 2; i <= imax; ++i) {
        fac *= beta / (i - 1);
        out[i - 1] = std::max(0.0, fac * (p_cur * e_cdf + q_cur * s * e_phi));
        const double p_next = c * p_cur + (i - 1) * s * s * p_prev;
        const double q_next = c * q_cur + (i - 1) * s * s * q_prev;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
    }
}

double binom_pmf(int n, int m, double p) {
    if (p <= 0.0)
        return m == 0 ? 1.0 : 0.0;
    if (p >= 1.0)
        return m == n ? 1.0 : 0.0;
    const double lg = std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0);
    return std::exp(lg + m * std::log(p) + (n - m) * std::log1p(-p));
}

} // namespace

MprReturnDensity::MprReturnDensity(const DejdParams& p, double window_years, double tail_tol)
    : params_(require_valid(p)), window_(window_years) {
    if (!(window_years > 0.0))
        throw std::invalid_argument("MprReturnDensity: window must be > 0");
    if (!(p.sigma_a > 0.0))
        throw std::invalid_argument(
            "MprReturnDensity: sigma_a must be > 0 (the mixture has no density otherwise)");
    mean_gauss_ = p.mu * window_years;
    sd_gauss_ = p.sigma_a * std::sqrt(window_years);

    const double pois_mean = p.lambda_a * window_years;
    // Smallest truncation with Poisson tail mass below tail_tol.
    std::vector<double> pois;
    pois.push_back(std::exp(-pois_mean));
    double cum = pois.back();
    while (1.0 - cum > tail_tol && static_cast<int>(pois.size()) < 400) {
        pois.push_back(pois.back() * pois_mean / static_cast<double>(pois.size()));
        cum += pois.back();
    }
    n_max_ = static_cast<int>(pois.size()) - 1;
    truncation_mass_ = std::max(0.0, 1.0 - cum);
    w0_ = pois[0];

    const double m1 = p.lambda_a > 0.0
                          ? p.p_u * p.eta / (p.eta - 1.0) + p.q_d() * p.theta / (p.theta + 1.0)
                          : 1.0;
    double exp_cum = 0.0, term = std::exp(-pois_mean);
    for (int n = 0; n <= n_max_; ++n) {
        exp_cum += term;
        term *= pois_mean * m1 / (n + 1.0);
    }
    truncated_exp_mass_ = std::max(0.0, std::exp(mean_gauss_ + 0.5 * sd_gauss_ * sd_gauss_) *
                                            (std::exp(pois_mean * (m1 - 1.0)) - exp_cum));

    // Collect the jump-count mixture onto Erlang bases: conditional on m up
    // and l down jumps, the jump sum is Gamma(m, eta) - Gamma(l, theta), whose
    // density splits into one-sided Erlang terms with binomial-ratio weights.
    w_up_ = Eigen::ArrayXd::Zero(std::max(n_max_, 0));
    w_down_ = Eigen::ArrayXd::Zero(std::max(n_max_, 0));
    const double ru = p.eta / (p.eta + p.theta);
    const double rd = p.theta / (p.eta + p.theta);
    for (int n = 1; n <= n_max_; ++n) {
        for (int m = 0; m <= n; ++m) {
            const int l = n - m;
            const double pm = pois[n] * binom_pmf(n, m, p.p_u);
            if (pm <= 0.0)
                continue;
            if (l == 0) {
                w_up_[m - 1] += pm;
                continue;
            }
            if (m == 0) {
                w_down_[l - 1] += pm;
                continue;
            }
            // A_i = C(m + l - 1 - i, l - 1) ru^{m-i} rd^l, built downward from i = m.
            double coef = std::pow(rd, l);
            for (int i = m; i >= 1; --i) {
                w_up_[i - 1] += pm * coef;
                coef *= ru * static_cast<double>(m + l - i) / static_cast<double>(m - i + 1);
            }
            coef = std::pow(ru, m);
            for (int j = l; j >= 1; --j) {
                w_down_[j - 1] += pm * coef;
                coef *= rd * static_cast<double>(m + l - j) / static_cast<double>(l - j + 1);
            }
        }
    }
}

double MprReturnDensity::pdf(double x) const {
    double f = w0_ * norm_pdf(x, mean_gauss_, sd_gauss_);
    if (n_max_ > 0) {
        thread_local std::vector<double> h;
        h.resize(n_max_);
        gauss_erlang_pdfs(x, mean_gauss_, sd_gauss_, params_.eta, n_max_, h.data());
        for (int i = 0; i < n_max_; ++i)
            f += w_up_[i] * h[i];
        gauss_erlang_pdfs(-x, -mean_gauss_, sd_gauss_, params_.theta, n_max_, h.data());
        for (int j = 0; j < n_max_; ++j)
            f += w_down_[j] * h[j];
    }
    return f;
}

double MprReturnDensity::integrate(const std::function<double(double)>& f, double a, double b,
                                   double tol) const {
    if (!(b > a))
        return 0.0;
    // Chunk the interval around the density's own scale so a narrow peak in a
    // wide span cannot slip between the first adaptive probes.
    const double center = dejd_mean_increment(params_, window_);
    const double scale = std::max(std::sqrt(dejd_variance_increment(params_, window_)), 1e-12);
    std::vector<double> cuts{a, b};
    for (double k : {-20.0, -10.0, -6.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 6.0, 10.0, 20.0}) {
        const double p = center + k * scale;
        if (p > a && p < b)
            cuts.push_back(p);
    }
    for (double span = 40.0 * scale; center + span < b || center - span > a; span *= 2.0) {
        if (center + span > a && center + span < b)
            cuts.push_back(center + span);
        if (center - span > a && center - span < b)
            cuts.push_back(center - span);
        if (span > 1e6)
            break;
    }
    std::sort(cuts.begin(), cuts.end());
    const double seg_tol = tol / static_cast<double>(cuts.size());
    double total = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i)
        total += adaptive_simpson(f, cuts[i - 1], cuts[i], seg_tol);
    return total;
}

std::pair<double, double> MprReturnDensity::support_span(double tol) const {
    const double mean = dejd_mean_increment(params_, window_);
    const double sd = std::sqrt(dejd_variance_increment(params_, window_));
    double hi = mean + 10.0 * sd + 1e-6;
    while (dejd_tail_bound(params_, window_, hi, true) > tol)
        hi = mean + (hi - mean) * 1.5;
    double lo = mean - 10.0 * sd - 1e-6;
    while (dejd_tail_bound(params_, window_, lo, false) > tol)
        lo = mean - (mean - lo) * 1.5;
    return {lo, hi};
}

double MprReturnDensity::cdf(double x) const {
    auto [lo, hi] = support_span(1e-14);
    if (x <= lo)
        return 0.0;
    if (x >= hi)
        return 1.0;
    const double v = integrate([this](double t) { return pdf(t); }, lo, std::min(x, hi), 1e-12);
    return std::clamp(v, 0.0, 1.0);
}

double MprReturnDensity::call_moment(double strike, double tol, double lower_cut) const {
    if (!(strike > 0.0))
        throw std::invalid_argument("call_moment: strike must be > 0");
    const double lk = std::max(std::log(strike), lower_cut);
    double hi = support_span(1e-15).second;
    hi = std::max(hi, lk + 1.0);
    // Tilted tail bound on int_{hi}^inf e^x f(x) dx, optimized over r in (1, eta).
    auto payoff_tail = [&](double cut) {
        double best = std::numeric_limits<double>::infinity();
        for (int i = 1; i < 60; ++i) {
            const double r = 1.0 + (params_.eta - 1.0) * i / 60.0 * (1.0 - 1e-9);
            best = std::min(best, std::exp(dejd_log_mgf(params_, window_, r) - (r - 1.0) * cut));
        }
        return best;
    };
    while (payoff_tail(hi) > 0.25 * tol && hi < lk + 2000.0)
        hi *= 1.25;
    const double model_error = truncated_exp_mass_ + payoff_tail(hi);
    if (model_error > tol)
        throw std::runtime_error("call_moment: truncation error bound " +
                                 std::to_string(model_error) + " exceeds tolerance; refine n_max");
    if (lk >= hi)
        return 0.0;
    return integrate([&](double x) { return (std::exp(x) - strike) * pdf(x); }, lk, hi,
                     0.25 * tol);
}

double MprReturnDensity::put_moment(double strike, double tol, double upper_cut) const {
    if (!(strike > 0.0))
        throw std::invalid_argument("put_moment: strike must be > 0");
    const double lk = std::min(std::log(strike), upper_cut);
    double lo = support_span(1e-15).first;
    // (strike - e^x)^+ <= strike, so the left tail is bounded by strike * P(X < lo).
    while (strike * dejd_tail_bound(params_, window_, lo, false) > 0.25 * tol && lo > lk - 2000.0)
        lo -= std::max(1.0, 0.25 * std::abs(lo));
    const double model_error =
        strike * (truncation_mass_ + dejd_tail_bound(params_, window_, lo, false));
    if (model_error > tol)
        throw std::runtime_error("put_moment: truncation error bound " +
                                 std::to_string(model_error) + " exceeds tolerance; refine n_max");
    if (lk <= lo)
        return 0.0;
    return integrate([&](double x) { return (strike - std::exp(x)) * pdf(x); }, lo, lk,
                     0.25 * tol);
}

DensityTable tabulate_density(const MprReturnDensity& density, double x_lo, double x_hi,
                              int n_points) {
    if (n_points < 9)
        throw std::invalid_argument("tabulate_density: need at least 9 grid points");
    DensityTable t;
    t.truncation_mass = density.truncation_mass();
    t.x = Eigen::ArrayXd::LinSpaced(n_points, x_lo, x_hi);
    t.pdf.resize(n_points);
    for (int i = 0; i < n_points; ++i)
        t.pdf[i] = density.pdf(t.x[i]);
    // Cumulative trapezoid; the grid is dense enough that this matches the
    // adaptive integral to well below the reported truncation mass.
    t.cdf.resize(n_points);
    t.cdf[0] = 0.0;
    const double h = (x_hi - x_lo) / (n_points - 1);
    for (int i = 1; i < n_points; ++i)
        t.cdf[i] = t.cdf[i - 1] + 0.5 * h * (t.pdf[i - 1] + t.pdf[i]);
    t.integral = t.cdf[n_points - 1];
    return t;
}

DensityTable tabulate_density(const MprReturnDensity& density, int n_points, double span_tol) {
    auto [lo, hi] = density.support_span(span_tol);
    return tabulate_density(density, lo, hi, n_points);
}

} // namespace seclend
