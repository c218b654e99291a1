#include "seclend/loss.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "seclend/format.hpp"

namespace seclend {

double loss_from_exposure(const DefaultRecord& d, const TransactionSpec& txn, double recovery) {
    const double g = txn.liquidity_spread;
    const double h = txn.haircut;
    double shortfall;
    if (txn.side == Side::SecLending)
        shortfall = (1.0 + g) * d.mpr_gross - (1.0 + h);
    else
        shortfall = (1.0 - h) - (1.0 - g) * d.mpr_gross;
    return (1.0 - recovery) * d.growth * std::max(shortfall, 0.0);
}

LossSample loss_from_path(const PathSample& path, const TransactionSpec& txn,
                          const CreditParams& credit) {
    LossSample out;
    if (!path.default_time)
        return out;
    out.defaulted = true;
    out.tau = *path.default_time;
    const std::size_t pre_default = path.log_return_path.size() - txn.mpr_days;
    const double x_tau = std::accumulate(path.log_return_path.begin(),
                                         path.log_return_path.begin() + pre_default, 0.0);
    DefaultRecord d{*path.default_time, std::exp(x_tau), std::exp(*path.mpr_log_return)};
    out.loss = loss_from_exposure(d, txn, credit.recovery);
    return out;
}

namespace {

LossDistribution assemble(std::vector<LossSample> defaults, std::size_t n_paths,
                          const SeedDescriptor& seeds) {
    LossDistribution dist;
    dist.path_count = n_paths;
    dist.seed_descriptor = seeds;
    dist.samples = std::move(defaults);
    dist.samples.resize(n_paths); // remaining paths: zero loss, no default
    return dist;
}

} // namespace

LossDistribution losses(const JointExposures& exposures, const TransactionSpec& txn,
                        double recovery) {
    std::vector<LossSample> defaulted;
    defaulted.reserve(exposures.defaults.size());
    for (const auto& d : exposures.defaults)
        defaulted.push_back(LossSample{loss_from_exposure(d, txn, recovery), true, d.tau});
    return assemble(std::move(defaulted), exposures.path_count, exposures.seed_descriptor);
}

LossDistribution losses(const IndependentExposures& exposures, const TransactionSpec& txn) {
    std::vector<LossSample> defaulted;
    defaulted.reserve(exposures.path_count);
    for (double r : exposures.gross_returns) {
        DefaultRecord d{0.0, 1.0, r};
        defaulted.push_back(LossSample{loss_from_exposure(d, txn, 0.0), true, 0.0});
    }
    return assemble(std::move(defaulted), exposures.path_count, exposures.seed_descriptor);
}

LossDistribution build_distribution_joint(const DejdParams& dejd, const CreditParams& credit,
                                          const TransactionSpec& txn, std::size_t n_paths,
                                          std::uint64_t seed, int workers) {
    require_valid(txn);
    SimulationGrid grid{txn.horizon, txn.mpr_days};
    return losses(simulate_joint_exposures(dejd, credit, grid, n_paths, seed, workers), txn,
                  credit.recovery);
}

LossDistribution build_distribution_independent(const DejdParams& dejd,
                                                const TransactionSpec& txn, std::size_t n_paths,
                                                std::uint64_t seed, int workers) {
    require_valid(txn);
    return losses(simulate_mpr_returns(dejd, txn.mpr_days, n_paths, seed, workers), txn);
}

namespace {

/// Shared estimator core: positive losses plus the total path count pin every
/// metric, since all remaining samples are exact zeros.
RiskMetrics metrics_impl(std::vector<double> positive, std::size_t n, double q) {
    if (n == 0)
        throw std::invalid_argument("metrics: path_count must be >= 1");
    if (!(q > 0.0 && q < 1.0))
        throw std::invalid_argument("metrics: es_confidence must lie in (0, 1)");
    RiskMetrics m;
    m.es_confidence = q;
    m.path_count = n;

    double sum = 0.0, sum_sq = 0.0;
    for (double l : positive) {
        sum += l;
        sum_sq += l * l;
    }
    const double dn = static_cast<double>(n);
    m.el = sum / dn;
    m.el_stderr = std::sqrt(std::max(0.0, sum_sq / dn - m.el * m.el) / dn);
    m.pd = static_cast<double>(positive.size()) / dn;
    m.pd_stderr = std::sqrt(m.pd * (1.0 - m.pd) / dn);

    // Worst ceil((1-q) n) samples; the epsilon keeps representable products
    // like 0.01 * n from ceiling up a whole extra sample.
    std::size_t tail = static_cast<std::size_t>(std::ceil((1.0 - q) * dn - 1e-9));
    tail = std::clamp<std::size_t>(tail, 1, n);
    m.es_tail_thin = tail < 20;

    const std::size_t in_tail = std::min(tail, positive.size());
    std::partial_sort(positive.begin(), positive.begin() + in_tail, positive.end(),
                      std::greater<>());
    double t_sum = 0.0, t_sum_sq = 0.0;
    for (std::size_t i = 0; i < in_tail; ++i) {
        t_sum += positive[i];
        t_sum_sq += positive[i] * positive[i];
    }
    const double dt = static_cast<double>(tail);
    m.es = t_sum / dt;
    m.es_stderr = std::sqrt(std::max(0.0, t_sum_sq / dt - m.es * m.es) / dt);
    return m;
}

} // namespace

RiskMetrics metrics(const LossDistribution& dist, double es_confidence) {
    std::vector<double> positive;
    for (const auto& s : dist.samples) {
        if (s.loss > 0.0)
            positive.push_back(s.loss);
    }
    return metrics_impl(std::move(positive), dist.path_count, es_confidence);
}

HaircutObjective::HaircutObjective(const JointExposures& exposures, const TransactionSpec& txn,
                                   double recovery, RatingCriterion criterion)
    : side_(txn.side), liquidity_spread_(txn.liquidity_spread), criterion_(criterion),
      path_count_(exposures.path_count) {
    const double g = txn.liquidity_spread;
    const double scale_g = side_ == Side::SecLending ? (1.0 + g) : (1.0 - g);
    scaled_return_.reserve(exposures.defaults.size());
    scale_.reserve(exposures.defaults.size());
    for (const auto& d : exposures.defaults) {
        scaled_return_.push_back(scale_g * d.mpr_gross);
        scale_.push_back((1.0 - recovery) * d.growth);
    }
    finalize();
}

HaircutObjective::HaircutObjective(const IndependentExposures& exposures,
                                   const TransactionSpec& txn, RatingCriterion criterion)
    : side_(txn.side), liquidity_spread_(txn.liquidity_spread), criterion_(criterion),
      path_count_(exposures.path_count) {
    const double g = txn.liquidity_spread;
    const double scale_g = side_ == Side::SecLending ? (1.0 + g) : (1.0 - g);
    scaled_return_.reserve(exposures.gross_returns.size());
    for (double r : exposures.gross_returns)
        scaled_return_.push_back(scale_g * r);
    scale_.assign(exposures.gross_returns.size(), 1.0);
    finalize();
}

void HaircutObjective::finalize() {
    std::vector<std::size_t> order(scaled_return_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scaled_return_[a] < scaled_return_[b]; });
    std::vector<double> v(order.size()), a(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        v[i] = scaled_return_[order[i]];
        a[i] = scale_[order[i]];
    }
    scaled_return_ = std::move(v);
    scale_ = std::move(a);
    prefix_scale_.assign(scale_.size() + 1, 0.0);
    prefix_scaled_return_.assign(scale_.size() + 1, 0.0);
    for (std::size_t i = 0; i < scale_.size(); ++i) {
        prefix_scale_[i + 1] = prefix_scale_[i] + scale_[i];
        prefix_scaled_return_[i + 1] = prefix_scaled_return_[i] + scale_[i] * scaled_return_[i];
    }
}

double HaircutObjective::operator()(double haircut) const {
    const double n = static_cast<double>(path_count_);
    const std::size_t m = scaled_return_.size();
    if (side_ == Side::SecLending) {
        const double s = 1.0 + haircut;
        // Paths with scaled return strictly above the strike lose money.
        const std::size_t k =
            std::upper_bound(scaled_return_.begin(), scaled_return_.end(), s) -
            scaled_return_.begin();
        if (criterion_ == RatingCriterion::DefaultProbability)
            return static_cast<double>(m - k) / n;
        const double sum_a = prefix_scale_[m] - prefix_scale_[k];
        const double sum_av = prefix_scaled_return_[m] - prefix_scaled_return_[k];
        return (sum_av - s * sum_a) / n;
    }
    const double s = 1.0 - haircut;
    const std::size_t k = std::lower_bound(scaled_return_.begin(), scaled_return_.end(), s) -
                          scaled_return_.begin();
    if (criterion_ == RatingCriterion::DefaultProbability)
        return static_cast<double>(k) / n;
    return (s * prefix_scale_[k] - prefix_scaled_return_[k]) / n;
}

RiskMetrics HaircutObjective::metrics_at(double haircut, double es_confidence) const {
    std::vector<double> positive;
    if (side_ == Side::SecLending) {
        const double s = 1.0 + haircut;
        for (std::size_t i = 0; i < scaled_return_.size(); ++i)
            if (scaled_return_[i] > s)
                positive.push_back(scale_[i] * (scaled_return_[i] - s));
    } else {
        const double s = 1.0 - haircut;
        for (std::size_t i = 0; i < scaled_return_.size(); ++i)
            if (scaled_return_[i] < s)
                positive.push_back(scale_[i] * (s - scaled_return_[i]));
    }
    return metrics_impl(std::move(positive), path_count_, es_confidence);
}

AnalyticIndependentLoss::AnalyticIndependentLoss(const DejdParams& dejd,
                                                 const TransactionSpec& txn, double tail_tol,
                                                 double quad_tol)
    : txn_(txn), density_(dejd, txn.mpr_years(), tail_tol), quad_tol_(quad_tol) {
    require_valid(txn);
}

double AnalyticIndependentLoss::strike() const {
    if (txn_.side == Side::SecLending)
        return (1.0 + txn_.haircut) / (1.0 + txn_.liquidity_spread);
    return (1.0 - txn_.haircut) / (1.0 - txn_.liquidity_spread);
}

double AnalyticIndependentLoss::el() const {
    if (txn_.side == Side::SecLending)
        return (1.0 + txn_.liquidity_spread) * density_.call_moment(strike(), quad_tol_);
    return (1.0 - txn_.liquidity_spread) * density_.put_moment(strike(), quad_tol_);
}

double AnalyticIndependentLoss::pd() const {
    const double c = density_.cdf(std::log(strike()));
    return txn_.side == Side::SecLending ? 1.0 - c : c;
}

double AnalyticIndependentLoss::es(double confidence) const {
    if (!(confidence > 0.0 && confidence < 1.0))
        throw std::invalid_argument("es: confidence must lie in (0, 1)");
    const double tail_mass = 1.0 - confidence;
    if (pd() <= tail_mass)
        return el() / tail_mass;
    // Loss quantile sits inside the loss region; bisect the return level
    // carrying exactly tail_mass of probability beyond it.
    const double lk = std::log(strike());
    auto span = density_.support_span(1e-14);
    if (txn_.side == Side::SecLending) {
        double lo = lk, hi = span.second;
        for (int i = 0; i < 100; ++i) {
            const double mid = 0.5 * (lo + hi);
            (1.0 - density_.cdf(mid) > tail_mass ? lo : hi) = mid;
        }
        const double x_q = 0.5 * (lo + hi);
        return (1.0 + txn_.liquidity_spread) * density_.call_moment(strike(), quad_tol_, x_q) /
               tail_mass;
    }
    double lo = span.first, hi = lk;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (density_.cdf(mid) > tail_mass ? hi : lo) = mid;
    }
    const double x_q = 0.5 * (lo + hi);
    return (1.0 - txn_.liquidity_spread) * density_.put_moment(strike(), quad_tol_, x_q) /
           tail_mass;
}

void write_loss_csv(const LossDistribution& dist, std::ostream& os) {
    os << "loss,defaulted,tau\n";
    for (const auto& s : dist.samples) {
        os << format_double(s.loss) << ',' << (s.defaulted ? 1 : 0) << ',';
        if (s.defaulted)
            os << format_double(s.tau);
        os << '\n';
    }
}

} // namespace seclend
