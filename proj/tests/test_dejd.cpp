#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "seclend/dejd.hpp"
#include "seclend/math.hpp"

using namespace seclend;

namespace {

const DejdParams kFixture{0.05, 0.2, 25.0, 0.4, 60.0, 45.0};

/// Characteristic-function inversion oracle, independent of the Erlang
/// mixture implementation: f(x) = (1/pi) int_0^inf Re(e^{-iwx} phi(w)) dw.
double cf_density(double x, const DejdParams& p, double dt, double w_max = 4000.0,
                  int n = 400000) {
    const std::complex<double> i(0.0, 1.0);
    auto integrand = [&](double w) {
        const std::complex<double> jump =
            p.lambda_a * (p.p_u * p.eta / (p.eta - i * w) +
                          p.q_d() * p.theta / (p.theta + i * w) - 1.0);
        const std::complex<double> psi =
            dt * (i * p.mu * w - 0.5 * p.sigma_a * p.sigma_a * w * w + jump);
        return (std::exp(psi - i * w * x)).real();
    };
    // Composite Simpson; the integrand decays like a Gaussian in w.
    const double h = w_max / n;
    double sum = integrand(0.0) + integrand(w_max);
    for (int k = 1; k < n; ++k)
        sum += integrand(k * h) * (k % 2 ? 4.0 : 2.0);
    return sum * h / (3.0 * std::numbers::pi);
}

} // namespace

TEST_CASE("jump density matches the two-sided exponential form") {
    DejdParams p{0.0, 0.1, 1.0, 1.0, 2.0, 3.0};
    CHECK(jump_density(0.0, p) == doctest::Approx(2.0)); // p_u eta e^0

    DejdParams sym{0.0, 0.1, 1.0, 0.5, 3.0, 3.0};
    CHECK(jump_density(0.2, sym) == doctest::Approx(jump_density(-0.2, sym)));

    DejdParams gen{0.0, 0.1, 1.0, 0.3, 40.0, 25.0};
    CHECK(jump_density(0.05, gen) == doctest::Approx(0.3 * 40.0 * std::exp(-40.0 * 0.05)));
    CHECK(jump_density(-0.05, gen) == doctest::Approx(0.7 * 25.0 * std::exp(25.0 * -0.05)));
}

TEST_CASE("jump density integrates to one (adaptive quadrature oracle)") {
    for (const DejdParams& p : {kFixture, DejdParams{0.0, 0.1, 1.0, 0.9, 1.5, 0.6},
                                DejdParams{0.0, 0.1, 1.0, 0.05, 2.0, 7.0}}) {
        auto f = [&](double y) { return jump_density(y, p); };
        // Inner splits keep the sharp near-zero region from being stepped over.
        const double total = adaptive_simpson(f, 0.0, 1.0, 1e-14) +
                             adaptive_simpson(f, 1.0, 50.0, 1e-14) +
                             adaptive_simpson(f, -1.0, 0.0, 1e-14) +
                             adaptive_simpson(f, -50.0, -1.0, 1e-14);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("mean increment closed form") {
    DejdParams no_jumps{0.05, 0.3, 0.0, 0.5, 2.0, 2.0};
    CHECK(dejd_mean_increment(no_jumps, 1.0) == doctest::Approx(0.05));

    DejdParams up_only{0.0, 0.3, 10.0, 1.0, 50.0, 2.0};
    CHECK(dejd_mean_increment(up_only, 0.1) == doctest::Approx(0.02));
}

TEST_CASE("mean increment matches Monte Carlo within 4 standard errors") {
    const double dt = 0.02;
    std::mt19937_64 rng(1234);
    const std::size_t n = 1'000'000;
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = sample_dejd_increment(kFixture, dt, rng);
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq / n - mean * mean) / n);
    CHECK(std::abs(mean - dejd_mean_increment(kFixture, dt)) < 4.0 * se);
}

TEST_CASE("deterministic drift when both noise sources vanish") {
    DejdParams p{0.07, 0.0, 0.0, 0.5, 2.0, 2.0};
    std::mt19937_64 rng(7);
    for (int i = 0; i < 5; ++i)
        CHECK(sample_dejd_increment(p, 0.25, rng) == doctest::Approx(0.07 * 0.25));
}

TEST_CASE("diffusion-only sample variance matches sigma^2 dt within 4 SE") {
    DejdParams p{0.0, 0.2, 0.0, 0.5, 2.0, 2.0};
    const double dt = 1.0 / 250.0;
    std::mt19937_64 rng(99);
    const std::size_t n = 1'000'000;
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = sample_dejd_increment(p, dt, rng);
        sum += x;
        sum_sq += x * x;
    }
    const double var = sum_sq / n - (sum / n) * (sum / n);
    const double expected = p.sigma_a * p.sigma_a * dt;
    // SE of a Gaussian sample variance is var sqrt(2/n).
    CHECK(std::abs(var - expected) < 4.0 * expected * std::sqrt(2.0 / n));
}

TEST_CASE("sample skewness sign follows the analytic third central moment") {
    // Fixture chosen so the third-moment sign and the up/down asymmetry
    // expression agree.
    DejdParams p{0.0, 0.05, 40.0, 0.6, 25.0, 50.0};
    const double dt = 1.0 / 250.0;
    const double c3 = dejd_third_central_moment(p, dt);
    REQUIRE(c3 > 0.0);
    REQUIRE(p.p_u / (p.eta * p.eta) - p.q_d() / (p.theta * p.theta) > 0.0);

    std::mt19937_64 rng(2024);
    const std::size_t n = 2'000'000;
    std::vector<double> xs(n);
    double mean = 0.0;
    for (auto& x : xs) {
        x = sample_dejd_increment(p, dt, rng);
        mean += x;
    }
    mean /= n;
    double m3 = 0.0;
    for (double x : xs)
        m3 += std::pow(x - mean, 3);
    m3 /= n;
    CHECK(m3 > 0.0);
    CHECK(m3 == doctest::Approx(c3).epsilon(0.2));

    DejdParams mirrored = p;
    mirrored.p_u = p.q_d();
    std::swap(mirrored.eta, mirrored.theta);
    CHECK(dejd_third_central_moment(mirrored, dt) == doctest::Approx(-c3));
}

TEST_CASE("log MGF sanity and tail bound") {
    CHECK(dejd_log_mgf(kFixture, 1.0, 0.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(dejd_log_mgf(kFixture, 1.0, kFixture.eta), std::domain_error);
    // Chernoff bound dominates the exact Gaussian tail when jumps are off.
    DejdParams gauss{0.0, 0.2, 0.0, 0.5, 2.0, 2.0};
    const double x = 0.1;
    const double exact = 1.0 - norm_cdf(x / (0.2 * std::sqrt(0.01)));
    const double bound = dejd_tail_bound(gauss, 0.01, x, true);
    CHECK(bound >= exact);
    CHECK(bound < 30.0 * exact + 1e-300);
}

TEST_CASE("MPR density reduces to the exact Gaussian when jumps are off") {
    DejdParams p{0.05, 0.2, 0.0, 0.5, 2.0, 2.0};
    const double u = 3.0 / 250.0;
    MprReturnDensity density(p, u);
    CHECK(density.n_max() == 0);
    for (double x : {-0.05, -0.01, 0.0, 0.013, 0.04})
        CHECK(density.pdf(x) ==
              doctest::Approx(norm_pdf(x, 0.05 * u, 0.2 * std::sqrt(u))).epsilon(1e-14));
}

TEST_CASE("MPR density matches the characteristic-function oracle") {
    const double dt = 1.0 / 250.0;
    MprReturnDensity density(kFixture, dt);
    // Frozen cross-implementation values (scipy CF inversion, trapezoid on
    // [-4000, 4000] with 2^20 points).
    CHECK(density.pdf(-0.10) == doctest::Approx(3.66080407871055e-02).epsilon(1e-9));
    CHECK(density.pdf(-0.02) == doctest::Approx(9.09322508038252e+00).epsilon(1e-9));
    CHECK(density.pdf(0.0) == doctest::Approx(3.00536627211565e+01).epsilon(1e-9));
    CHECK(density.pdf(0.013) == doctest::Approx(1.82411218829315e+01).epsilon(1e-9));
    CHECK(density.pdf(0.10) == doctest::Approx(8.29499224536258e-03).epsilon(1e-9));

    // And the in-test oracle over a sweep.
    for (double x = -0.08; x <= 0.08; x += 0.01)
        CHECK(density.pdf(x) == doctest::Approx(cf_density(x, kFixture, dt)).epsilon(1e-8));
}

TEST_CASE("MPR density integrates to one within 1e-8") {
    for (const DejdParams& p : {kFixture, DejdParams{-0.1, 0.35, 80.0, 0.25, 30.0, 20.0}}) {
        for (double u : {1.0 / 250.0, 3.0 / 250.0, 5.0 / 250.0}) {
            MprReturnDensity density(p, u);
            auto [lo, hi] = density.support_span(1e-13);
            const double mass =
                adaptive_simpson([&](double x) { return density.pdf(x); }, lo, hi, 1e-12);
            CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
            CHECK(density.truncation_mass() < 1e-11);
        }
    }
}

TEST_CASE("MPR density tabulation carries a consistent CDF") {
    MprReturnDensity density(kFixture, 3.0 / 250.0);
    const DensityTable table = tabulate_density(density, 20001);
    CHECK(table.integral == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(table.cdf[0] == 0.0);
    for (int i = 1; i < table.cdf.size(); ++i)
        CHECK(table.cdf[i] >= table.cdf[i - 1]);
}

TEST_CASE("MPR density Kolmogorov distance to a Monte Carlo sample") {
    const double u = 3.0 / 250.0;
    MprReturnDensity density(kFixture, u);
    const DensityTable table = tabulate_density(density, 60001, 1e-13);

    std::mt19937_64 rng(555);
    const std::size_t n = 200'000;
    std::vector<double> xs(n);
    for (auto& x : xs)
        x = sample_dejd_increment(kFixture, u, rng);
    std::sort(xs.begin(), xs.end());

    const double x_lo = table.x[0];
    const double dx = table.x[1] - table.x[0];
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pos =
            std::clamp((xs[i] - x_lo) / dx, 0.0, static_cast<double>(table.x.size() - 1));
        const auto idx = static_cast<Eigen::Index>(pos);
        const double frac = pos - idx;
        const double cdf = idx + 1 < table.cdf.size()
                               ? table.cdf[idx] + frac * (table.cdf[idx + 1] - table.cdf[idx])
                               : table.cdf[idx];
        const double emp_hi = static_cast<double>(i + 1) / n;
        const double emp_lo = static_cast<double>(i) / n;
        ks = std::max({ks, std::abs(emp_hi - cdf), std::abs(emp_lo - cdf)});
    }
    CHECK(ks < 0.005);
}

TEST_CASE("call moment agrees with the Gaussian closed form when jumps are off") {
    DejdParams p{0.05, 0.2, 0.0, 0.5, 2.0, 2.0};
    const double u = 3.0 / 250.0;
    MprReturnDensity density(p, u);
    for (double strike : {0.95, 1.0, 1.02, 1.1}) {
        const double exact = gaussian_call(p.mu * u, p.sigma_a * std::sqrt(u), strike);
        CHECK(density.call_moment(strike, 1e-10) == doctest::Approx(exact).epsilon(1e-9));
    }
}

TEST_CASE("call and put moments satisfy parity against the exp moment") {
    MprReturnDensity density(kFixture, 3.0 / 250.0);
    const double strike = 1.01;
    const double call = density.call_moment(strike, 1e-10);
    const double put = density.put_moment(strike, 1e-10);
    const double fwd = dejd_exp_moment(kFixture, 3.0 / 250.0);
    CHECK(call - put == doctest::Approx(fwd - strike).epsilon(1e-7));
}

TEST_CASE("call moment raises when the tolerance is unattainable") {
    MprReturnDensity density(kFixture, 3.0 / 250.0, 1e-6); // sloppy truncation
    CHECK(density.truncation_mass() > 1e-12);
    CHECK_THROWS_AS(density.call_moment(1.0, 1e-14), std::runtime_error);
}
