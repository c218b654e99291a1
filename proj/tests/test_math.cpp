#include <doctest.h>

#include <cmath>

#include "seclend/math.hpp"

using namespace seclend;

TEST_CASE("erfcx against frozen reference values") {
    // scipy.special.erfcx
    CHECK(erfcx(0.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(erfcx(0.5) == doctest::Approx(6.1569034419292579e-01).epsilon(1e-13));
    CHECK(erfcx(1.0) == doctest::Approx(4.2758357615580700e-01).epsilon(1e-13));
    CHECK(erfcx(3.0) == doctest::Approx(1.7900115118138998e-01).epsilon(1e-13));
    CHECK(erfcx(4.9) == doctest::Approx(1.1287909055975874e-01).epsilon(1e-13));
    CHECK(erfcx(5.1) == doctest::Approx(1.0861102631393281e-01).epsilon(1e-12));
    CHECK(erfcx(10.0) == doctest::Approx(5.6140992743822588e-02).epsilon(1e-12));
    CHECK(erfcx(30.0) == doctest::Approx(1.8795888861416754e-02).epsilon(1e-12));
    CHECK(erfcx(-2.0) == doctest::Approx(1.0894090438997797e+02).epsilon(1e-12));
}

TEST_CASE("normal pdf and cdf basics") {
    CHECK(norm_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-14));
    CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(norm_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
    CHECK(norm_pdf(1.0, 1.0, 2.0) == doctest::Approx(norm_pdf(0.0) / 2.0).epsilon(1e-14));
}

TEST_CASE("gaussian call matches quadrature of the payoff") {
    const double mean = 0.001, sd = 0.02;
    for (double strike : {0.97, 1.0, 1.005, 1.06}) {
        const double numeric = adaptive_simpson(
            [&](double x) {
                return std::max(std::exp(x) - strike, 0.0) * norm_pdf(x, mean, sd);
            },
            mean - 12.0 * sd, mean + 14.0 * sd, 1e-14);
        CHECK(gaussian_call(mean, sd, strike) == doctest::Approx(numeric).epsilon(1e-10));
    }
    // Deep out of the money collapses to zero, degenerate sd to the intrinsic.
    CHECK(gaussian_call(0.0, 0.01, 2.0) == doctest::Approx(0.0).epsilon(1e-30));
    CHECK(gaussian_call(0.1, 0.0, 1.0) == doctest::Approx(std::exp(0.1) - 1.0));
}

TEST_CASE("simpson and adaptive simpson on smooth integrands") {
    const double s = simpson([](double x) { return std::sin(x); }, 0.0, 3.141592653589793, 2000);
    CHECK(s == doctest::Approx(2.0).epsilon(1e-10));
    const double a =
        adaptive_simpson([](double x) { return std::exp(-x * x); }, -10.0, 10.0, 1e-13);
    CHECK(a == doctest::Approx(std::sqrt(3.141592653589793)).epsilon(1e-12));
}
