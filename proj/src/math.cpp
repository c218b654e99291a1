#include "seclend/math.hpp"

#include <stdexcept>

namespace seclend {

double erfcx(double x) {
    if (x < 0.0) {
        // Overflows once exp(x^2) does; callers keep x >= 0 on hot paths.
        return 2.0 * std::exp(x * x) - erfcx(-x);
    }
    if (x <= 5.0)
        return std::exp(x * x) * std::erfc(x);
    // Continued fraction sqrt(pi) e^{x^2} erfc(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    double t = 0.0;
    for (int k = 60; k >= 1; --k)
        t = (0.5 * k) / (x + t);
    return 1.0 / ((x + t) * std::sqrt(std::numbers::pi));
}

double gaussian_call(double mean, double sd, double strike) {
    if (strike <= 0.0)
        return std::exp(mean + 0.5 * sd * sd) - strike;
    if (sd <= 0.0)
        return std::max(std::exp(mean) - strike, 0.0);
    const double lk = std::log(strike);
    const double d2 = (mean - lk) / sd;
    const double d1 = d2 + sd;
    return std::exp(mean + 0.5 * sd * sd) * norm_cdf(d1) - strike * norm_cdf(d2);
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n < 2)
        n = 2;
    if (n % 2 != 0)
        ++n;
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        sum += f(a + i * h) * (i % 2 == 0 ? 2.0 : 4.0);
    return sum * h / 3.0;
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double h = b - a;
    const double left = (h / 12.0) * (fa + 4.0 * flm + fm);
    const double right = (h / 12.0) * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
    if (!(b > a))
        return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = ((b - a) / 6.0) * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

} // namespace seclend
