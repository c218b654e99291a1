#include "seclend/optim.hpp"

#include <cmath>

namespace seclend {

Eigen::VectorXd numerical_gradient(const ScalarField& f, const Eigen::VectorXd& x, double step) {
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd xp = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = step * (1.0 + std::abs(x[i]));
        xp[i] = x[i] + h;
        const double fp = f(xp);
        xp[i] = x[i] - h;
        const double fm = f(xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

Eigen::MatrixXd numerical_hessian(const ScalarField& f, const Eigen::VectorXd& x, double step) {
    const Eigen::Index n = x.size();
    Eigen::MatrixXd hess(n, n);
    const double f0 = f(x);
    Eigen::VectorXd h(n);
    for (Eigen::Index i = 0; i < n; ++i)
        h[i] = step * (1.0 + std::abs(x[i]));
    Eigen::VectorXd xp = x;
    for (Eigen::Index i = 0; i < n; ++i) {
        xp[i] = x[i] + h[i];
        const double fp = f(xp);
        xp[i] = x[i] - h[i];
        const double fm = f(xp);
        xp[i] = x[i];
        hess(i, i) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            xp[i] = x[i] + h[i];
            xp[j] = x[j] + h[j];
            const double fpp = f(xp);
            xp[j] = x[j] - h[j];
            const double fpm = f(xp);
            xp[i] = x[i] - h[i];
            const double fmm = f(xp);
            xp[j] = x[j] + h[j];
            const double fmp = f(xp);
            xp[i] = x[i];
            xp[j] = x[j];
            hess(i, j) = hess(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
        }
    }
    return hess;
}

BfgsResult minimize_bfgs(const ScalarField& f, const Eigen::VectorXd& x0,
                         const BfgsOptions& opts) {
    const Eigen::Index n = x0.size();
    BfgsResult res;
    res.x = x0;
    res.f = f(x0);
    Eigen::MatrixXd inv_hess = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd g = numerical_gradient(f, res.x, opts.fd_step);

    for (int it = 0; it < opts.max_iterations; ++it) {
        res.iterations = it;
        if (g.lpNorm<Eigen::Infinity>() < opts.grad_tolerance) {
            res.converged = true;
            break;
        }
        Eigen::VectorXd d = -(inv_hess * g);
        double slope = g.dot(d);
        if (!(slope < 0.0)) {
            inv_hess.setIdentity();
            d = -g;
            slope = g.dot(d);
            if (!(slope < 0.0))
                break;
        }
        // Armijo backtracking.
        double t = 1.0;
        double f_new = res.f;
        Eigen::VectorXd x_new = res.x;
        bool improved = false;
        for (int ls = 0; ls < 60; ++ls) {
            x_new = res.x + t * d;
            f_new = f(x_new);
            if (std::isfinite(f_new) && f_new <= res.f + 1e-4 * t * slope) {
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if (!improved)
            break;
        Eigen::VectorXd g_new = numerical_gradient(f, x_new, opts.fd_step);
        const Eigen::VectorXd s = x_new - res.x;
        const Eigen::VectorXd y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            const Eigen::VectorXd hy = inv_hess * y;
            const double yhy = y.dot(hy);
            // BFGS inverse update.
            inv_hess += ((sy + yhy) / (sy * sy)) * (s * s.transpose()) -
                        (hy * s.transpose() + s * hy.transpose()) / sy;
        }
        const double df = res.f - f_new;
        res.x = x_new;
        res.f = f_new;
        g = std::move(g_new);
        if (df >= 0.0 && df <= opts.f_tolerance * (std::abs(res.f) + 1.0))
            break; // stalled; convergence decided by the gradient check below
    }
    res.gradient = g;
    if (g.lpNorm<Eigen::Infinity>() < opts.grad_tolerance)
        res.converged = true;
    return res;
}

} // namespace seclend
