#pragma once

#include <functional>

#include <Eigen/Dense>

namespace seclend {

using ScalarField = std::function<double(const Eigen::VectorXd&)>;

struct BfgsOptions {
    int max_iterations = 400;
    double grad_tolerance = 1e-7; // inf-norm
    double f_tolerance = 1e-13;   // relative improvement stall
    double fd_step = 1e-6;        // central-difference scale
};

struct BfgsResult {
    Eigen::VectorXd x;
    double f = 0.0;
    Eigen::VectorXd gradient;
    int iterations = 0;
    bool converged = false;
};

Eigen::VectorXd numerical_gradient(const ScalarField& f, const Eigen::VectorXd& x, double step);

Eigen::MatrixXd numerical_hessian(const ScalarField& f, const Eigen::VectorXd& x, double step);

/// BFGS minimization with Armijo backtracking and numerical central-difference
/// gradients. Fully deterministic for a deterministic objective.
BfgsResult minimize_bfgs(const ScalarField& f, const Eigen::VectorXd& x0,
                         const BfgsOptions& opts = {});

} // namespace seclend
