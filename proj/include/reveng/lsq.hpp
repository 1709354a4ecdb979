#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>

namespace reveng {

/// Residuals r(p) and Jacobian dr/dp for a nonlinear least-squares problem.
using ResidualFn = std::function<void(const Eigen::VectorXd& params, Eigen::VectorXd& residual,
                                      Eigen::MatrixXd& jacobian)>;

struct LsqOptions {
    int max_iterations = 500;
    double gradient_tol = 1e-8;  ///< stop when ||J^T r||_inf falls below this
    double step_tol = 1e-15;     ///< stop when the accepted step is this small (relative)
};

struct LsqResult {
    Eigen::VectorXd params;
    double cost = 0.0;  ///< 0.5 * ||r||^2
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Raised when damped least squares diverges or the normal matrix is singular.
/// Carries the best parameters seen so far.
class FitError : public std::runtime_error {
public:
    FitError(const std::string& what, Eigen::VectorXd best)
        : std::runtime_error(what), best_(std::move(best)) {}
    const Eigen::VectorXd& best_params() const noexcept { return best_; }

private:
    Eigen::VectorXd best_;
};

/// Levenberg-Marquardt with Marquardt diagonal scaling, projected onto box bounds.
LsqResult levenberg_marquardt(const ResidualFn& fn, Eigen::VectorXd initial,
                              const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                              const LsqOptions& options = {});

}  // namespace reveng
