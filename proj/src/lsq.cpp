#include "reveng/lsq.hpp"

#include <cmath>

namespace reveng {

namespace {

bool finite(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

LsqResult levenberg_marquardt(const ResidualFn& fn, Eigen::VectorXd initial,
                              const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                              const LsqOptions& options) {
    const auto n = initial.size();
    if (lower.size() != n || upper.size() != n)
        throw std::invalid_argument("bounds must match the parameter count");
    Eigen::VectorXd p = initial.cwiseMax(lower).cwiseMin(upper);

    Eigen::VectorXd r;
    Eigen::MatrixXd J;
    fn(p, r, J);
    if (!finite(r) || !J.allFinite()) throw FitError("residuals not finite at the initial guess", p);

    double cost = 0.5 * r.squaredNorm();
    double damping = 1e-3;
    LsqResult out;
    out.params = p;
    out.cost = cost;

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        const Eigen::VectorXd g = J.transpose() * r;
        out.gradient_norm = g.lpNorm<Eigen::Infinity>();
        out.iterations = iter;
        if (out.gradient_norm < options.gradient_tol) {
            out.converged = true;
            return out;
        }
        const Eigen::MatrixXd normal = J.transpose() * J;
        const Eigen::VectorXd diag = normal.diagonal();
        if (diag.maxCoeff() <= 0.0) throw FitError("singular Jacobian", out.params);

        bool accepted = false;
        while (!accepted) {
            Eigen::MatrixXd a = normal;
            a.diagonal() += damping * diag;
            Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
            Eigen::VectorXd step = ldlt.solve(-g);
            if (ldlt.info() != Eigen::Success || !finite(step) || (diag.array() <= 0.0).any())
                throw FitError("singular Jacobian", out.params);

            Eigen::VectorXd trial = (p + step).cwiseMax(lower).cwiseMin(upper);
            Eigen::VectorXd r_trial;
            Eigen::MatrixXd j_trial;
            fn(trial, r_trial, j_trial);
            const double trial_cost = finite(r_trial) ? 0.5 * r_trial.squaredNorm() : INFINITY;

            if (trial_cost < cost) {
                const double moved = (trial - p).norm();
                p = std::move(trial);
                r = std::move(r_trial);
                J = std::move(j_trial);
                cost = trial_cost;
                out.params = p;
                out.cost = cost;
                damping = std::max(damping / 3.0, 1e-12);
                accepted = true;
                if (moved <= options.step_tol * (p.norm() + options.step_tol)) {
                    out.gradient_norm = (J.transpose() * r).lpNorm<Eigen::Infinity>();
                    out.iterations = iter + 1;
                    out.converged = true;
                    return out;
                }
            } else {
                damping *= 4.0;
                if (damping > 1e16) {
                    // No descent direction left at working precision: a stationary point.
                    out.iterations = iter + 1;
                    out.converged = out.gradient_norm < std::sqrt(options.gradient_tol);
                    if (!out.converged) throw FitError("least squares stalled (damping overflow)", out.params);
                    return out;
                }
            }
        }
    }
    const Eigen::VectorXd g = J.transpose() * r;
    out.gradient_norm = g.lpNorm<Eigen::Infinity>();
    out.iterations = options.max_iterations;
    out.converged = out.gradient_norm < options.gradient_tol;
    return out;
}

}  // namespace reveng
