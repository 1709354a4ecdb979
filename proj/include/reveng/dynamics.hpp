#pragma once

#include "reveng/engine.hpp"
#include "reveng/pulses.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace reveng {

using Mat3 = Eigen::Matrix3cd;
using Vec3 = Eigen::Vector3cd;

/// Any time-dependent Hamiltonian to integrate over s in [0, duration].
struct HamiltonianSource {
    int dim = 3;
    std::function<Mat(double)> at;
    /// Optional allocation-free path used when dim == 3.
    std::function<Mat3(double)> at3;
    std::vector<double> breakpoints;
    double duration = 1.0;  ///< integration window, units of T

    Mat operator()(double s) const;
};

/// 3x3 Hermitian H(s) for a pulse pair in its convention.
Mat3 build_pulse_H(const PulseSet& ps, double s);

HamiltonianSource pulse_source(PulseSet ps, double duration = 1.0);
HamiltonianSource engineered_source(EngineeredHamiltonian h);
HamiltonianSource zero_source(int dim);

struct GridSpec {
    int steps = 20000;    ///< fixed RK4 steps over the window
    int samples = 1001;   ///< recorded points including both ends; samples-1 must divide steps
};

struct LindbladParams {
    double gamma1 = 0.0;  ///< |2> -> |1> decay, units 1/T
    double gamma2 = 0.0;  ///< |3> -> |2> decay, units 1/T

    void validate() const;
};

struct SimResult {
    std::vector<double> grid;                   ///< s of each recorded sample
    std::vector<Vec> states;                    ///< pure runs
    std::vector<Mat> densities;                 ///< Lindblad runs
    std::vector<Eigen::VectorXd> populations;   ///< per-level occupations per sample
    std::vector<double> purity;                 ///< Lindblad runs only
    double fidelity = 0.0;                      ///< versus the target at the final time

    bool mixed() const noexcept { return !densities.empty(); }
    double max_population(int level) const;
};

/// cos(mu)|1> + sin(mu)|3>
Vec target_state(double mu);

double fidelity(const Vec& target, const Vec& psi);
double fidelity(const Vec& target, const Mat& rho);

/// Fixed-step RK4 for i psi' = H psi. Throws IntegrationQualityError when the norm
/// drifts by more than 1e-6.
SimResult evolve_pure(const HamiltonianSource& h, const Vec& psi0, const Vec& target,
                      const GridSpec& grid = {});

/// rho' = i[rho, H] + sum_l (L rho L^+ - (L^+L rho + rho L^+L)/2) with
/// L1 = sqrt(G1)|1><2| and L2 = sqrt(G2)|2><3|. Throws IntegrationQualityError when the
/// trace drifts by more than 1e-6.
SimResult evolve_lindblad(const HamiltonianSource& h, const Mat& rho0, const LindbladParams& lp,
                          const Vec& target, const GridSpec& grid = {});

/// Right-hand side of the master equation for explicit collapse operators.
Mat lindblad_rhs(const Mat& h, const Mat& rho, const std::vector<Mat>& collapse);

}  // namespace reveng
