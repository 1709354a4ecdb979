#pragma once

#include "reveng/propagator.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace reveng {

/// Hermitian generator H(s) (units 1/T, hbar = 1) of a designed propagator.
class EngineeredHamiltonian {
public:
    using Fn = std::function<Mat(double)>;

    EngineeredHamiltonian(int dim, Fn eval);

    int dim() const noexcept { return dim_; }
    Mat operator()(double s) const { return eval_(s); }
    /// Coefficient of |m><n| (0-based level indices) at s.
    cplx coupling(int m, int n, double s) const;

private:
    int dim_;
    Fn eval_;
};

/// Level index pair (0-based) naming one bare-basis coupling |m><n|.
using LevelPair = std::pair<int, int>;

struct ForbiddenCouplingReport {
    std::vector<LevelPair> pairs;
    double max_abs = 0.0;     ///< max over grid and pairs of |<m|H|n>|, units 1/T
    double worst_time = 0.0;  ///< s at which max_abs occurs
};

/// H(s) = i sum_k |dphi_k><phi_k| + i sum_{m,n non-anchored} (dLambda Lambda^+)_mn |phi_m><phi_n|
/// evaluated from the analytic frame and mixing-block derivatives.
EngineeredHamiltonian extract_H(const PropagatorDesign& design);

/// Closed-form three-level Hamiltonian of the (lambda, theta) propagator on the
/// Rydberg frame, including the theta-rate terms.
EngineeredHamiltonian rydberg_H_theta(const ThreeLevelControls& c, const ScheduleParams& p);

/// Controls with theta = 0 and lambda' = -alpha'/sin(beta), which cancels the
/// |1><3| and |3><1| couplings. lambda is tabulated once by adaptive quadrature.
ThreeLevelControls eliminate_13(const ScheduleParams& p);

/// The design Rydberg frame + one anchored state + three-level mixing block.
PropagatorDesign rydberg_design(const ScheduleParams& p, const ThreeLevelControls& c);

/// Scan |<m|H|n>| over `samples` uniform points on [0, 1].
ForbiddenCouplingReport forbidden_coupling_report(const EngineeredHamiltonian& h,
                                                  std::vector<LevelPair> pairs,
                                                  int samples = 1001);

struct PulsePair {
    double omega1;  ///< -i <2|H|1>
    double omega2;  ///< -i <2|H|3>
};

/// Read the Rabi frequencies of H = i W1 (|2><1| - |1><2|) + i W2 (|2><3| - |3><2|).
/// Throws StructuralError if H departs from that form by more than 1e-10.
PulsePair pulse_coefficients(const EngineeredHamiltonian& h, double s);
PulsePair pulse_coefficients(const Mat& h);

}  // namespace reveng
