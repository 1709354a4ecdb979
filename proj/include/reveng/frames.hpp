#pragma once

#include "reveng/types.hpp"

#include <functional>
#include <utility>

namespace reveng {

// Time throughout the library is the dimensionless s = t/T in [0, 1]; every
// rate (derivative, Rabi frequency, decay constant) is in units of 1/T.

/// Schedule parameters for the three-level transfer.
struct ScheduleParams {
    double mu = kPi / 4;  ///< target mixing angle, radians
    double A = 1.0;       ///< peak of beta(s), radians
    double T = 1.0;       ///< total interaction time (only re-enters through physical rates)

    void validate() const;
};

/// A value and its derivative with respect to s.
struct Schedule {
    double value;
    double rate;
};

/// Time-dependent orthonormal basis. Column n of basis(s) is |phi_n(s)>, column n
/// of derivative(s) is d|phi_n>/ds. Immutable; safe to evaluate concurrently.
class MovingFrame {
public:
    using Fn = std::function<Mat(double)>;

    MovingFrame(int dim, Fn basis, Fn derivative);

    int dim() const noexcept { return dim_; }
    Mat basis(double s) const;
    Mat derivative(double s) const;

private:
    int dim_;
    Fn basis_;
    Fn derivative_;
};

Schedule schedule_alpha(const ScheduleParams& p, double s);
Schedule schedule_beta(const ScheduleParams& p, double s);

/// The three-level frame
///   |phi1> = cos a cos b|1> + sin b|2> + sin a cos b|3>
///   |phi2> = cos a sin b|1> - cos b|2> + sin a sin b|3>
///   |phi3> = sin a|1> - cos a|3>
/// with a(s), b(s) from schedule_alpha/schedule_beta.
MovingFrame rydberg_frame(const ScheduleParams& p);

/// One factor of a generator frame: exp(angle(s) * K) with K anti-Hermitian.
struct GeneratorTerm {
    std::function<Schedule(double)> angle;
    Mat generator;
};

/// Frame Phi(s) = exp(a_1(s) K_1) ... exp(a_k(s) K_k) Phi0, with analytic derivative by
/// the product rule. Phi0 must be unitary and every K_i anti-Hermitian.
MovingFrame generator_frame(std::vector<GeneratorTerm> terms, Mat initial);

/// exp(a K) for anti-Hermitian K, through the Hermitian eigendecomposition of iK.
Mat expm_skew(const Mat& generator, double angle);

/// Max |<phi_m|phi_n> - delta_mn| at s.
double orthonormality_defect(const MovingFrame& f, double s);
/// Max |sum_n |phi_n><phi_n| - 1| at s.
double completeness_defect(const MovingFrame& f, double s);

}  // namespace reveng
