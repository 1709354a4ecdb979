#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace reveng {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr cplx I{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

// Largest absolute entry of a complex matrix.
inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// ||A A^dagger - 1||_max
inline double unitarity_defect(const Mat& m) {
    return max_abs(m * m.adjoint() - Mat::Identity(m.rows(), m.cols()));
}

inline double hermiticity_defect(const Mat& m) { return max_abs(m - m.adjoint()); }

/// Violated precondition on user-supplied parameters (bad T, A, ranges, sizes).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A mixing block or assembled propagator failed the unitarity check.
class NonUnitaryError : public std::runtime_error {
public:
    NonUnitaryError(double time, double deviation);
    double time() const noexcept { return time_; }
    double deviation() const noexcept { return deviation_; }

private:
    double time_;
    double deviation_;
};

/// A Hamiltonian did not have the structure an extraction routine expected.
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Norm or trace drifted beyond tolerance during time integration.
class IntegrationQualityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace reveng
