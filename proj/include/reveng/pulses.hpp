#pragma once

#include "reveng/frames.hpp"
#include "reveng/lsq.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace reveng {

/// Which Hamiltonian a pulse pair drives.
enum class PulseConvention {
    /// H = i W1 (|2><1| - |1><2|) + i W2 (|2><3| - |3><2|)
    Antisymmetric,
    /// H = W12 (|1><2| + |2><1|) + W23 (|2><3| + |3><2|)
    Symmetric,
};

std::string to_string(PulseConvention c);
PulseConvention parse_convention(const std::string& name);

using Waveform = std::function<double(double)>;

/// Rabi frequencies on the legs 1-2 and 2-3 as functions of s = t/T, in units of 1/T.
struct PulseSet {
    Waveform omega1;
    Waveform omega2;
    PulseConvention convention = PulseConvention::Antisymmetric;
    /// Points in (0, 1) where a waveform may jump; integrators step onto them.
    std::vector<double> breakpoints;
};

/// Closed-form engineered pulses for the Rydberg schedules:
///   W1 = beta' cos(alpha) + alpha' cot(beta) sin(alpha)
///   W2 = beta' sin(alpha) - alpha' cot(beta) cos(alpha)
/// with the removable cot(beta) singularity at s = 0, 1 taken as its limit.
PulseSet exact_pulses(const ScheduleParams& p);

/// Published laboratory-friendly approximants for mu = pi/4, A = 1: a two-segment
/// sine on leg 1 (breakpoint 0.534) and a negative two-Gaussian sum on leg 2.
PulseSet published_fitted_pulses();

struct StirapParams {
    double omega0 = 10.0;  ///< peak amplitude, units 1/T
    double tc = 0.19;      ///< Gaussian width, units of T
    double t0 = 0.14;      ///< half separation of the pulses, units of T
    double mu = kPi / 4;

    void validate() const;
};

/// Counter-intuitive STIRAP pair
///   W12 = -W0 exp(-((s - t0 - 1/2)/tc)^2) sin mu
///   W23 =  W0 exp(-((s + t0 - 1/2)/tc)^2) + W0 exp(-((s - t0 - 1/2)/tc)^2) cos mu
PulseSet stirap_pulses(const StirapParams& s);

// ---- fitting -------------------------------------------------------------

enum class FitModel {
    /// [a1, w1, p1, a2, w2, p2, b]: a1 sin(w1 s - p1) for s <= b, a2 sin(w2 s - p2) after
    PiecewiseSine,
    /// [a1, c1, d1, a2, c2, d2]: a1 exp(-((s-c1)/d1)^2) + a2 exp(-((s-c2)/d2)^2)
    GaussianSum,
};

std::size_t parameter_count(FitModel m);
double evaluate_model(FitModel m, const Eigen::VectorXd& params, double s);
Waveform model_waveform(FitModel m, Eigen::VectorXd params);

struct Sample {
    double s;
    double value;
};

std::vector<Sample> sample_waveform(const Waveform& w, int points = 1001);

struct FitSpec {
    FitModel model = FitModel::GaussianSum;
    Eigen::VectorXd initial;
    Eigen::VectorXd lower;  ///< empty: model defaults
    Eigen::VectorXd upper;
    /// PiecewiseSine only: scan the breakpoint over [scan_lo, scan_hi] at sample
    /// midpoints instead of holding initial[6] fixed.
    bool refine_breakpoint = false;
    double scan_lo = 0.3;
    double scan_hi = 0.7;
    LsqOptions options{};
};

struct FitResult {
    Eigen::VectorXd params;
    double residual_rms = 0.0;  ///< units 1/T
    int iterations = 0;
    bool converged = false;
};

/// Deterministic starting point: frequency scan with linear least squares for sine
/// segments, peak picking (extremum, argmax, half-max span) for Gaussians.
Eigen::VectorXd initial_guess(FitModel m, const std::vector<Sample>& samples,
                              double breakpoint = 0.534);

/// Damped least-squares fit of one waveform model to samples on [0, 1]. Requires at
/// least ten samples per parameter. Throws FitError on divergence.
FitResult fit_pulse(const std::vector<Sample>& samples, const FitSpec& spec);

struct FittedPulses {
    PulseSet pulses;
    FitResult omega1;
    FitResult omega2;
};

/// Fit the exact pulses with the two laboratory models on a uniform 1001-point grid.
FittedPulses fit_exact_pulses(const ScheduleParams& p, int points = 1001);

}  // namespace reveng
