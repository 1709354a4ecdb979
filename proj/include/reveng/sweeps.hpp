#pragma once

#include "reveng/dynamics.hpp"

#include <functional>
#include <string>
#include <vector>

namespace reveng {

/// Relative deviations of the two Rabi frequencies and of the interaction time.
struct DeviationSpec {
    double d_omega1 = 0.0;
    double d_omega2 = 0.0;
    double d_T = 0.0;

    void validate() const;
};

/// How a time deviation enters the simulation. Amplitude deviations always scale the
/// legs multiplicatively, W -> (1 + dW) W.
enum class DeviationStrategy {
    /// Waveform stretched to (1+dT)T at the nominal amplitude scale; pulse area grows by (1+dT).
    PulseArea,
    /// Pulses fixed in time; the interaction window is cut or extended (pulses off past T).
    Truncate,
    /// Whole design re-timed to (1+dT)T with W*T held fixed; F is invariant in dT.
    Rescale,
};

std::string to_string(DeviationStrategy s);
DeviationStrategy parse_deviation_strategy(const std::string& name);

struct DeviatedPulses {
    PulseSet pulses;
    double duration = 1.0;  ///< T_eff / T
};

DeviatedPulses apply_deviation(const PulseSet& ps, const DeviationSpec& d,
                               DeviationStrategy strategy = DeviationStrategy::PulseArea);

/// Everything a sweep point needs besides its own coordinates.
struct SweepSettings {
    double mu = kPi / 4;
    PulseSet pulses = published_fitted_pulses();
    GridSpec grid{20000, 2};
    DeviationStrategy strategy = DeviationStrategy::PulseArea;
    unsigned threads = 0;  ///< 0: hardware concurrency
};

/// Final-time fidelity from |1> under deviated pulses.
double deviated_fidelity(const SweepSettings& settings, const DeviationSpec& d);

enum class TableId { I, II, III, IV };

std::string to_string(TableId t);
TableId parse_table_id(const std::string& name);

struct TableRow {
    DeviationSpec deviation;
    double published = 0.0;  ///< reference fidelity of the row
    double fidelity = 0.0;   ///< computed
};

/// Row set (deviations and reference fidelities) of a robustness table.
std::vector<TableRow> table_rows(TableId t);
std::vector<TableRow> run_table(TableId t, const SweepSettings& settings);

struct StirapPoint {
    double omega0_T;
    double published = -1.0;  ///< reference value when the point is tabulated, else -1
    double fidelity = 0.0;
};

std::vector<StirapPoint> stirap_reference();
/// STIRAP fidelity at each amplitude, other pulse parameters from `base`.
std::vector<StirapPoint> stirap_scan(const std::vector<double>& omega0_T, const StirapParams& base,
                                     const SweepSettings& settings);

struct Axis {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    int points = 1;

    double at(int i) const;
};

/// Two-axis fidelity grid, row-major: values[i * y.points + j] is at (x.at(i), y.at(j)).
struct SweepGrid {
    Axis x;
    Axis y;
    std::vector<double> values;

    double at(int i, int j) const { return values[static_cast<std::size_t>(i * y.points + j)]; }
};

enum class DeviationPair { Omega1Omega2, Omega1T, Omega2T };

std::string to_string(DeviationPair p);

/// Fidelity over a square deviation grid of `points` per axis on [-range, range].
SweepGrid deviation_grid(DeviationPair pair, int points, double range, const SweepSettings& settings);

/// Lindblad fidelity from |1><1| over decay-rate axes expressed as Gamma/omega0.
SweepGrid decoherence_map(const Axis& gamma1, const Axis& gamma2, double omega0,
                          const SweepSettings& settings);

/// Runs fn(0..n-1) on a pool of worker threads; deterministic output is the caller's
/// job (write by index).
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace reveng
