#include "reveng/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <limits>
#include <optional>
#include <sstream>

namespace reveng {

std::string to_string(PulseConvention c) {
    switch (c) {
        case PulseConvention::Antisymmetric: return "antisymmetric";
        case PulseConvention::Symmetric: return "symmetric";
    }
    throw StructuralError("unknown pulse convention");
}

PulseConvention parse_convention(const std::string& name) {
    if (name == "antisymmetric") return PulseConvention::Antisymmetric;
    if (name == "symmetric") return PulseConvention::Symmetric;
    throw PreconditionError("unknown pulse convention '" + name + "'");
}

PulseSet exact_pulses(const ScheduleParams& p) {
    p.validate();
    auto legs = [p](double s) {
        const auto [a, ad] = schedule_alpha(p, s);
        const auto [b, bd] = schedule_beta(p, s);
        const double sb = std::sin(b);
        const double cot_term = sb == 0.0 ? 0.0 : ad * std::cos(b) / sb;
        return std::pair{bd * std::cos(a) + cot_term * std::sin(a),
                         bd * std::sin(a) - cot_term * std::cos(a)};
    };
    PulseSet ps;
    ps.omega1 = [legs](double s) { return legs(s).first; };
    ps.omega2 = [legs](double s) { return legs(s).second; };
    return ps;
}

namespace {

const Eigen::VectorXd& published_leg1() {
    static const Eigen::VectorXd v =
        (Eigen::VectorXd(7) << 3.154, 5.939, 0.02523, 1.686, 6.531, 0.3177, 0.534).finished();
    return v;
}

const Eigen::VectorXd& published_leg2() {
    static const Eigen::VectorXd v =
        (Eigen::VectorXd(6) << -0.9443, 0.3185, 0.1848, -2.95, 0.7233, 0.2004).finished();
    return v;
}

}  // namespace

PulseSet published_fitted_pulses() {
    PulseSet ps;
    ps.omega1 = model_waveform(FitModel::PiecewiseSine, published_leg1());
    ps.omega2 = model_waveform(FitModel::GaussianSum, published_leg2());
    ps.breakpoints = {published_leg1()(6)};
    return ps;
}

void StirapParams::validate() const {
    if (!(omega0 > 0) || !(tc > 0) || !(t0 > 0))
        throw PreconditionError("STIRAP omega0, tc and t0 must all be > 0");
    if (!std::isfinite(mu)) throw PreconditionError("mu must be finite");
}

PulseSet stirap_pulses(const StirapParams& st) {
    st.validate();
    auto gauss = [st](double x) { return std::exp(-(x / st.tc) * (x / st.tc)); };
    PulseSet ps;
    ps.convention = PulseConvention::Symmetric;
    ps.omega1 = [st, gauss](double s) { return -st.omega0 * gauss(s - st.t0 - 0.5) * std::sin(st.mu); };
    ps.omega2 = [st, gauss](double s) {
        return st.omega0 * gauss(s + st.t0 - 0.5) + st.omega0 * gauss(s - st.t0 - 0.5) * std::cos(st.mu);
    };
    return ps;
}

std::size_t parameter_count(FitModel m) { return m == FitModel::PiecewiseSine ? 7 : 6; }

double evaluate_model(FitModel m, const Eigen::VectorXd& p, double s) {
    if (m == FitModel::PiecewiseSine) {
        return s <= p(6) ? p(0) * std::sin(p(1) * s - p(2)) : p(3) * std::sin(p(4) * s - p(5));
    }
    const double u = (s - p(1)) / p(2), v = (s - p(4)) / p(5);
    return p(0) * std::exp(-u * u) + p(3) * std::exp(-v * v);
}

Waveform model_waveform(FitModel m, Eigen::VectorXd params) {
    if (static_cast<std::size_t>(params.size()) != parameter_count(m))
        throw PreconditionError("wrong parameter count for model");
    return [m, params = std::move(params)](double s) { return evaluate_model(m, params, s); };
}

std::vector<Sample> sample_waveform(const Waveform& w, int points) {
    if (points < 2) throw PreconditionError("need at least two sample points");
    std::vector<Sample> out(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) {
        const double s = static_cast<double>(k) / (points - 1);
        out[static_cast<std::size_t>(k)] = {s, w(s)};
    }
    return out;
}

namespace {

// Amplitude, frequency, phase of a sin(w s - p) best matching the samples in
// [lo, hi], scanning w and solving the linear problem in (sin ws, cos ws).
std::array<double, 3> sine_guess(const std::vector<Sample>& samples, double lo, double hi) {
    std::array<double, 3> best{0.0, 1.0, 0.0};
    double best_err = std::numeric_limits<double>::infinity();
    for (double w = 0.5; w <= 20.0 + 1e-12; w += 0.05) {
        double ss = 0, sc = 0, cc = 0, ys = 0, yc = 0, yy = 0;
        for (const auto& [s, y] : samples) {
            if (s < lo || s > hi) continue;
            const double sn = std::sin(w * s), cs = std::cos(w * s);
            ss += sn * sn;
            sc += sn * cs;
            cc += cs * cs;
            ys += y * sn;
            yc += y * cs;
            yy += y * y;
        }
        const double det = ss * cc - sc * sc;
        if (std::abs(det) < 1e-12) continue;
        const double ps = (ys * cc - yc * sc) / det;
        const double qc = (yc * ss - ys * sc) / det;
        const double err = yy - ps * ys - qc * yc;
        if (err < best_err) {
            best_err = err;
            // a sin(ws - phi) = a cos(phi) sin(ws) - a sin(phi) cos(ws)
            best = {std::hypot(ps, qc), w, std::atan2(-qc, ps)};
        }
    }
    return best;
}

std::array<double, 3> gaussian_guess(const std::vector<Sample>& samples,
                                     const std::vector<double>& y) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < y.size(); ++i)
        if (std::abs(y[i]) > std::abs(y[k])) k = i;
    const double peak = y[k];
    const double half = 0.5 * std::abs(peak);
    std::size_t left = k, right = k;
    while (left > 0 && std::abs(y[left]) > half) --left;
    while (right + 1 < y.size() && std::abs(y[right]) > half) ++right;
    const double span = 0.5 * (samples[right].s - samples[left].s);
    const double width = std::max(span, 1e-3) / std::sqrt(std::log(2.0));
    return {peak, samples[k].s, width};
}

void validate_samples(const std::vector<Sample>& samples, std::size_t nparams) {
    if (samples.size() < 10 * nparams) {
        std::ostringstream os;
        os << "fit needs >= " << 10 * nparams << " samples, got " << samples.size();
        throw PreconditionError(os.str());
    }
    for (const auto& [s, y] : samples) {
        if (!(s >= 0.0 && s <= 1.0)) throw PreconditionError("fit samples must lie on [0, 1]");
        if (!std::isfinite(y)) throw PreconditionError("fit samples must be finite");
    }
}

FitResult fit_fixed(const std::vector<Sample>& samples, FitModel model, const Eigen::VectorXd& init,
                    const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                    const LsqOptions& options) {
    const auto m = static_cast<Eigen::Index>(samples.size());
    const bool sine = model == FitModel::PiecewiseSine;
    const double breakpoint = sine ? init(6) : 0.0;

    ResidualFn fn = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd& J) {
        r.resize(m);
        J.setZero(m, 6);
        for (Eigen::Index i = 0; i < m; ++i) {
            const double s = samples[static_cast<std::size_t>(i)].s;
            const double y = samples[static_cast<std::size_t>(i)].value;
            if (sine) {
                const int o = s <= breakpoint ? 0 : 3;
                const double arg = p(o + 1) * s - p(o + 2);
                const double sn = std::sin(arg), cs = std::cos(arg);
                r(i) = p(o) * sn - y;
                J(i, o) = sn;
                J(i, o + 1) = p(o) * cs * s;
                J(i, o + 2) = -p(o) * cs;
            } else {
                double value = 0.0;
                for (int o : {0, 3}) {
                    const double u = (s - p(o + 1)) / p(o + 2);
                    const double g = std::exp(-u * u);
                    value += p(o) * g;
                    J(i, o) = g;
                    J(i, o + 1) = p(o) * g * 2.0 * u / p(o + 2);
                    J(i, o + 2) = p(o) * g * 2.0 * u * u / p(o + 2);
                }
                r(i) = value - y;
            }
        }
    };

    const LsqResult lsq = levenberg_marquardt(fn, init.head(6), lower.head(6), upper.head(6), options);
    FitResult out;
    out.params = init;
    out.params.head(6) = lsq.params;
    out.residual_rms = std::sqrt(2.0 * lsq.cost / static_cast<double>(m));
    out.iterations = lsq.iterations;
    out.converged = lsq.converged;
    return out;
}

}  // namespace

Eigen::VectorXd initial_guess(FitModel m, const std::vector<Sample>& samples, double breakpoint) {
    if (samples.empty()) throw PreconditionError("no samples");
    if (m == FitModel::PiecewiseSine) {
        const auto a = sine_guess(samples, 0.0, breakpoint);
        const auto b = sine_guess(samples, breakpoint, 1.0);
        return (Eigen::VectorXd(7) << a[0], a[1], a[2], b[0], b[1], b[2], breakpoint).finished();
    }
    std::vector<double> y(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) y[i] = samples[i].value;
    const auto first = gaussian_guess(samples, y);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double u = (samples[i].s - first[1]) / first[2];
        y[i] -= first[0] * std::exp(-u * u);
    }
    const auto second = gaussian_guess(samples, y);
    Eigen::VectorXd p(6);
    p << first[0], first[1], first[2], second[0], second[1], second[2];
    return p;
}

FitResult fit_pulse(const std::vector<Sample>& samples, const FitSpec& spec) {
    const auto n = parameter_count(spec.model);
    validate_samples(samples, n);
    if (static_cast<std::size_t>(spec.initial.size()) != n)
        throw PreconditionError("initial guess has the wrong parameter count");
    const bool sine = spec.model == FitModel::PiecewiseSine;

    Eigen::VectorXd lower = spec.lower, upper = spec.upper;
    if (lower.size() == 0) {
        lower = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), -1e6);
        upper = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1e6);
        if (!sine) lower(2) = lower(5) = 1e-6;
    }
    if (static_cast<std::size_t>(lower.size()) != n || static_cast<std::size_t>(upper.size()) != n)
        throw PreconditionError("bounds have the wrong parameter count");
    if (!sine && (lower(2) <= 0.0 || lower(5) <= 0.0))
        throw PreconditionError("Gaussian widths must be bounded away from zero");
    if (sine && !(spec.initial(6) > 0.0 && spec.initial(6) < 1.0))
        throw PreconditionError("breakpoint must lie in (0, 1)");

    if (!sine || !spec.refine_breakpoint)
        return fit_fixed(samples, spec.model, spec.initial, lower, upper, spec.options);

    // The loss is piecewise constant in the breakpoint between samples, so scan the
    // midpoints and keep the best inner fit.
    std::optional<FitResult> best;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const double b = 0.5 * (samples[i].s + samples[i + 1].s);
        if (b < spec.scan_lo || b > spec.scan_hi) continue;
        Eigen::VectorXd init = initial_guess(FitModel::PiecewiseSine, samples, b);
        try {
            FitResult r = fit_fixed(samples, spec.model, init, lower, upper, spec.options);
            if (!best || r.residual_rms < best->residual_rms) best = std::move(r);
        } catch (const FitError&) {
            continue;
        }
    }
    if (!best) throw FitError("no breakpoint in the scan range produced a fit", spec.initial);
    return *best;
}

FittedPulses fit_exact_pulses(const ScheduleParams& p, int points) {
    const PulseSet exact = exact_pulses(p);
    const auto s1 = sample_waveform(exact.omega1, points);
    const auto s2 = sample_waveform(exact.omega2, points);

    FitSpec leg1;
    leg1.model = FitModel::PiecewiseSine;
    leg1.initial = initial_guess(FitModel::PiecewiseSine, s1, 0.5);
    leg1.refine_breakpoint = true;
    FitSpec leg2;
    leg2.model = FitModel::GaussianSum;
    leg2.initial = initial_guess(FitModel::GaussianSum, s2);

    FittedPulses out;
    out.omega1 = fit_pulse(s1, leg1);
    out.omega2 = fit_pulse(s2, leg2);
    out.pulses.omega1 = model_waveform(FitModel::PiecewiseSine, out.omega1.params);
    out.pulses.omega2 = model_waveform(FitModel::GaussianSum, out.omega2.params);
    out.pulses.breakpoints = {out.omega1.params(6)};
    return out;
}

}  // namespace reveng
