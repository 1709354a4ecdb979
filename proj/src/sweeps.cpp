#include "reveng/sweeps.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace reveng {

void DeviationSpec::validate() const {
    for (double v : {d_omega1, d_omega2, d_T})
        if (!(v > -1.0 && v < 1.0)) throw PreconditionError("relative deviations must lie in (-1, 1)");
}

std::string to_string(DeviationStrategy s) {
    switch (s) {
        case DeviationStrategy::PulseArea: return "pulse_area";
        case DeviationStrategy::Truncate: return "truncate";
        case DeviationStrategy::Rescale: return "rescale";
    }
    return "?";
}

DeviationStrategy parse_deviation_strategy(const std::string& name) {
    if (name == "pulse_area") return DeviationStrategy::PulseArea;
    if (name == "truncate") return DeviationStrategy::Truncate;
    if (name == "rescale") return DeviationStrategy::Rescale;
    throw PreconditionError("unknown deviation strategy '" + name +
                            "' (expected pulse_area, truncate or rescale)");
}

DeviatedPulses apply_deviation(const PulseSet& ps, const DeviationSpec& d, DeviationStrategy strategy) {
    d.validate();
    const double stretch = 1.0 + d.d_T;
    const double k1 = 1.0 + d.d_omega1, k2 = 1.0 + d.d_omega2;
    DeviatedPulses out;
    out.duration = stretch;
    out.pulses.convention = ps.convention;
    switch (strategy) {
        case DeviationStrategy::PulseArea:
        case DeviationStrategy::Rescale: {
            const double amp = strategy == DeviationStrategy::Rescale ? 1.0 / stretch : 1.0;
            out.pulses.omega1 = [w = ps.omega1, k = k1 * amp, stretch](double s) { return k * w(s / stretch); };
            out.pulses.omega2 = [w = ps.omega2, k = k2 * amp, stretch](double s) { return k * w(s / stretch); };
            for (double b : ps.breakpoints) out.pulses.breakpoints.push_back(b * stretch);
            break;
        }
        case DeviationStrategy::Truncate: {
            out.pulses.omega1 = [w = ps.omega1, k1](double s) { return s <= 1.0 ? k1 * w(s) : 0.0; };
            out.pulses.omega2 = [w = ps.omega2, k2](double s) { return s <= 1.0 ? k2 * w(s) : 0.0; };
            out.pulses.breakpoints = ps.breakpoints;
            out.pulses.breakpoints.push_back(1.0);
            break;
        }
    }
    return out;
}

double deviated_fidelity(const SweepSettings& settings, const DeviationSpec& d) {
    const auto dev = apply_deviation(settings.pulses, d, settings.strategy);
    Vec psi0 = Vec::Zero(3);
    psi0(0) = 1.0;
    return evolve_pure(pulse_source(dev.pulses, dev.duration), psi0, target_state(settings.mu),
                       settings.grid)
        .fidelity;
}

std::string to_string(TableId t) {
    switch (t) {
        case TableId::I: return "I";
        case TableId::II: return "II";
        case TableId::III: return "III";
        case TableId::IV: return "IV";
    }
    return "?";
}

TableId parse_table_id(const std::string& name) {
    if (name == "I") return TableId::I;
    if (name == "II") return TableId::II;
    if (name == "III") return TableId::III;
    if (name == "IV") return TableId::IV;
    throw PreconditionError("unknown table '" + name + "' (expected I, II, III or IV)");
}

std::vector<TableRow> table_rows(TableId t) {
    // (first axis, second axis, reference F) in the published row order.
    struct Pair {
        double a, b, f;
    };
    static const std::vector<Pair> t1 = {{.1, .1, .9835},  {.1, 0, .9951},   {0, .1, .9916},
                                         {0, 0, 1.0},      {-.1, 0, .9938},  {0, -.1, .9902},
                                         {-.1, -.1, .9822}, {.1, -.1, .9875}, {-.1, .1, .9887}};
    static const std::vector<Pair> t2 = {{.1, .1, .9855},  {.1, 0, .9951},   {0, .1, .9942},
                                         {0, 0, 1.0},      {-.1, 0, .9938},  {0, -.1, .9855},
                                         {-.1, -.1, .9729}, {.1, -.1, .9879}, {-.1, .1, .9915}};
    static const std::vector<Pair> t3 = {{.1, .1, .9688},  {.1, 0, .9916},   {0, .1, .9942},
                                         {0, 0, 1.0},      {-.1, 0, .9902},  {0, -.1, .9855},
                                         {-.1, -.1, .9588}, {.1, -.1, .9974}, {-.1, .1, .9994}};
    std::vector<TableRow> rows;
    switch (t) {
        case TableId::I:
            for (const auto& p : t1) rows.push_back({{p.a, p.b, 0.0}, p.f, 0.0});
            break;
        case TableId::II:
            for (const auto& p : t2) rows.push_back({{p.a, 0.0, p.b}, p.f, 0.0});
            break;
        case TableId::III:
            for (const auto& p : t3) rows.push_back({{0.0, p.a, p.b}, p.f, 0.0});
            break;
        case TableId::IV:
            rows = {{{-.1, -.1, -.1}, .9469, 0.0}, {{.1, -.1, -.1}, .9607, 0.0},
                    {{-.1, .1, -.1}, .9853, 0.0},  {{-.1, -.1, .1}, .9926, 0.0},
                    {{.1, .1, -.1}, .9990, 0.0},   {{.1, -.1, .1}, .9956, 0.0},
                    {{-.1, .1, .1}, .9713, 0.0},   {{.1, .1, .1}, .9531, 0.0}};
            break;
    }
    return rows;
}

std::vector<TableRow> run_table(TableId t, const SweepSettings& settings) {
    auto rows = table_rows(t);
    parallel_for(rows.size(), settings.threads,
                 [&](std::size_t i) { rows[i].fidelity = deviated_fidelity(settings, rows[i].deviation); });
    return rows;
}

std::vector<StirapPoint> stirap_reference() {
    return {{3.154, .5538, 0.0}, {5, .6263, 0.0},  {10, .8516, 0.0}, {15, .9604, 0.0},
            {20, .9898, 0.0},    {25, .9960, 0.0}, {30, .9992, 0.0}};
}

std::vector<StirapPoint> stirap_scan(const std::vector<double>& omega0_T, const StirapParams& base,
                                     const SweepSettings& settings) {
    const auto ref = stirap_reference();
    std::vector<StirapPoint> out;
    for (double w : omega0_T) {
        StirapPoint p{w, -1.0, 0.0};
        for (const auto& r : ref)
            if (std::abs(r.omega0_T - w) < 1e-12) p.published = r.published;
        out.push_back(p);
    }
    Vec psi0 = Vec::Zero(3);
    psi0(0) = 1.0;
    parallel_for(out.size(), settings.threads, [&](std::size_t i) {
        StirapParams sp = base;
        sp.omega0 = out[i].omega0_T;
        out[i].fidelity =
            evolve_pure(pulse_source(stirap_pulses(sp)), psi0, target_state(sp.mu), settings.grid).fidelity;
    });
    return out;
}

double Axis::at(int i) const {
    if (points <= 1) return min;
    return min + (max - min) * static_cast<double>(i) / (points - 1);
}

std::string to_string(DeviationPair p) {
    switch (p) {
        case DeviationPair::Omega1Omega2: return "omega1_omega2";
        case DeviationPair::Omega1T: return "omega1_T";
        case DeviationPair::Omega2T: return "omega2_T";
    }
    return "?";
}

SweepGrid deviation_grid(DeviationPair pair, int points, double range, const SweepSettings& settings) {
    if (points < 1) throw PreconditionError("grid needs at least one point per axis");
    if (!(range >= 0.0 && range < 1.0)) throw PreconditionError("deviation range must lie in [0, 1)");
    SweepGrid g;
    switch (pair) {
        case DeviationPair::Omega1Omega2:
            g.x = {"d_omega1_rel", -range, range, points};
            g.y = {"d_omega2_rel", -range, range, points};
            break;
        case DeviationPair::Omega1T:
            g.x = {"d_omega1_rel", -range, range, points};
            g.y = {"d_T_rel", -range, range, points};
            break;
        case DeviationPair::Omega2T:
            g.x = {"d_omega2_rel", -range, range, points};
            g.y = {"d_T_rel", -range, range, points};
            break;
    }
    const auto n = static_cast<std::size_t>(points) * static_cast<std::size_t>(points);
    g.values.assign(n, 0.0);
    parallel_for(n, settings.threads, [&](std::size_t k) {
        const int i = static_cast<int>(k) / points, j = static_cast<int>(k) % points;
        const double a = g.x.at(i), b = g.y.at(j);
        DeviationSpec d;
        switch (pair) {
            case DeviationPair::Omega1Omega2: d = {a, b, 0.0}; break;
            case DeviationPair::Omega1T: d = {a, 0.0, b}; break;
            case DeviationPair::Omega2T: d = {0.0, a, b}; break;
        }
        g.values[k] = deviated_fidelity(settings, d);
    });
    return g;
}

SweepGrid decoherence_map(const Axis& gamma1, const Axis& gamma2, double omega0,
                          const SweepSettings& settings) {
    if (gamma1.points < 1 || gamma2.points < 1) throw PreconditionError("axes need at least one point");
    if (gamma1.min < 0 || gamma2.min < 0 || gamma1.max < 0 || gamma2.max < 0)
        throw PreconditionError("decay-rate axes must be nonnegative");
    if (!(omega0 > 0)) throw PreconditionError("reference amplitude must be > 0");
    SweepGrid g{gamma1, gamma2, {}};
    const auto n = static_cast<std::size_t>(gamma1.points) * static_cast<std::size_t>(gamma2.points);
    g.values.assign(n, 0.0);
    Mat rho0 = Mat::Zero(3, 3);
    rho0(0, 0) = 1.0;
    const auto src = pulse_source(settings.pulses);
    const Vec target = target_state(settings.mu);
    parallel_for(n, settings.threads, [&](std::size_t k) {
        const int i = static_cast<int>(k) / gamma2.points, j = static_cast<int>(k) % gamma2.points;
        const LindbladParams lp{gamma1.at(i) * omega0, gamma2.at(j) * omega0};
        g.values[k] = evolve_lindblad(src, rho0, lp, target, settings.grid).fidelity;
    });
    return g;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace reveng
