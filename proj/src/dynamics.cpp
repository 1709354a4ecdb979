#include "reveng/dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace reveng {

Mat HamiltonianSource::operator()(double s) const {
    if (at) return at(s);
    if (at3) return Mat(at3(s));
    throw PreconditionError("Hamiltonian source has no evaluator");
}

Mat3 build_pulse_H(const PulseSet& ps, double s) {
    const double w1 = ps.omega1(s), w2 = ps.omega2(s);
    Mat3 h = Mat3::Zero();
    switch (ps.convention) {
        case PulseConvention::Antisymmetric:
            h(1, 0) = I * w1;
            h(0, 1) = -I * w1;
            h(1, 2) = I * w2;
            h(2, 1) = -I * w2;
            return h;
        case PulseConvention::Symmetric:
            h(0, 1) = h(1, 0) = w1;
            h(1, 2) = h(2, 1) = w2;
            return h;
    }
    throw StructuralError("unknown pulse convention");
}

HamiltonianSource pulse_source(PulseSet ps, double duration) {
    if (!ps.omega1 || !ps.omega2) throw PreconditionError("pulse set has a missing waveform");
    if (!(duration > 0)) throw PreconditionError("integration window must be > 0");
    HamiltonianSource src;
    src.dim = 3;
    src.breakpoints = ps.breakpoints;
    src.duration = duration;
    src.at3 = [ps = std::move(ps)](double s) { return build_pulse_H(ps, s); };
    return src;
}

HamiltonianSource engineered_source(EngineeredHamiltonian h) {
    HamiltonianSource src;
    src.dim = h.dim();
    src.at = [h = std::move(h)](double s) { return h(s); };
    return src;
}

HamiltonianSource zero_source(int dim) {
    HamiltonianSource src;
    src.dim = dim;
    src.at = [dim](double) -> Mat { return Mat::Zero(dim, dim); };
    return src;
}

void LindbladParams::validate() const {
    if (!(gamma1 >= 0) || !(gamma2 >= 0)) throw PreconditionError("decay rates must be >= 0");
}

double SimResult::max_population(int level) const {
    double m = 0.0;
    for (const auto& p : populations) m = std::max(m, p(level));
    return m;
}

Vec target_state(double mu) {
    Vec t = Vec::Zero(3);
    t(0) = std::cos(mu);
    t(2) = std::sin(mu);
    return t;
}

double fidelity(const Vec& target, const Vec& psi) { return std::norm(target.dot(psi)); }

double fidelity(const Vec& target, const Mat& rho) { return (target.adjoint() * rho * target)(0, 0).real(); }

Mat lindblad_rhs(const Mat& h, const Mat& rho, const std::vector<Mat>& collapse) {
    Mat out = I * (rho * h - h * rho);
    for (const auto& l : collapse) {
        const Mat ldl = l.adjoint() * l;
        out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
    }
    return out;
}

namespace {

struct Node {
    double s;
    bool breakpoint;
    bool record;
};

std::vector<Node> build_nodes(const HamiltonianSource& h, const GridSpec& g) {
    if (g.steps < 1) throw PreconditionError("steps must be >= 1");
    if (g.samples < 2 || g.steps % (g.samples - 1) != 0) {
        std::ostringstream os;
        os << "samples-1 (" << g.samples - 1 << ") must divide steps (" << g.steps << ")";
        throw PreconditionError(os.str());
    }
    if (!(h.duration > 0)) throw PreconditionError("integration window must be > 0");
    const int every = g.steps / (g.samples - 1);
    std::vector<Node> nodes;
    nodes.reserve(static_cast<std::size_t>(g.steps) + 1 + h.breakpoints.size());
    for (int k = 0; k <= g.steps; ++k)
        nodes.push_back({h.duration * k / g.steps, false, k % every == 0});
    const double snap = 1e-12 * h.duration;
    for (double b : h.breakpoints) {
        if (!(b > 0.0 && b < h.duration)) continue;
        auto it = std::lower_bound(nodes.begin(), nodes.end(), b,
                                   [](const Node& n, double v) { return n.s < v; });
        if (it != nodes.end() && std::abs(it->s - b) <= snap) {
            it->s = b;
            it->breakpoint = true;
        } else if (it != nodes.begin() && std::abs((it - 1)->s - b) <= snap) {
            (it - 1)->s = b;
            (it - 1)->breakpoint = true;
        } else {
            nodes.insert(it, Node{b, true, false});
        }
    }
    return nodes;
}

// One-sided evaluation times so a waveform jump at a breakpoint is never sampled
// from the wrong side. The offset is far above one ulp because wrapped waveforms
// (stretched, rescaled) recompute s and would round a one-ulp nudge away.
struct StepTimes {
    double start, mid, end;
};

StepTimes step_times(const Node& a, const Node& b) {
    const double nudge = std::min(1e-12 * std::max(1.0, std::abs(b.s)), 0.25 * (b.s - a.s));
    return {a.breakpoint ? a.s + nudge : a.s, 0.5 * (a.s + b.s), b.breakpoint ? b.s - nudge : b.s};
}

template <class M, class V, class HF>
void integrate_pure(const std::vector<Node>& nodes, const HF& hf, V psi, SimResult& out,
                    const Vec& target) {
    auto f = [&](double s, const V& p) -> V { return (-I) * (hf(s) * p); };
    auto record = [&](double s, const V& p) {
        const double norm2 = p.squaredNorm();
        if (std::abs(norm2 - 1.0) > 1e-6) {
            std::ostringstream os;
            os << "norm drift " << std::abs(norm2 - 1.0) << " at s=" << s << "; increase steps";
            throw IntegrationQualityError(os.str());
        }
        out.grid.push_back(s);
        out.states.emplace_back(p);
        out.populations.emplace_back(p.cwiseAbs2());
    };
    if (nodes.front().record) record(nodes.front().s, psi);
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        const double dt = nodes[k + 1].s - nodes[k].s;
        const auto t = step_times(nodes[k], nodes[k + 1]);
        const V k1 = f(t.start, psi);
        const V k2 = f(t.mid, psi + 0.5 * dt * k1);
        const V k3 = f(t.mid, psi + 0.5 * dt * k2);
        const V k4 = f(t.end, psi + dt * k3);
        psi += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (nodes[k + 1].record) record(nodes[k + 1].s, psi);
    }
    out.fidelity = fidelity(target, Vec(psi));
}

template <class M, class HF>
void integrate_lindblad(const std::vector<Node>& nodes, const HF& hf, M rho,
                        const std::vector<M>& collapse, SimResult& out, const Vec& target) {
    std::vector<M> ldl;
    for (const auto& l : collapse) ldl.push_back(l.adjoint() * l);
    auto f = [&](double s, const M& r) -> M {
        const M h = hf(s);
        M d = I * (r * h - h * r);
        for (std::size_t i = 0; i < collapse.size(); ++i)
            d += collapse[i] * r * collapse[i].adjoint() - 0.5 * (ldl[i] * r + r * ldl[i]);
        return d;
    };
    auto record = [&](double s, const M& r) {
        const double drift = std::abs(r.trace() - 1.0);
        if (drift > 1e-6) {
            std::ostringstream os;
            os << "trace drift " << drift << " at s=" << s << "; increase steps";
            throw IntegrationQualityError(os.str());
        }
        out.grid.push_back(s);
        out.densities.emplace_back(r);
        out.populations.emplace_back(r.diagonal().real());
        out.purity.push_back((r * r).trace().real());
    };
    if (nodes.front().record) record(nodes.front().s, rho);
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        const double dt = nodes[k + 1].s - nodes[k].s;
        const auto t = step_times(nodes[k], nodes[k + 1]);
        const M k1 = f(t.start, rho);
        const M k2 = f(t.mid, rho + 0.5 * dt * k1);
        const M k3 = f(t.mid, rho + 0.5 * dt * k2);
        const M k4 = f(t.end, rho + dt * k3);
        rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (nodes[k + 1].record) record(nodes[k + 1].s, rho);
    }
    out.fidelity = fidelity(target, Mat(rho));
}

}  // namespace

SimResult evolve_pure(const HamiltonianSource& h, const Vec& psi0, const Vec& target,
                      const GridSpec& grid) {
    if (psi0.size() != h.dim || target.size() != h.dim)
        throw PreconditionError("state dimension does not match the Hamiltonian");
    if (std::abs(psi0.squaredNorm() - 1.0) > 1e-10) throw PreconditionError("psi0 must be normalized");
    const auto nodes = build_nodes(h, grid);
    SimResult out;
    if (h.dim == 3 && h.at3) {
        integrate_pure<Mat3, Vec3>(nodes, h.at3, Vec3(psi0), out, target);
    } else {
        auto hf = [&h](double s) { return h(s); };
        integrate_pure<Mat, Vec>(nodes, hf, psi0, out, target);
    }
    return out;
}

SimResult evolve_lindblad(const HamiltonianSource& h, const Mat& rho0, const LindbladParams& lp,
                          const Vec& target, const GridSpec& grid) {
    lp.validate();
    if (h.dim != 3 || rho0.rows() != 3 || rho0.cols() != 3 || target.size() != 3)
        throw PreconditionError("Lindblad evolution is defined for the three-level system");
    if (hermiticity_defect(rho0) > 1e-12 || std::abs(rho0.trace() - 1.0) > 1e-10)
        throw PreconditionError("rho0 must be Hermitian with unit trace");
    if (Eigen::SelfAdjointEigenSolver<Mat>(rho0).eigenvalues().minCoeff() < -1e-12)
        throw PreconditionError("rho0 must be positive semidefinite");

    const auto nodes = build_nodes(h, grid);
    Mat3 l1 = Mat3::Zero(), l2 = Mat3::Zero();
    l1(0, 1) = std::sqrt(lp.gamma1);
    l2(1, 2) = std::sqrt(lp.gamma2);
    SimResult out;
    if (h.at3) {
        integrate_lindblad<Mat3>(nodes, h.at3, Mat3(rho0), {l1, l2}, out, target);
    } else {
        auto hf = [&h](double s) { return h(s); };
        integrate_lindblad<Mat>(nodes, hf, rho0, {Mat(l1), Mat(l2)}, out, target);
    }
    return out;
}

}  // namespace reveng
