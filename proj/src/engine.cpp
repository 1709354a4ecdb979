#include "reveng/engine.hpp"

#include "reveng/quadrature.hpp"

#include <cmath>
#include <memory>
#include <sstream>

namespace reveng {

EngineeredHamiltonian::EngineeredHamiltonian(int dim, Fn eval) : dim_(dim), eval_(std::move(eval)) {
    if (!eval_) throw PreconditionError("Hamiltonian needs an evaluator");
}

cplx EngineeredHamiltonian::coupling(int m, int n, double s) const {
    if (m < 0 || n < 0 || m >= dim_ || n >= dim_) throw PreconditionError("level index out of range");
    return eval_(s)(m, n);
}

EngineeredHamiltonian extract_H(const PropagatorDesign& design) {
    return EngineeredHamiltonian(design.dim(), [design](double s) {
        const int d = design.dim();
        const int a = design.anchored();
        const Mat phi = design.frame().basis(s);
        const Mat dphi = design.frame().derivative(s);
        const Mat lam = design.mixing().value(s);
        const Mat dlam = design.mixing().derivative(s);
        const auto free = phi.rightCols(d - a);
        Mat h = I * dphi * phi.adjoint();
        h += I * free * (dlam * lam.adjoint()) * free.adjoint();
        return h;
    });
}

EngineeredHamiltonian rydberg_H_theta(const ThreeLevelControls& c, const ScheduleParams& p) {
    const MovingFrame frame = rydberg_frame(p);
    return EngineeredHamiltonian(3, [frame, c](double s) {
        const Mat phi = frame.basis(s);
        const Mat dphi = frame.derivative(s);
        const auto [l, ld] = c.lambda(s);
        const auto [th, thd] = c.theta(s);
        const cplx e = std::exp(I * th);
        const double sl = std::sin(l), cl = std::cos(l);
        const Mat p22 = phi.col(1) * phi.col(1).adjoint();
        const Mat p33 = phi.col(2) * phi.col(2).adjoint();
        const Mat p23 = phi.col(1) * phi.col(2).adjoint();
        const Mat p32 = phi.col(2) * phi.col(1).adjoint();
        Mat h = I * dphi * phi.adjoint();
        h += I * ld * (e * p23 - std::conj(e) * p32);
        h -= thd * sl * cl * (e * p23 + std::conj(e) * p32);
        h -= thd * sl * sl * (p22 - p33);
        return h;
    });
}

ThreeLevelControls eliminate_13(const ScheduleParams& p) {
    p.validate();
    if (p.A >= kPi)
        throw PreconditionError("A must be < pi: sin(beta) vanishes inside (0, T) otherwise");
    // alpha' ~ sin^4(pi s) while sin(beta) ~ A sin^2(pi s), so the rate has limit 0 at
    // both ends; exact zeros of sin(beta) only occur at s = 0, 1.
    auto rate = [p](double s) {
        const double sb = std::sin(schedule_beta(p, s).value);
        if (sb == 0.0) return 0.0;
        return -schedule_alpha(p, s).rate / sb;
    };
    auto table = std::make_shared<const HermiteTable>(cumulative_integral(rate, 0.0, 1.0, 2048, 1e-13));
    ThreeLevelControls c;
    c.lambda = [table, rate](double s) { return Schedule{(*table)(s), rate(s)}; };
    c.theta = [](double) { return Schedule{0.0, 0.0}; };
    return c;
}

PropagatorDesign rydberg_design(const ScheduleParams& p, const ThreeLevelControls& c) {
    return PropagatorDesign(rydberg_frame(p), 1, three_level_mixing(c));
}

ForbiddenCouplingReport forbidden_coupling_report(const EngineeredHamiltonian& h,
                                                  std::vector<LevelPair> pairs, int samples) {
    if (samples < 2) throw PreconditionError("need at least two samples");
    ForbiddenCouplingReport report;
    for (int k = 0; k < samples; ++k) {
        const double s = static_cast<double>(k) / (samples - 1);
        const Mat m = h(s);
        for (const auto& [a, b] : pairs) {
            if (a < 0 || b < 0 || a >= h.dim() || b >= h.dim())
                throw PreconditionError("level index out of range");
            const double v = std::abs(m(a, b));
            if (v > report.max_abs) {
                report.max_abs = v;
                report.worst_time = s;
            }
        }
    }
    report.pairs = std::move(pairs);
    return report;
}

PulsePair pulse_coefficients(const Mat& h) {
    if (h.rows() != 3 || h.cols() != 3) throw StructuralError("expected a 3x3 Hamiltonian");
    constexpr double tol = 1e-10;
    const cplx h21 = h(1, 0), h23 = h(1, 2);
    // Everything but the two antisymmetric legs must vanish.
    Mat rest = h;
    rest(1, 0) -= h21;
    rest(0, 1) += h21;
    rest(1, 2) -= h23;
    rest(2, 1) += h23;
    const double off = std::max({std::abs(h21.real()), std::abs(h23.real()), max_abs(rest)});
    if (off > tol) {
        std::ostringstream os;
        os << "Hamiltonian is not of the form iW1(|2><1|-|1><2|) + iW2(|2><3|-|3><2|) "
           << "(residual " << off << ")";
        throw StructuralError(os.str());
    }
    return {h21.imag(), h23.imag()};
}

PulsePair pulse_coefficients(const EngineeredHamiltonian& h, double s) {
    return pulse_coefficients(h(s));
}

}  // namespace reveng
