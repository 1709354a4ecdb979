#include "reveng/frames.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <memory>
#include <sstream>

namespace reveng {

NonUnitaryError::NonUnitaryError(double time, double deviation)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "non-unitary evolution at s=" << time << " (||UU^+ - 1||_max = " << deviation << ")";
          return os.str();
      }()),
      time_(time),
      deviation_(deviation) {}

void ScheduleParams::validate() const {
    if (!std::isfinite(mu)) throw PreconditionError("mu must be finite");
    if (!(A > 0) || !std::isfinite(A))
        throw PreconditionError("A must be > 0 (A = 0 makes cot(beta) singular everywhere)");
    if (!(T > 0) || !std::isfinite(T)) throw PreconditionError("T must be > 0");
}

namespace {

void check_time(double s) {
    if (!(s >= 0.0 && s <= 1.0)) {
        std::ostringstream os;
        os << "time s=t/T=" << s << " outside [0, 1]";
        throw PreconditionError(os.str());
    }
}

}  // namespace

Schedule schedule_alpha(const ScheduleParams& p, double s) {
    check_time(s);
    const double mu = p.mu;
    const double value = mu * s - 2.0 * mu / (3.0 * kPi) * std::sin(2.0 * kPi * s) +
                         mu / (12.0 * kPi) * std::sin(4.0 * kPi * s);
    const double sn = std::sin(kPi * s);
    const double rate = 8.0 * mu / 3.0 * sn * sn * sn * sn;
    return {value, rate};
}

Schedule schedule_beta(const ScheduleParams& p, double s) {
    check_time(s);
    return {p.A / 2.0 * (1.0 - std::cos(2.0 * kPi * s)), kPi * p.A * std::sin(2.0 * kPi * s)};
}

MovingFrame::MovingFrame(int dim, Fn basis, Fn derivative)
    : dim_(dim), basis_(std::move(basis)), derivative_(std::move(derivative)) {
    if (dim_ < 1) throw PreconditionError("frame dimension must be positive");
    if (!basis_ || !derivative_)
        throw PreconditionError("moving frame needs both basis and derivative suppliers");
}

Mat MovingFrame::basis(double s) const {
    Mat b = basis_(s);
    if (b.rows() != dim_ || b.cols() != dim_) throw StructuralError("frame basis has wrong shape");
    return b;
}

Mat MovingFrame::derivative(double s) const {
    Mat d = derivative_(s);
    if (d.rows() != dim_ || d.cols() != dim_)
        throw StructuralError("frame derivative has wrong shape");
    return d;
}

MovingFrame rydberg_frame(const ScheduleParams& p) {
    p.validate();
    auto basis = [p](double s) {
        const double a = schedule_alpha(p, s).value;
        const double b = schedule_beta(p, s).value;
        const double ca = std::cos(a), sa = std::sin(a), cb = std::cos(b), sb = std::sin(b);
        Mat m(3, 3);
        m << ca * cb, ca * sb, sa,
             sb,      -cb,     0.0,
             sa * cb, sa * sb, -ca;
        return m;
    };
    auto derivative = [p](double s) {
        const auto [a, ad] = schedule_alpha(p, s);
        const auto [b, bd] = schedule_beta(p, s);
        const double ca = std::cos(a), sa = std::sin(a), cb = std::cos(b), sb = std::sin(b);
        Mat m(3, 3);
        m << -sa * ad * cb - ca * sb * bd, -sa * ad * sb + ca * cb * bd, ca * ad,
             cb * bd,                       sb * bd,                     0.0,
             ca * ad * cb - sa * sb * bd,   ca * ad * sb + sa * cb * bd, sa * ad;
        return m;
    };
    return MovingFrame(3, basis, derivative);
}

Mat expm_skew(const Mat& generator, double angle) {
    // K = -i Hm with Hm = iK Hermitian, so exp(aK) = V exp(-i a w) V^+.
    const Mat herm = I * generator;
    Eigen::SelfAdjointEigenSolver<Mat> es(herm);
    const auto& w = es.eigenvalues();
    Vec phases(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k) phases(k) = std::exp(-I * angle * w(k));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

MovingFrame generator_frame(std::vector<GeneratorTerm> terms, Mat initial) {
    const auto dim = static_cast<int>(initial.rows());
    if (initial.cols() != dim) throw PreconditionError("initial frame must be square");
    if (unitarity_defect(initial) > 1e-10) throw PreconditionError("initial frame must be unitary");
    for (const auto& t : terms) {
        if (t.generator.rows() != dim || t.generator.cols() != dim)
            throw PreconditionError("generator shape does not match frame dimension");
        if (max_abs(t.generator + t.generator.adjoint()) > 1e-12)
            throw PreconditionError("frame generators must be anti-Hermitian");
        if (!t.angle) throw PreconditionError("generator term without an angle schedule");
    }
    auto shared = std::make_shared<const std::vector<GeneratorTerm>>(std::move(terms));
    auto init = std::make_shared<const Mat>(std::move(initial));

    auto basis = [shared, init](double s) {
        Mat m = *init;
        for (auto it = shared->rbegin(); it != shared->rend(); ++it)
            m = expm_skew(it->generator, it->angle(s).value) * m;
        return m;
    };
    auto derivative = [shared, init, dim](double s) {
        const auto n = shared->size();
        std::vector<Mat> factors(n);
        std::vector<double> rates(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto sch = (*shared)[i].angle(s);
            factors[i] = expm_skew((*shared)[i].generator, sch.value);
            rates[i] = sch.rate;
        }
        // suffix[i] = E_i ... E_{n-1} Phi0
        std::vector<Mat> suffix(n + 1);
        suffix[n] = *init;
        for (std::size_t i = n; i-- > 0;) suffix[i] = factors[i] * suffix[i + 1];
        Mat d = Mat::Zero(dim, dim);
        Mat prefix = Mat::Identity(dim, dim);
        for (std::size_t i = 0; i < n; ++i) {
            d += rates[i] * prefix * (*shared)[i].generator * suffix[i];
            prefix = prefix * factors[i];
        }
        return d;
    };
    return MovingFrame(dim, basis, derivative);
}

double orthonormality_defect(const MovingFrame& f, double s) {
    const Mat b = f.basis(s);
    return max_abs(b.adjoint() * b - Mat::Identity(f.dim(), f.dim()));
}

double completeness_defect(const MovingFrame& f, double s) {
    const Mat b = f.basis(s);
    Mat sum = Mat::Zero(f.dim(), f.dim());
    for (int n = 0; n < f.dim(); ++n) sum += b.col(n) * b.col(n).adjoint();
    return max_abs(sum - Mat::Identity(f.dim(), f.dim()));
}

}  // namespace reveng
