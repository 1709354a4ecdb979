#include "reveng/propagator.hpp"

#include <cmath>
#include <sstream>

namespace reveng {

MixingBlock::MixingBlock(int size, Fn value, Fn derivative)
    : size_(size), value_(std::move(value)), derivative_(std::move(derivative)) {
    if (size_ < 1) throw PreconditionError("mixing block size must be positive");
    if (!value_ || !derivative_)
        throw PreconditionError("mixing block needs both value and derivative suppliers");
    const Mat at0 = value_(0.0);
    if (at0.rows() != size_ || at0.cols() != size_)
        throw PreconditionError("mixing block has wrong shape");
    const double dev = max_abs(at0 - Mat::Identity(size_, size_));
    if (dev > 1e-10) {
        std::ostringstream os;
        os << "mixing block must equal the identity at s=0 (deviation " << dev << ")";
        throw PreconditionError(os.str());
    }
}

Mat MixingBlock::value(double s) const {
    Mat v = value_(s);
    if (v.rows() != size_ || v.cols() != size_) throw StructuralError("mixing block has wrong shape");
    const double dev = unitarity_defect(v);
    if (dev > 1e-10) throw NonUnitaryError(s, dev);
    return v;
}

Mat MixingBlock::derivative(double s) const {
    Mat d = derivative_(s);
    if (d.rows() != size_ || d.cols() != size_)
        throw StructuralError("mixing block derivative has wrong shape");
    return d;
}

MixingBlock MixingBlock::identity(int size) {
    return MixingBlock(
        size, [size](double) -> Mat { return Mat::Identity(size, size); },
        [size](double) -> Mat { return Mat::Zero(size, size); });
}

MixingBlock MixingBlock::constant(const Mat& value) {
    const auto n = static_cast<int>(value.rows());
    return MixingBlock(
        n, [value](double) { return value; }, [n](double) -> Mat { return Mat::Zero(n, n); });
}

PropagatorDesign::PropagatorDesign(MovingFrame frame, int anchored, MixingBlock mixing)
    : frame_(std::move(frame)), anchored_(anchored), mixing_(std::move(mixing)) {
    const int d = frame_.dim();
    if (anchored_ < 1 || anchored_ > d - 2) {
        std::ostringstream os;
        os << "anchored count s=" << anchored_ << " outside 1 <= s <= D-2 (D=" << d << ")";
        throw PreconditionError(os.str());
    }
    if (mixing_.size() != d - anchored_)
        throw PreconditionError("mixing block size must equal D - anchored");
}

Mat build_U(const PropagatorDesign& design, double s) {
    const int d = design.dim();
    const int a = design.anchored();
    const Mat now = design.frame().basis(s);
    const Mat start = design.frame().basis(0.0);
    Mat coeffs = Mat::Identity(d, d);
    coeffs.bottomRightCorner(d - a, d - a) = design.mixing().value(s);
    Mat u = now * coeffs * start.adjoint();
    const double dev = unitarity_defect(u);
    if (dev > 1e-10) throw NonUnitaryError(s, dev);
    return u;
}

Mat three_level_U(const MovingFrame& frame, const ThreeLevelControls& c, double s) {
    if (frame.dim() != 3) throw PreconditionError("three_level_U needs a 3-dimensional frame");
    const Mat now = frame.basis(s);
    const Mat start = frame.basis(0.0);
    const double l = c.lambda(s).value;
    const double th = c.theta(s).value;
    const cplx e = std::exp(I * th);
    auto ket_bra = [&](int m, int n) -> Mat { return now.col(m) * start.col(n).adjoint(); };
    Mat u = ket_bra(0, 0) + std::cos(l) * (ket_bra(1, 1) + ket_bra(2, 2)) +
            std::sin(l) * (e * ket_bra(1, 2) - std::conj(e) * ket_bra(2, 1));
    const double dev = unitarity_defect(u);
    if (dev > 1e-10) throw NonUnitaryError(s, dev);
    return u;
}

MixingBlock three_level_mixing(const ThreeLevelControls& c) {
    auto value = [c](double s) {
        const double l = c.lambda(s).value;
        const cplx e = std::exp(I * c.theta(s).value);
        Mat m(2, 2);
        m << std::cos(l), e * std::sin(l), -std::conj(e) * std::sin(l), std::cos(l);
        return m;
    };
    auto derivative = [c](double s) {
        const auto [l, ld] = c.lambda(s);
        const auto [th, thd] = c.theta(s);
        const cplx e = std::exp(I * th);
        const double cl = std::cos(l), sl = std::sin(l);
        Mat m(2, 2);
        m << -sl * ld, e * (I * thd * sl + cl * ld),
             -std::conj(e) * (-I * thd * sl + cl * ld), -sl * ld;
        return m;
    };
    return MixingBlock(2, value, derivative);
}

}  // namespace reveng
