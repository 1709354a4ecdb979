#pragma once

#include "reveng/frames.hpp"

#include <functional>

namespace reveng {

/// Unitary (D-s)x(D-s) block Lambda(s) of coefficients lambda_mn(s) mixing the
/// non-anchored frame states, with its derivative. Lambda(0) must be the identity.
class MixingBlock {
public:
    using Fn = std::function<Mat(double)>;

    MixingBlock(int size, Fn value, Fn derivative);

    int size() const noexcept { return size_; }
    /// Lambda(s); throws NonUnitaryError if ||Lambda Lambda^+ - 1||_max > 1e-10.
    Mat value(double s) const;
    Mat derivative(double s) const;

    /// Block that stays equal to the identity forever.
    static MixingBlock identity(int size);
    /// Block fixed at a constant unitary (derivative zero).
    static MixingBlock constant(const Mat& value);

private:
    int size_;
    Fn value_;
    Fn derivative_;
};

/// Designed evolution operator
///   U(s) = sum_{j<s} |phi_j(s)><phi_j(0)| + sum_{m,n>=s} Lambda_mn(s) |phi_m(s)><phi_n(0)|
/// where the first `anchored` frame states are transported without mixing.
class PropagatorDesign {
public:
    PropagatorDesign(MovingFrame frame, int anchored, MixingBlock mixing);

    const MovingFrame& frame() const noexcept { return frame_; }
    int anchored() const noexcept { return anchored_; }
    const MixingBlock& mixing() const noexcept { return mixing_; }
    int dim() const noexcept { return frame_.dim(); }

private:
    MovingFrame frame_;
    int anchored_;
    MixingBlock mixing_;
};

/// lambda(s), theta(s) and their s-derivatives for the three-level operator.
struct ThreeLevelControls {
    std::function<Schedule(double)> lambda;
    std::function<Schedule(double)> theta;
};

/// Unitary D x D matrix U(s) for the design.
Mat build_U(const PropagatorDesign& design, double s);

/// Closed-form three-level operator
///   U = |phi1(s)><phi1(0)| + cos l (|phi2(s)><phi2(0)| + |phi3(s)><phi3(0)|)
///       + sin l (e^{i th}|phi2(s)><phi3(0)| - e^{-i th}|phi3(s)><phi2(0)|)
Mat three_level_U(const MovingFrame& frame, const ThreeLevelControls& c, double s);

/// The 2x2 mixing block [[cos l, e^{i th} sin l], [-e^{-i th} sin l, cos l]] for the
/// three-level controls, so three_level_U can be routed through build_U.
MixingBlock three_level_mixing(const ThreeLevelControls& c);

}  // namespace reveng
