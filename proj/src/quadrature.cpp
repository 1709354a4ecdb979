#include "reveng/quadrature.hpp"

#include "reveng/types.hpp"

#include <algorithm>
#include <cmath>

namespace reveng {

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

HermiteTable::HermiteTable(double lo, double hi, std::vector<double> values,
                           std::vector<double> slopes)
    : lo_(lo), hi_(hi), values_(std::move(values)), slopes_(std::move(slopes)) {
    if (values_.size() < 2 || values_.size() != slopes_.size() || !(hi > lo))
        throw PreconditionError("Hermite table needs >= 2 nodes and matching slopes");
    h_ = (hi_ - lo_) / static_cast<double>(values_.size() - 1);
}

double HermiteTable::operator()(double x) const {
    const double u = (x - lo_) / h_;
    const auto last = values_.size() - 2;
    const auto k = static_cast<std::size_t>(std::clamp(std::floor(u), 0.0, static_cast<double>(last)));
    const double t = u - static_cast<double>(k);
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * values_[k] + h10 * h_ * slopes_[k] + h01 * values_[k + 1] +
           h11 * h_ * slopes_[k + 1];
}

HermiteTable cumulative_integral(const std::function<double(double)>& f, double lo, double hi,
                                 std::size_t intervals, double tol) {
    if (intervals < 1) throw PreconditionError("need at least one interval");
    const double h = (hi - lo) / static_cast<double>(intervals);
    std::vector<double> values(intervals + 1), slopes(intervals + 1);
    values[0] = 0.0;
    slopes[0] = f(lo);
    for (std::size_t k = 0; k < intervals; ++k) {
        const double a = lo + h * static_cast<double>(k);
        const double b = k + 1 == intervals ? hi : a + h;
        values[k + 1] = values[k] + adaptive_simpson(f, a, b, tol);
        slopes[k + 1] = f(b);
    }
    return HermiteTable(lo, hi, std::move(values), std::move(slopes));
}

}  // namespace reveng
