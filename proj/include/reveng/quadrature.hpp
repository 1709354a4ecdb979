#pragma once

#include <functional>
#include <vector>

namespace reveng {

/// Adaptive Simpson integral of f over [a, b] to absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 50);

/// Piecewise cubic Hermite interpolant on a uniform grid over [lo, hi], built from
/// sampled values and exact derivatives.
class HermiteTable {
public:
    HermiteTable(double lo, double hi, std::vector<double> values, std::vector<double> slopes);

    double operator()(double x) const;
    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    std::size_t nodes() const noexcept { return values_.size(); }

private:
    double lo_, hi_, h_;
    std::vector<double> values_;
    std::vector<double> slopes_;
};

/// Tabulate F(x) = integral_lo^x f on `intervals` uniform cells with adaptive Simpson
/// per cell, interpolated with f as the exact slope.
HermiteTable cumulative_integral(const std::function<double(double)>& f, double lo, double hi,
                                 std::size_t intervals, double tol);

}  // namespace reveng
