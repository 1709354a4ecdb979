#pragma once

#include "reveng/propagator.hpp"

#include <cmath>
#include <random>

namespace testing_support {

using reveng::Mat;

// Random anti-Hermitian n x n matrix.
inline Mat random_skew(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = {g(rng), g(rng)};
    return 0.5 * (m - m.adjoint());
}

// A smooth angle schedule a(s) = c1 sin(w s + p) + c2 s^2 with its rate.
inline std::function<reveng::Schedule(double)> random_angle(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const double c1 = u(rng), w = 1.0 + std::abs(u(rng)) * 2, p = u(rng), c2 = u(rng);
    return [=](double s) {
        return reveng::Schedule{c1 * std::sin(w * s + p) + c2 * s * s, c1 * w * std::cos(w * s + p) + 2 * c2 * s};
    };
}

// D-dimensional frame built from three random generator factors and a random unitary start.
inline reveng::MovingFrame random_frame(int dim, std::mt19937_64& rng) {
    std::vector<reveng::GeneratorTerm> terms;
    for (int k = 0; k < 3; ++k) terms.push_back({random_angle(rng), random_skew(dim, rng)});
    return reveng::generator_frame(std::move(terms), reveng::expm_skew(random_skew(dim, rng), 1.0));
}

// Lambda(s) = exp(a(s) K) with a(0) = 0, so Lambda(0) = 1.
inline reveng::MixingBlock random_mixing(int n, std::mt19937_64& rng) {
    const Mat k = random_skew(n, rng);
    auto a = random_angle(rng);
    const double a0 = a(0.0).value;
    auto value = [k, a, a0](double s) { return reveng::expm_skew(k, a(s).value - a0); };
    auto deriv = [k, a, a0](double s) { return Mat(a(s).rate * k * reveng::expm_skew(k, a(s).value - a0)); };
    return reveng::MixingBlock(n, value, deriv);
}

}  // namespace testing_support
