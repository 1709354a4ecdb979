#include "reveng/sweeps.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>

using namespace reveng;

namespace {

SweepSettings fast(PulseSet ps = published_fitted_pulses()) {
    SweepSettings s;
    s.pulses = std::move(ps);
    s.grid = {4000, 2};
    return s;
}

}  // namespace

TEST_CASE("zero deviation is the identity transform") {
    const auto ps = published_fitted_pulses();
    const auto dev = apply_deviation(ps, {});
    CHECK(dev.duration == 1.0);
    for (double s : {0.0, 0.3, 0.534, 0.9}) {
        CHECK(dev.pulses.omega1(s) == ps.omega1(s));
        CHECK(dev.pulses.omega2(s) == ps.omega2(s));
    }
    CHECK(std::abs(deviated_fidelity(fast(exact_pulses({})), {}) - 1.0) < 1e-6);
    CHECK(std::abs(deviated_fidelity(fast(), {}) - 1.0) < 1e-3);
}

TEST_CASE("deviations outside (-1, 1) are rejected") {
    CHECK_THROWS_AS(apply_deviation(published_fitted_pulses(), {1.0, 0.0, 0.0}), PreconditionError);
    CHECK_THROWS_AS(apply_deviation(published_fitted_pulses(), {0.0, 0.0, -1.0}), PreconditionError);
}

TEST_CASE("pulse-area strategy: a longer window equals both amplitudes scaled") {
    // the two runs use different step sizes, so integrate finely
    auto s = fast();
    s.grid = {20000, 2};
    for (double d : {-0.1, 0.05, 0.1})
        CHECK(std::abs(deviated_fidelity(s, {0.0, 0.0, d}) - deviated_fidelity(s, {d, d, 0.0})) < 1e-9);
}

TEST_CASE("rescale strategy leaves the fidelity invariant in dT") {
    auto s = fast();
    s.grid = {20000, 2};
    s.strategy = DeviationStrategy::Rescale;
    const double nominal = deviated_fidelity(s, {});
    for (double d : {-0.1, 0.1}) CHECK(std::abs(deviated_fidelity(s, {0.0, 0.0, d}) - nominal) < 1e-9);
}

TEST_CASE("truncate strategy: extra time after the pulses changes nothing") {
    auto s = fast();
    s.strategy = DeviationStrategy::Truncate;
    const double nominal = deviated_fidelity(s, {});
    CHECK(std::abs(deviated_fidelity(s, {0.0, 0.0, 0.1}) - nominal) < 1e-9);
    CHECK(deviated_fidelity(s, {0.0, 0.0, -0.1}) < nominal - 1e-3);
}

TEST_CASE("strategy names round-trip") {
    for (auto st : {DeviationStrategy::PulseArea, DeviationStrategy::Truncate, DeviationStrategy::Rescale})
        CHECK(parse_deviation_strategy(to_string(st)) == st);
    CHECK_THROWS_AS(parse_deviation_strategy("stretch"), PreconditionError);
    for (auto t : {TableId::I, TableId::II, TableId::III, TableId::IV}) CHECK(parse_table_id(to_string(t)) == t);
    CHECK_THROWS_AS(parse_table_id("VI"), PreconditionError);
}

TEST_CASE("table row sets") {
    CHECK(table_rows(TableId::I).size() == 9);
    CHECK(table_rows(TableId::II).size() == 9);
    CHECK(table_rows(TableId::III).size() == 9);
    CHECK(table_rows(TableId::IV).size() == 8);
    for (const auto& r : table_rows(TableId::I)) CHECK(r.deviation.d_T == 0.0);
    for (const auto& r : table_rows(TableId::II)) CHECK(r.deviation.d_omega2 == 0.0);
    for (const auto& r : table_rows(TableId::III)) CHECK(r.deviation.d_omega1 == 0.0);
}

TEST_CASE("selected table rows") {
    const auto s = fast();
    CHECK(std::abs(deviated_fidelity(s, {0.1, 0.1, 0.0}) - 0.9835) < 0.01);
    CHECK(std::abs(deviated_fidelity(s, {0.0, -0.1, 0.1}) - 0.9994) < 0.01);
    CHECK(std::abs(deviated_fidelity(s, {-0.1, 0.0, -0.1}) - 0.9729) < 0.01);
    CHECK(std::abs(deviated_fidelity(s, {-0.1, -0.1, -0.1}) - 0.9469) < 0.01);
}

TEST_CASE("swapping both amplitude signs barely moves F") {
    const auto s = fast();
    CHECK(std::abs(deviated_fidelity(s, {0.1, 0.1, 0.0}) - deviated_fidelity(s, {-0.1, -0.1, 0.0})) < 0.01);
}

TEST_CASE("run_table keeps the published order and fills every row") {
    const auto rows = run_table(TableId::I, fast());
    const auto ref = table_rows(TableId::I);
    REQUIRE(rows.size() == ref.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].published == ref[i].published);
        CHECK(rows[i].fidelity > 0.9);
        CHECK(rows[i].fidelity <= 1.0 + 1e-9);
    }
}

TEST_CASE("STIRAP examples and monotonicity") {
    auto s = fast();
    s.grid = {20000, 2};
    std::vector<double> amps;
    for (const auto& p : stirap_reference()) amps.push_back(p.omega0_T);
    const auto pts = stirap_scan(amps, {}, s);
    REQUIRE(pts.size() == 7);
    CHECK(std::abs(pts[0].fidelity - 0.5538) < 0.02);
    CHECK(std::abs(pts[3].fidelity - 0.9604) < 0.02);
    CHECK(std::abs(pts[6].fidelity - 0.9992) < 0.01);
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].fidelity >= pts[i - 1].fidelity);
    CHECK(stirap_scan({7.5}, {}, s)[0].published == -1.0);
}

TEST_CASE("decoherence map corner, monotonicity and reference point") {
    auto s = fast();
    const Axis g{"g", 0.0, 0.1, 5};
    const auto map = decoherence_map(g, g, 3.154, s);
    REQUIRE(map.values.size() == 25);
    CHECK(std::abs(map.at(0, 0) - 1.0) < 1e-3);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            if (i > 0) CHECK(map.at(i, j) <= map.at(i - 1, j));
            if (j > 0) CHECK(map.at(i, j) <= map.at(i, j - 1));
            CHECK(map.at(i, j) >= 0.0);
        }
    const Axis one{"g", 0.01, 0.01, 1};
    CHECK(std::abs(decoherence_map(one, one, 3.154, s).at(0, 0) - 0.9901) < 0.003);
    CHECK_THROWS_AS(decoherence_map({"g", -0.1, 0.1, 3}, g, 3.154, s), PreconditionError);
}

TEST_CASE("deviation grid layout is row-major and thread-count independent") {
    auto s = fast();
    s.threads = 1;
    const auto a = deviation_grid(DeviationPair::Omega1T, 3, 0.1, s);
    s.threads = 4;
    const auto b = deviation_grid(DeviationPair::Omega1T, 3, 0.1, s);
    REQUIRE(a.values.size() == 9);
    CHECK(a.values == b.values);
    CHECK(a.x.name == "d_omega1_rel");
    CHECK(a.y.name == "d_T_rel");
    CHECK(a.at(0, 2) == deviated_fidelity(s, {-0.1, 0.0, 0.1}));
    CHECK(a.at(1, 1) == deviated_fidelity(s, {}));
    for (double v : a.values) CHECK(v <= 1.0 + 1e-9);
    CHECK_THROWS_AS(deviation_grid(DeviationPair::Omega1Omega2, 0, 0.1, s), PreconditionError);
}

TEST_CASE("parallel_for visits each index once and propagates failures") {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(100, 3,
                                 [](std::size_t i) {
                                     if (i == 57) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}
