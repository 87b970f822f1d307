#include <doctest.h>

#include <algorithm>
#include <numbers>

#include "diracbands/lattice.hpp"
#include "oracles.hpp"

using namespace diracbands;
namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("lattice basis and invariants") {
    const LatticeSpec spec = build_lattice(1.0, 0.05);
    CHECK(std::abs(dot(spec.e1, spec.k1) - kTwoPi) < 1e-12 * kTwoPi);
    CHECK(std::abs(dot(spec.e2, spec.k2) - kTwoPi) < 1e-12 * kTwoPi);
    CHECK(std::abs(dot(spec.e1, spec.k2)) < 1e-12 * kTwoPi);
    CHECK(std::abs(dot(spec.e2, spec.k1)) < 1e-12 * kTwoPi);
    CHECK(spec.cell_area == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));

    // k1 = 2 pi (1/sqrt(3), 1)
    CHECK(spec.k1.x == doctest::Approx(kTwoPi / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(spec.k1.y == doctest::Approx(kTwoPi).epsilon(1e-14));

    const LatticeSpec spec2 = build_lattice(2.0, 0.05);
    CHECK(norm(high_symmetry_points(spec2).K.k) ==
          doctest::Approx(kTwoPi / 3.0).epsilon(1e-14));

    CHECK_THROWS(build_lattice(1.0, 0.5));   // obstacle touches the cell boundary
    CHECK_THROWS(build_lattice(1.0, -0.1));
    CHECK_THROWS(build_lattice(-1.0, 0.1));
}

TEST_CASE("rotation by 2pi/3") {
    const LatticeSpec spec = build_lattice(1.0, 0.05);
    const Vec2 r1 = rotate(spec.k1);
    CHECK(norm(r1 - spec.k2) < 1e-12 * norm(spec.k1));
    const Vec2 r12 = rotate(spec.k1 + spec.k2);
    CHECK(norm(r12 + spec.k1) < 1e-12 * norm(spec.k1));
    CHECK(norm(rotate({0.0, 0.0})) == 0.0);
    // R^3 = identity
    const Vec2 v{0.37, -1.21};
    CHECK(norm(rotate(rotate(rotate(v))) - v) < 1e-14);
}

TEST_CASE("singular frequencies at K") {
    const LatticeSpec spec = build_lattice(1.0, 0.05);
    const BlochVector K = high_symmetry_points(spec).K;
    const auto ws = singular_frequencies(spec, K, 2.7 * kTwoPi);
    REQUIRE(ws.size() >= 5);
    const double expected[5] = {2.0 / 3.0, 4.0 / 3.0, 2.0 * std::sqrt(7.0) / 3.0,
                                2.0 * std::sqrt(13.0) / 3.0, 8.0 / 3.0};
    for (int i = 0; i < 5; ++i)
        CHECK(ws[i] / kTwoPi == doctest::Approx(expected[i]).epsilon(1e-12));
    CHECK(ws.size() == 5);  // exactly five shells below 2.7 (2pi/a)

    // brute-force enumeration oracle agrees
    const auto ref = oracles::brute_force_singular(1.0, K.k.x, K.k.y, 2.7 * kTwoPi);
    REQUIRE(ref.size() == ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i)
        CHECK(ws[i] == doctest::Approx(ref[i]).epsilon(1e-12));

    // smallest entry at Gamma is zero
    const auto wg = singular_frequencies(spec, high_symmetry_points(spec).Gamma, kTwoPi);
    CHECK(wg.front() == doctest::Approx(0.0));

    // invariance under kappa -> R kappa
    const BlochVector RK{rotate(K.k)};
    const auto wr = singular_frequencies(spec, RK, 2.7 * kTwoPi);
    REQUIRE(wr.size() == ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i)
        CHECK(std::abs(ws[i] - wr[i]) < 1e-10 * std::max(ws[i], 1.0));
}

TEST_CASE("resonant shells at K") {
    const LatticeSpec spec = build_lattice(1.0, 0.05);
    const BlochVector K = high_symmetry_points(spec).K;
    const double ks = norm(K.k);

    const ResonantShell s1 = resonant_shell(spec, K, ks);
    REQUIRE(s1.members.size() == 3);
    const std::vector<Vec2> expected1 = {
        {0.0, 0.0},
        {-2.0 * kTwoPi / std::sqrt(3.0), 0.0},
        {-kTwoPi / std::sqrt(3.0), -kTwoPi}};
    for (const Vec2& q : expected1) {
        bool found = false;
        for (const Vec2& m : s1.members)
            if (norm(m - q) < 1e-9 * kTwoPi) found = true;
        CHECK(found);
    }

    const ResonantShell s2 = resonant_shell(spec, K, 2.0 * ks);
    REQUIRE(s2.members.size() == 3);
    const std::vector<Vec2> expected2 = {
        {-std::sqrt(3.0) * kTwoPi, -kTwoPi},
        {kTwoPi / std::sqrt(3.0), -kTwoPi},
        {-kTwoPi / std::sqrt(3.0), kTwoPi}};
    for (const Vec2& q : expected2) {
        bool found = false;
        for (const Vec2& m : s2.members)
            if (norm(m - q) < 1e-9 * kTwoPi) found = true;
        CHECK(found);
    }

    const ResonantShell s3 = resonant_shell(spec, K, std::sqrt(7.0) * ks);
    CHECK(s3.members.size() == 6);

    // member count is a multiple of three for every shell
    for (double wb : singular_frequencies(spec, K, 2.7 * kTwoPi))
        CHECK(resonant_shell(spec, K, wb).members.size() % 3 == 0);

    CHECK_THROWS(resonant_shell(spec, K, 0.9 * ks));  // not singular
}

TEST_CASE("rotation closure of shifted reciprocal lattice and shells") {
    const LatticeSpec spec = build_lattice(1.0, 0.05);
    const BlochVector K = high_symmetry_points(spec).K;
    // R(K + q) = K + q~ with q~ = -(1+l2) k1 + (l1-l2) k2 in integer terms
    for (int trial = 0; trial < 200; ++trial) {
        const int l1 = int(oracles::uniform(-20.0, 21.0));
        const int l2 = int(oracles::uniform(-20.0, 21.0));
        const Vec2 q = spec.reciprocal(l1, l2);
        const Vec2 rot = rotate(K.k + q);
        const Vec2 qt = spec.reciprocal(-(1 + l2), l1 - l2);
        CHECK(norm(rot - (K.k + qt)) < 1e-9 * std::max(1.0, norm(rot)));
    }

    // shells are permuted by the rotation map
    for (double wb : singular_frequencies(spec, K, 2.0 * kTwoPi)) {
        const ResonantShell shell = resonant_shell(spec, K, wb);
        for (const Vec2& q : shell.members) {
            const Vec2 image = rotate(K.k + q) - K.k;
            bool found = false;
            for (const Vec2& m : shell.members)
                if (norm(m - image) < 1e-9 * kTwoPi) found = true;
            CHECK(found);
        }
    }
}

TEST_CASE("brillouin path") {
    const LatticeSpec spec = build_lattice(1.0, 0.05);
    const auto pts = high_symmetry_points(spec);

    const auto p1 = brillouin_path({pts.M, pts.Gamma}, 3);
    REQUIRE(p1.size() == 3);
    const double lenM = norm(pts.M.k);
    CHECK(p1[0].first == doctest::Approx(0.0));
    CHECK(p1[1].first == doctest::Approx(lenM / 2.0));
    CHECK(p1[2].first == doctest::Approx(lenM));
    CHECK(norm(p1[1].second.k - 0.5 * pts.M.k) < 1e-12);

    const auto p2 = brillouin_path({pts.M, pts.Gamma, pts.K, pts.M}, 9);
    const double total = norm(pts.M.k) + norm(pts.K.k) + norm(pts.K.k - pts.M.k);
    CHECK(p2.back().first == doctest::Approx(total).epsilon(1e-12));

    const auto p3 = brillouin_path({pts.K, pts.K}, 2);
    REQUIRE(p3.size() == 2);
    CHECK(p3[0].first == doctest::Approx(0.0));
    CHECK(p3[1].first == doctest::Approx(0.0));
    CHECK(norm(p3[0].second.k - p3[1].second.k) == 0.0);

    CHECK_THROWS(brillouin_path({pts.K}, 4));
    CHECK_THROWS(brillouin_path({pts.K, pts.M}, 1));
}
