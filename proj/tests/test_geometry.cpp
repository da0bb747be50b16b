#include <doctest.h>

#include <numbers>
#include <random>

#include "rissim/geometry.hpp"

using namespace rissim;
using std::numbers::pi;

TEST_SUITE_BEGIN("geometry");

TEST_CASE("ula_steering basics") {
    const Eigen::VectorXcd ones = ula_steering(0.0, 4);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(ones[k] - cd{1.0, 0.0}) < 1e-12);

    const Eigen::VectorXcd alt = ula_steering(pi, 2);
    CHECK(std::abs(alt[0] - cd{1.0, 0.0}) < 1e-12);
    CHECK(std::abs(alt[1] - cd{-1.0, 0.0}) < 1e-12);

    const Eigen::VectorXcd v = ula_steering(0.5, 3);
    CHECK(std::arg(v[0]) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::arg(v[1]) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::arg(v[2]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ura_steering 2x2 sign patterns") {
    const UraGeometry g{2, 2};
    const Eigen::VectorXcd all1 = ura_steering(0.0, 0.0, g);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(all1[k] - cd{1.0, 0.0}) < 1e-12);

    // y-major flattening: u flips the second half, v alternates
    const Eigen::VectorXcd bu = ura_steering(pi, 0.0, g);
    const double expect_u[4] = {1.0, 1.0, -1.0, -1.0};
    for (int k = 0; k < 4; ++k) CHECK(bu[k].real() == doctest::Approx(expect_u[k]).epsilon(1e-12));

    const Eigen::VectorXcd bv = ura_steering(0.0, pi, g);
    const double expect_v[4] = {1.0, -1.0, 1.0, -1.0};
    for (int k = 0; k < 4; ++k) CHECK(bv[k].real() == doctest::Approx(expect_v[k]).epsilon(1e-12));
}

TEST_CASE("steering entries are unit modulus and conjugate-symmetric in u") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int i = 0; i < 50; ++i) {
        const double u = angle(rng);
        const Eigen::VectorXcd a = ula_steering(u, 8);
        const Eigen::VectorXcd ac = ula_steering(-u, 8);
        for (int k = 0; k < 8; ++k) {
            CHECK(std::abs(std::abs(a[k]) - 1.0) < 1e-12);
            CHECK(std::abs(ac[k] - std::conj(a[k])) < 1e-12);
        }
    }
}

TEST_CASE("ura_steering equals the Kronecker product of its ULA factors") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(-pi, pi);
    const UraGeometry g{3, 4};
    for (int i = 0; i < 50; ++i) {
        const double u = angle(rng), v = angle(rng);
        const Eigen::VectorXcd b = ura_steering(u, v, g);
        const Eigen::VectorXcd ay = ula_steering(u, g.m_y);
        const Eigen::VectorXcd az = ula_steering(v, g.m_z);
        for (int iy = 0; iy < g.m_y; ++iy)
            for (int iz = 0; iz < g.m_z; ++iz)
                CHECK(std::abs(b[iy * g.m_z + iz] - ay[iy] * az[iz]) < 1e-12);
    }
}

TEST_CASE("effective_angles_between examples") {
    const EffectiveAnglePair bore = effective_angles_between({0, 0, 0}, {4, 0, 0});
    CHECK(bore.u == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(bore.v == doctest::Approx(0.0).epsilon(1e-12));

    // UE bearing from the reference deployment: d ~ 4 m, dy/d ~ -0.5
    const EffectiveAnglePair ue = effective_angles_between({0, 0, 0}, {3.46, -2.0, 0.0});
    CHECK(ue.u == doctest::Approx(-pi / 2).epsilon(1e-3));
    CHECK(ue.v == doctest::Approx(0.0).epsilon(1e-12));

    const EffectiveAnglePair up = effective_angles_between({0, 0, 0}, {0, 0, 5});
    CHECK(up.u == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(up.v == doctest::Approx(pi).epsilon(1e-12));

    CHECK_THROWS(effective_angles_between({1, 2, 3}, {1, 2, 3}));
}

TEST_CASE("ue_effective_aod examples and negation identity") {
    CHECK(ue_effective_aod({4, 0, 0}, {0, 0, 0}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ue_effective_aod({3.46, -2, 0}, {0, 0, 0}) == doctest::Approx(pi / 2).epsilon(1e-3));
    CHECK(ue_effective_aod({0, -1, 0}, {0, 1, 0}) == doctest::Approx(pi).epsilon(1e-12));
    CHECK_THROWS(ue_effective_aod({1, 1, 1}, {1, 1, 1}));

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> coord(-10.0, 10.0);
    for (int i = 0; i < 100; ++i) {
        const Vec3 ue{coord(rng), coord(rng), coord(rng)};
        const Vec3 t{coord(rng) + 11.0, coord(rng), coord(rng)};
        CHECK(ue_effective_aod(ue, t) ==
              doctest::Approx(-effective_angles_between(t, ue).u).epsilon(1e-12));
    }
}

TEST_CASE("direction cosines are antisymmetric under endpoint swap") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    for (int i = 0; i < 100; ++i) {
        const Vec3 a{coord(rng), coord(rng), coord(rng)};
        const Vec3 b{coord(rng) + 6.0, coord(rng), coord(rng)};
        const EffectiveAnglePair ab = effective_angles_between(a, b);
        const EffectiveAnglePair ba = effective_angles_between(b, a);
        CHECK(ab.u == doctest::Approx(-ba.u).epsilon(1e-12));
        CHECK(ab.v == doctest::Approx(-ba.v).epsilon(1e-12));
    }
}

TEST_CASE("physical directions satisfy the cosine constraint") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    for (int i = 0; i < 100; ++i) {
        const Vec3 a{coord(rng), coord(rng), coord(rng)};
        const Vec3 b{coord(rng), coord(rng), coord(rng) + 6.0};
        const EffectiveAnglePair p = effective_angles_between(a, b);
        CHECK((p.u / pi) * (p.u / pi) + (p.v / pi) * (p.v / pi) <= 1.0 + 1e-12);
    }
}

TEST_SUITE_END();
