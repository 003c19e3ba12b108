#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "torusfill/diophantine.hpp"
#include "torusfill/errors.hpp"
#include "torusfill/integer_matrix.hpp"
#include "torusfill/lattice.hpp"

using namespace torusfill;

namespace {

const DirectionVector kE1(RealVec{1, 0});

CylinderBody random_cylinder(std::size_t n, std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return CylinderBody{random_direction(n, rng), std::exp(u(rng)), std::exp(u(rng))};
}

}  // namespace

TEST_CASE("gauges of the axis-aligned bodies") {
    const CylinderBody c{kE1, 3, 0.4};
    const DiamondBody d{kE1, 3, 0.4};
    CHECK(dilation_needed(c, IntVec{1, 0}) == doctest::Approx(1.0 / 3));
    CHECK(dilation_needed(c, IntVec{0, 1}) == doctest::Approx(2.5));
    CHECK(dilation_needed(d, IntVec{0, 1}) == doctest::Approx(0.4));
    CHECK_THROWS_AS(dilation_needed(c, IntVec{0, 0}), DomainError);
    CHECK_THROWS_AS(validate(CylinderBody{kE1, 0, 1}), DomainError);
    CHECK_THROWS_AS(validate(DiamondBody{kE1, 1, -1}), DomainError);
}

TEST_CASE("lattice points in a dilated cylinder") {
    const CylinderBody c{kE1, 3, 0.4};
    const auto pts = lattice_points_in(c, 1);
    const std::vector<IntVec> expected{{-1, 0}, {1, 0}, {-2, 0}, {2, 0}, {-3, 0}, {3, 0}};
    CHECK(pts == expected);
    CHECK(lattice_points_in(c, 0.3).empty());

    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const CylinderBody ball{random_direction(3, rng), 1, 1};
        const auto found = lattice_points_in(ball, 2.5);
        std::size_t count = 0;
        for (int x = -3; x <= 3; ++x)
            for (int y = -3; y <= 3; ++y)
                for (int z = -3; z <= 3; ++z) {
                    if (x == 0 && y == 0 && z == 0) continue;
                    const double g = oracle::gauge(ball, IntVec{x, y, z});
                    if (g <= 2.5 - 1e-9) {
                        ++count;
                        CHECK(std::find(found.begin(), found.end(), IntVec{x, y, z}) != found.end());
                    }
                }
        CHECK(found.size() >= count);
        for (const auto& k : found) CHECK(oracle::gauge(ball, k) <= 2.5 + 1e-9);
    }
}

TEST_CASE("successive minima of the axis-aligned bodies") {
    const auto c = successive_minima(CylinderBody{kE1, 3, 0.4});
    CHECK(c.lambdas[0] == doctest::Approx(1.0 / 3));
    CHECK(c.lambdas[1] == doctest::Approx(2.5));
    CHECK(c.witnesses[0] == IntVec{1, 0});
    CHECK(c.witnesses[1] == IntVec{0, 1});

    const auto d = successive_minima(DiamondBody{kE1, 3, 0.4});
    CHECK(d.lambdas[0] == doctest::Approx(0.4));
    CHECK(d.lambdas[1] == doctest::Approx(3));
    CHECK(d.witnesses[0] == IntVec{0, 1});
    CHECK(d.witnesses[1] == IntVec{1, 0});
}

TEST_CASE("successive minima match the naive oracle") {
    std::mt19937_64 rng(31);
    for (std::size_t n = 2; n <= 3; ++n) {
        for (int trial = 0; trial < 25; ++trial) {
            const auto cyl = random_cylinder(n, rng, 0.3, 3);
            for (const Body& body : {Body(cyl), Body(polar_body(cyl))}) {
                const auto got = successive_minima(body);
                const auto want = oracle::successive_minima(body);
                REQUIRE(want.lambdas.size() == n);
                for (std::size_t j = 0; j < n; ++j) {
                    CHECK(got.lambdas[j] == doctest::Approx(want.lambdas[j]).epsilon(1e-12));
                    CHECK(dilation_needed(body, got.witnesses[j]) ==
                          doctest::Approx(want.lambdas[j]).epsilon(1e-12));
                }
                CHECK(oracle::rank(got.witnesses) == n);
            }
        }
    }
}

TEST_CASE("witnesses are optimal below each minimum") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        const auto cyl = random_cylinder(3, rng, 0.5, 2);
        const auto m = successive_minima(cyl);
        for (std::size_t j = 0; j < 3; ++j) {
            std::vector<IntVec> prefix(m.witnesses.begin(), m.witnesses.begin() + j);
            for (const auto& k : lattice_points_in(cyl, m.lambdas[j] * (1 - 1e-9))) {
                auto trial_set = prefix;
                trial_set.push_back(k);
                CHECK(oracle::rank(trial_set) < j + 1);
            }
        }
    }
}

TEST_CASE("scaling covariance and point symmetry") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const auto cyl = random_cylinder(2 + trial % 2, rng, 0.3, 3);
        const double s = 0.5 + trial * 0.1;
        const CylinderBody scaled{cyl.axis, cyl.axial_half * s, cyl.radial_half * s};
        const auto a = successive_minima(cyl);
        const auto b = successive_minima(scaled);
        for (std::size_t j = 0; j < a.lambdas.size(); ++j) {
            CHECK(b.lambdas[j] == doctest::Approx(a.lambdas[j] / s).epsilon(1e-12));
        }
        const auto pts = lattice_points_in(cyl, 2 * a.lambdas.back());
        for (const auto& k : pts) {
            IntVec neg = k;
            for (auto& v : neg) v = -v;
            CHECK(std::find(pts.begin(), pts.end(), neg) != pts.end());
        }
    }
}

TEST_CASE("polar and coreciprocal bodies") {
    const CylinderBody c{kE1, 3, 0.4};
    const auto d = polar_body(c);
    CHECK(d.axial_half == 3);
    CHECK(d.radial_half == 0.4);
    const RealVec boundary{1.0 / 3, 0};
    CHECK(contains(d, boundary));
    CHECK_FALSE(contains(d, RealVec{1.0 / 3 + 1e-6, 0}));
    const auto back = polar_body(d);
    CHECK(back.axial_half == 3);
    CHECK(back.radial_half == 0.4);

    const double big = std::pow(90.0, 1) / 0.4;
    const auto co = coreciprocal_cylinder(CylinderBody{kE1, big, 1.0 / 89});
    CHECK(co.axial_half == doctest::Approx(0.4 / 90));
    CHECK(co.radial_half == doctest::Approx(89));
    const auto twice = coreciprocal_cylinder(co);
    CHECK(twice.axial_half == doctest::Approx(big).epsilon(1e-15));
    CHECK(twice.radial_half == doctest::Approx(1.0 / 89).epsilon(1e-15));

    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 20; ++trial) {
        const auto cyl = random_cylinder(3, rng, 0.3, 3);
        const auto polar = polar_body(cyl);
        const auto coreciprocal = coreciprocal_cylinder(cyl);
        for (int s = 0; s < 200; ++s) {
            RealVec p{u(rng) * 4, u(rng) * 4, u(rng) * 4};
            RealVec q{u(rng) * 4, u(rng) * 4, u(rng) * 4};
            if (contains(polar, p)) CHECK(contains(coreciprocal, p));
            if (contains(polar, p) && contains(cyl, q)) {
                CHECK(p[0] * q[0] + p[1] * q[1] + p[2] * q[2] <= 1 + 1e-9);
            }
        }
    }
}

TEST_CASE("duality products lie between 1 and n!") {
    const auto exact = duality_check(CylinderBody{kE1, 3, 0.4});
    REQUIRE(exact.size() == 2);
    CHECK(exact[0] == doctest::Approx(1).epsilon(1e-15));
    CHECK(exact[1] == doctest::Approx(1).epsilon(1e-15));

    std::mt19937_64 rng(47);
    const double fact[] = {1, 1, 2, 6, 24};
    for (std::size_t n = 2; n <= 4; ++n) {
        for (int trial = 0; trial < 15; ++trial) {
            for (double p : duality_check(random_cylinder(n, rng, 0.2, 5))) {
                CHECK(p >= 1 - 1e-9);
                CHECK(p <= fact[n] + 1e-9);
            }
        }
    }
}

TEST_CASE("Z-basis extraction") {
    const CylinderBody unit{kE1, 1, 1};
    const MinimaResult identity{{1, 1}, {{1, 0}, {0, 1}}};
    CHECK(extract_zbasis(unit, identity).columns == std::vector<IntVec>{{1, 0}, {0, 1}});

    // Independent witnesses spanning an index-2 sublattice.
    const CylinderBody box{kE1, 2, 1};
    const MinimaResult sub{{1, 1}, {{2, 0}, {0, 1}}};
    const auto basis = extract_zbasis(box, sub);
    CHECK(std::abs(oracle::determinant(basis.columns)) == 1);
    const bool has_e1 = std::any_of(basis.columns.begin(), basis.columns.end(), [](const IntVec& k) {
        return k == IntVec{1, 0} || k == IntVec{-1, 0};
    });
    CHECK(has_e1);

    std::mt19937_64 rng(53);
    for (std::size_t n = 2; n <= 4; ++n) {
        for (int trial = 0; trial < 15; ++trial) {
            const auto cyl = random_cylinder(n, rng, 0.2, 5);
            const auto m = successive_minima(cyl);
            const auto b = extract_zbasis(cyl, m);
            CHECK(is_unimodular(b.columns));
            for (const auto& k : b.columns) {
                CHECK(dilation_needed(cyl, k) <= n * m.lambdas.back() + 1e-12);
            }
        }
    }
}
