#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "torusfill/errors.hpp"
#include "torusfill/filling.hpp"

using namespace torusfill;

namespace {

const double kPhi = (1 + std::sqrt(5.0)) / 2;

DirectionVector golden() {
    const double v[2] = {1, kPhi};
    return DirectionVector::normalize(v);
}

}  // namespace

TEST_CASE("constants") {
    CHECK(critical_cutoff(2, 0.1) == doctest::Approx(90));
    CHECK(critical_cutoff(2, 0.45) == doctest::Approx(20));
    CHECK(critical_cutoff(3, 0.4999) == doctest::Approx(110.022).epsilon(1e-4));
    CHECK_THROWS_AS(critical_cutoff(3, 0.5), DomainError);
    CHECK_THROWS_AS(critical_cutoff(2, 0), DomainError);
    CHECK(bound_constant(2, 1) == doctest::Approx(81));
    CHECK(bound_constant(2, 1.5) == doctest::Approx(243));
    CHECK(bound_constant(3, 2.5) == doctest::Approx(std::pow(55.0, 3.5)));
    CHECK(bound_constant(3, 2.5) == doctest::Approx(1.2338e6).epsilon(1e-4));
    CHECK(filling_time_bound(2, 1, 0.1, 0.1) == doctest::Approx(8100));
    CHECK(filling_time_bound(2, 1, 0.4, 0.1) == doctest::Approx(2025));
    CHECK(factorial(4) == 24);
}

TEST_CASE("adapted basis of the golden direction") {
    const auto basis = adapted_basis(golden(), DioParams{2, 1, 0.4, 90.0});
    const auto report = check_invariants(basis);
    CHECK(report.all_ok());
    CHECK(report.multiplier_upper == doctest::Approx(900));
    CHECK(std::abs(report.determinant) == 1);
    CHECK(std::abs(oracle::determinant(basis.integer_basis.columns)) == 1);
    for (std::size_t j = 0; j < 2; ++j) {
        const auto& w = basis.integer_basis.columns[j];
        const double x = w[0] * golden()[0] + w[1] * golden()[1];
        CHECK(basis.multipliers[j] == doctest::Approx(x).epsilon(1e-12));
        CHECK(x > std::sqrt(3.0) / 2);
        CHECK(x <= 900);
        // Fibonacci pairs are the convergents of the golden ratio.
        CHECK(std::abs(w[1] * w[1] - w[1] * w[0] - w[0] * w[0]) == 1);
    }
    CHECK(basis.cylinder_minima.lambdas.back() < 2);
}

TEST_CASE("adapted basis rejects its hypotheses") {
    const double v[2] = {2, 1};
    const auto resonant = DirectionVector::normalize(v);
    try {
        adapted_basis(resonant, DioParams{2, 1, 0.01, 90.0});
        FAIL("expected a hypothesis failure");
    } catch (const HypothesisError& e) {
        CHECK(e.witness().k == IntVec{1, -2});
    }
    CHECK_THROWS_AS(adapted_basis(golden(), DioParams{2, 1, 0.4, 9.0}), DomainError);
    CHECK_THROWS_AS(adapted_basis(golden(), DioParams{2, 1, 0.4, std::nullopt}), DomainError);
}

TEST_CASE("random three dimensional bases satisfy the invariants") {
    std::mt19937_64 rng(61);
    const DioParams p{3, 3, 0.05, critical_cutoff(3, 0.2)};
    int built = 0;
    for (int trial = 0; trial < 60 && built < 15; ++trial) {
        const auto a = random_direction(3, rng);
        if (!check_truncated(a, p).passed()) continue;
        ++built;
        const auto basis = adapted_basis(a, p);
        const auto report = check_invariants(basis);
        CHECK(report.all_ok());
        CHECK(std::abs(oracle::determinant(basis.integer_basis.columns)) == 1);
        for (std::size_t j = 0; j < 3; ++j) CHECK(report.deviations[j] <= report.deviation_bounds[j]);
    }
    CHECK(built >= 10);
}

TEST_CASE("hitting times") {
    const auto basis = adapted_basis(golden(), DioParams{2, 1, 0.4, 90.0});

    const RealVec origin{0, 0};
    const auto zero = hitting_time(basis, origin, 0.1);
    CHECK(zero.time == 0);
    CHECK(zero.endpoint_distance == 0);
    CHECK(zero.coords == RealVec{0, 0});

    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 300; ++trial) {
        const RealVec theta{u(rng), u(rng)};
        const auto c = hitting_time(basis, theta, 0.1);
        // theta = sum t_j w_j mod 1
        RealVec back(2, 0);
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK(c.coords[j] >= 0);
            CHECK(c.coords[j] < 1);
            for (std::size_t i = 0; i < 2; ++i) back[i] += c.coords[j] * basis.integer_basis.columns[j][i];
        }
        CHECK(oracle::torus_distance(back, theta) < 1e-9);
        CHECK(c.endpoint_distance <= c.distance_bound + 1e-12);
        CHECK(c.endpoint_distance < 0.1);
        CHECK(c.time <= c.multiplier_sum);
        CHECK(c.time < c.bound);
        CHECK(c.guarantee_applies);

        // Any start sigma reaches theta by solving for theta - sigma.
        const RealVec sigma{u(rng), u(rng)};
        const RealVec rel{theta[0] - sigma[0], theta[1] - sigma[1]};
        const auto d = hitting_time(basis, rel, 0.1);
        const RealVec endpoint{sigma[0] + d.time * golden()[0], sigma[1] + d.time * golden()[1]};
        CHECK(oracle::torus_distance(endpoint, theta) < 0.1);
    }
}
