#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "torusfill/diophantine.hpp"
#include "torusfill/errors.hpp"

using namespace torusfill;

namespace {

const double kPhi = (1 + std::sqrt(5.0)) / 2;

DirectionVector dir(std::initializer_list<double> v) {
    const RealVec r(v);
    return DirectionVector::normalize(r);
}

// Recomputes the violated inequality from scratch.
bool violates(const DirectionVector& alpha, const DioParams& p, const IntVec& k) {
    long double dot = 0;
    long double n2 = 0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        dot += static_cast<long double>(k[i]) * alpha[i];
        n2 += static_cast<long double>(k[i]) * k[i];
    }
    const long double len = std::sqrt(n2);
    return len > 0 && len <= *p.cutoff && std::fabs(dot) < p.gamma * std::pow(len, -(long double)p.tau);
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((DioParams{2, 0.5, 0.1, 10.0}.validate()), DomainError);
    CHECK_THROWS_AS((DioParams{2, 1, 0, 10.0}.validate()), DomainError);
    CHECK_THROWS_AS((DioParams{2, 1, 1, 10.0}.validate()), DomainError);
    CHECK_THROWS_AS((DioParams{2, 1, 0.1, 0.5}.validate()), DomainError);
    CHECK_THROWS_AS((DioParams{1, 1, 0.1, 10.0}.validate()), DomainError);
    CHECK_NOTHROW((DioParams{3, 2, 0.1, 10.0}.validate()));
    CHECK_THROWS_AS(check_truncated(dir({1, kPhi}), DioParams{2, 1, 0.1, std::nullopt}), DomainError);
    CHECK_THROWS_AS(check_truncated(dir({1, kPhi, 2}), DioParams{2, 1, 0.1, 10.0}), DomainError);
}

TEST_CASE("exact resonance is reported with a canonical witness") {
    const auto a = dir({2, 1});
    const auto r = check_truncated(a, DioParams{2, 1, 0.01, 3.0});
    REQUIRE_FALSE(r.passed());
    CHECK(r.violation->k == IntVec{1, -2});
    CHECK(std::abs(r.violation->inner) < 1e-15);
    CHECK(violates(a, DioParams{2, 1, 0.01, 3.0}, r.violation->k));

    const auto box = check_truncated(a, DioParams{2, 1, 0.01, 3.0}, Enumeration::box);
    REQUIRE_FALSE(box.passed());
    CHECK(box.violation->k == IntVec{1, -2});

    const auto g = best_gamma(a, 1, 3);
    CHECK(g.gamma_max == 0.0);
    CHECK(g.argmin == IntVec{1, -2});
}

TEST_CASE("diagonal direction at order one") {
    const auto a = dir({1, 1});
    CHECK(check_truncated(a, DioParams{2, 1, 0.5, 1.0}).passed());
    CHECK(best_gamma(a, 1, 1).gamma_max == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("golden direction up to order 90") {
    const auto a = dir({1, kPhi});
    CHECK(check_truncated(a, DioParams{2, 1, 0.4, 90.0}).passed());
    CHECK(check_truncated(a, DioParams{2, 1, 0.4, 90.0}, Enumeration::box).passed());

    const auto [value, k] = oracle::best_gamma(a, 1, 90);
    // Brute force over 0 < |k| <= 90, frozen: 0.4472135980582768 at +-(55, -34).
    CHECK(static_cast<double>(value) == doctest::Approx(0.4472135980582768).epsilon(1e-10));
    for (auto strategy : {Enumeration::slab, Enumeration::box}) {
        const auto g = best_gamma(a, 1, 90, strategy);
        CHECK(g.gamma_max == doctest::Approx(static_cast<double>(value)).epsilon(1e-12));
        CHECK(g.argmin == IntVec{55, -34});
    }
}

TEST_CASE("slab and box enumeration agree") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    for (int n = 2; n <= 3; ++n) {
        for (int trial = 0; trial < 60; ++trial) {
            const auto a = random_direction(n, rng);
            const double tau = (n - 1) + 2 * u(rng);
            const double cutoff = 1 + (n == 2 ? 40 : 12) * u(rng);
            const auto bg_slab = best_gamma(a, tau, cutoff);
            const auto bg_box = best_gamma(a, tau, cutoff, Enumeration::box);
            CHECK(bg_slab.gamma_max == doctest::Approx(bg_box.gamma_max).epsilon(1e-12));
            CHECK(bg_slab.argmin == bg_box.argmin);

            const DioParams p{n, tau, std::min(0.99, bg_slab.gamma_max * (0.5 + u(rng))), cutoff};
            if (!(p.gamma > 0)) continue;
            const auto s = check_truncated(a, p);
            const auto b = check_truncated(a, p, Enumeration::box);
            CHECK(s.passed() == b.passed());
            if (!s.passed() && !b.passed()) {
                CHECK(s.violation->k == b.violation->k);
                CHECK(violates(a, p, s.violation->k));
            }
        }
    }
}

TEST_CASE("best gamma is the exact threshold") {
    std::mt19937_64 rng(9);
    for (int n = 2; n <= 3; ++n) {
        for (int trial = 0; trial < 40; ++trial) {
            const auto a = random_direction(n, rng);
            const double tau = n;
            const double cutoff = n == 2 ? 30 : 10;
            const auto g = best_gamma(a, tau, cutoff).gamma_max;
            if (!(g > 1e-2 && g < 0.9)) continue;
            CHECK(check_truncated(a, DioParams{n, tau, g * (1 - 1e-4), cutoff}).passed());
            const auto above = check_truncated(a, DioParams{n, tau, g * (1 + 1e-4), cutoff});
            REQUIRE_FALSE(above.passed());
            CHECK(violates(a, DioParams{n, tau, g * (1 + 1e-4), cutoff}, above.violation->k));
        }
    }
}

TEST_CASE("membership is monotone in gamma and in the cutoff") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.05, 1);
    int passes = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 2;
        const auto a = random_direction(n, rng);
        const DioParams p{n, double(n), 0.05, n == 2 ? 40.0 : 12.0};
        if (!check_truncated(a, p).passed()) continue;
        ++passes;
        const DioParams smaller{n, p.tau, p.gamma * u(rng), std::max(1.0, *p.cutoff * u(rng))};
        CHECK(check_truncated(a, smaller).passed());
    }
    CHECK(passes > 20);
}

TEST_CASE("resonance search") {
    const auto r3 = resonance_search(dir({3, 1}), 4, 0);
    REQUIRE(r3.size() == 1);
    CHECK(r3[0].k == IntVec{1, -3});
    CHECK(r3[0].order == doctest::Approx(std::sqrt(10.0)));

    CHECK(resonance_search(dir({1, kPhi}), 10, 0).empty());

    const auto axis = resonance_search(DirectionVector(RealVec{1, 0}), 2, 0);
    REQUIRE(axis.size() == 1);
    CHECK(axis[0].k == IntVec{0, 1});
    CHECK(axis[0].order == 1.0);

    // Near resonances of the golden direction are Fibonacci pairs.
    const auto near = resonance_search(dir({1, kPhi}), 100, 0.02);
    REQUIRE_FALSE(near.empty());
    for (const auto& r : near) {
        CHECK(std::abs(r.k[0] * 1.0 + r.k[1] * kPhi) / std::hypot(1.0, kPhi) <= 0.02 + 1e-12);
        CHECK(std::gcd(r.k[0], r.k[1]) == 1);
    }
}

TEST_CASE("complement measure") {
    SUBCASE("two thirds at order one") {
        const DioParams p{2, 2, 0.5, 1.0};
        CHECK(oracle::excluded_arc_fraction(2, 0.5, 1) == doctest::Approx(2.0 / 3).epsilon(1e-12));
        const auto est = complement_measure_estimate(p, 40000, 17);
        CHECK(std::abs(est.fraction - 2.0 / 3) < 4 * est.standard_error);
        CHECK(est.samples == 40000);
        CHECK(est.excluded == static_cast<std::size_t>(std::llround(est.fraction * 40000)));
    }
    SUBCASE("vanishing gamma") {
        const auto est = complement_measure_estimate(DioParams{2, 2, 1e-9, 10.0}, 10000, 1);
        CHECK(est.fraction == 0.0);
    }
    SUBCASE("matches the exact arc measure") {
        for (double gamma : {0.01, 0.02, 0.04, 0.2}) {
            const double exact = oracle::excluded_arc_fraction(2, gamma, 20);
            const auto est = complement_measure_estimate(DioParams{2, 2, gamma, 20.0}, 40000, 23);
            CHECK(std::abs(est.fraction - exact) < 4 * est.standard_error + 1e-12);
        }
    }
    SUBCASE("reproducible under a fixed seed") {
        const DioParams p{3, 2, 0.05, 8.0};
        const auto a = complement_measure_estimate(p, 3000, 99);
        const auto b = complement_measure_estimate(p, 3000, 99);
        CHECK(a.fraction == b.fraction);
        CHECK(a.excluded == b.excluded);
    }
}
