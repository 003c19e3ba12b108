#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "torusfill/errors.hpp"
#include "torusfill/integer_matrix.hpp"

using namespace torusfill;

namespace {

// Product of random elementary column operations applied to the identity.
std::vector<IntVec> random_unimodular(std::size_t n, std::mt19937_64& rng, int ops) {
    std::vector<IntVec> cols(n, IntVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) cols[i][i] = 1;
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<int> coef(-3, 3);
    for (int t = 0; t < ops; ++t) {
        const auto a = pick(rng);
        const auto b = pick(rng);
        if (a == b) {
            for (auto& v : cols[a]) v = -v;
            continue;
        }
        const int c = coef(rng);
        for (std::size_t i = 0; i < n; ++i) cols[a][i] += c * cols[b][i];
    }
    return cols;
}

}  // namespace

TEST_CASE("determinant and rank of small matrices") {
    CHECK(determinant({{2, 0}, {0, 1}}) == 2);
    CHECK(determinant({{1, 1}, {1, -1}}) == -2);
    CHECK(determinant({{1, 2, 3}, {4, 5, 6}, {7, 8, 10}}) == -3);
    CHECK(rank({{1, 2, 3}, {2, 4, 6}}) == 1);
    CHECK(rank({{1, 0, 0}, {0, 1, 0}, {1, 1, 0}}) == 2);
    CHECK(rank({}) == 0);
}

TEST_CASE("primitivity of partial bases") {
    CHECK_FALSE(is_primitive({{2, 0}, {0, 1}}));
    CHECK(is_primitive({{1, 0}, {1, 1}}));
    CHECK_FALSE(is_primitive({{1, 0, 0}, {0, 2, 0}}));
    CHECK(is_primitive({{1, 1, 0}, {0, 1, 1}}));
    CHECK(is_primitive({{3, 5}}));
    CHECK_FALSE(is_primitive({{4, 6}}));
}

TEST_CASE("unimodular inverse matches the oracle determinant and inverts") {
    std::mt19937_64 rng(11);
    for (std::size_t n = 2; n <= 4; ++n) {
        for (int trial = 0; trial < 50; ++trial) {
            const auto cols = random_unimodular(n, rng, 12);
            const auto det = oracle::determinant(cols);
            REQUIRE((det == 1 || det == -1));
            CHECK(static_cast<long long>(determinant(cols)) == det);
            CHECK(is_unimodular(cols));
            const auto inv = unimodular_inverse(cols);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    std::int64_t s = 0;
                    for (std::size_t k = 0; k < n; ++k) s += inv[i][k] * cols[j][k];
                    CHECK(s == (i == j ? 1 : 0));
                }
            }
        }
    }
    CHECK_THROWS_AS(unimodular_inverse({{2, 0}, {0, 1}}), DomainError);
}
