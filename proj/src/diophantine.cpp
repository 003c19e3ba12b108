#include "torusfill/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "torusfill/errors.hpp"

namespace torusfill {
namespace {

constexpr double kSlabPadding = 1e-9;

void require_unit(const DirectionVector& alpha, int n) {
    if (static_cast<int>(alpha.dim()) != n) {
        throw DomainError("direction has dimension " + std::to_string(alpha.dim()) + ", parameters say n = " +
                          std::to_string(n));
    }
}

double required_cutoff(const DioParams& params) {
    if (!params.cutoff) {
        throw DomainError("membership in the untruncated set cannot be decided by enumeration; supply a cutoff N");
    }
    return *params.cutoff;
}

// Every nonzero k with |k| <= cutoff that might have |k.alpha| <= axial.
template <typename Visit>
void for_each_candidate(const DirectionVector& alpha, double cutoff, double axial, Enumeration strategy,
                        std::uint64_t budget, Visit&& visit) {
    const std::size_t n = alpha.dim();
    const double cutoff2 = cutoff * cutoff;
    if (strategy == Enumeration::slab) {
        // (x/axial)^2 + (|y|/cutoff)^2 <= 2 covers the slab inside the ball.
        const AxialForm form{&alpha, 1.0L / (axial + kSlabPadding), 1.0L / cutoff};
        enumerate_ellipsoid(form, std::sqrt(2.0L), budget, [&](const IntVec& k) {
            if (static_cast<double>(norm_squared(k)) <= cutoff2) visit(k);
        });
        return;
    }

    const auto side = static_cast<std::int64_t>(std::floor(cutoff));
    const double count = std::pow(2.0 * static_cast<double>(side) + 1, static_cast<double>(n));
    if (count > static_cast<double>(budget)) {
        throw ResourceError("box enumeration of " + std::to_string(count) + " points exceeds the budget of " +
                            std::to_string(budget) + " candidate points");
    }
    IntVec k(n, -side);
    while (true) {
        if (!is_zero(k) && static_cast<double>(norm_squared(k)) <= cutoff2) visit(k);
        std::size_t i = 0;
        while (i < n && k[i] == side) k[i++] = -side;
        if (i == n) break;
        ++k[i];
    }
}

bool better_witness(const IntVec& candidate, const std::optional<IntVec>& current) {
    return !current || shorter_then_lex(candidate, *current);
}

}  // namespace

void DioParams::validate() const {
    if (n < 2) throw DomainError("dimension n must be >= 2");
    if (!(tau >= n - 1) || !std::isfinite(tau)) throw DomainError("exponent tau must satisfy tau >= n - 1");
    if (!(gamma > 0 && gamma < 1)) throw DomainError("gamma must lie in (0, 1)");
    if (cutoff && !(*cutoff >= 1 && std::isfinite(*cutoff))) throw DomainError("cutoff N must be finite and >= 1");
}

CheckResult check_truncated(const DirectionVector& alpha, const DioParams& params, Enumeration strategy,
                            std::uint64_t budget) {
    params.validate();
    require_unit(alpha, params.n);
    const double cutoff = required_cutoff(params);

    std::optional<IntVec> best;
    for_each_candidate(alpha, cutoff, params.gamma, strategy, budget, [&](const IntVec& k) {
        const long double len = std::sqrt(static_cast<long double>(norm_squared(k)));
        const long double inner = std::fabs(dot(k, alpha));
        const long double threshold = params.gamma * std::pow(len, -static_cast<long double>(params.tau));
        if (inner < threshold - kCompareSlack * len) {
            IntVec c = canonical_sign(k);
            if (better_witness(c, best)) best = std::move(c);
        }
    });

    CheckResult result;
    if (best) {
        const long double len = std::sqrt(static_cast<long double>(norm_squared(*best)));
        result.violation = ViolationWitness{
            *best, static_cast<double>(std::fabs(dot(*best, alpha))),
            static_cast<double>(params.gamma * std::pow(len, -static_cast<long double>(params.tau)))};
    }
    return result;
}

BestGamma best_gamma(const DirectionVector& alpha, double tau, double cutoff, Enumeration strategy,
                     std::uint64_t budget) {
    if (!(cutoff >= 1) || !std::isfinite(cutoff)) throw DomainError("cutoff N must be finite and >= 1");
    if (!std::isfinite(tau) || tau < 0) throw DomainError("exponent tau must be finite and nonnegative");

    // Unit vectors are always candidates, so min |alpha_i| bounds gamma_max
    // and confines every better k to the slab |k.alpha| <= min |alpha_i|.
    double bound = INFINITY;
    for (double a : alpha.coords()) bound = std::min(bound, std::fabs(a));

    long double best_value = INFINITY;
    std::optional<IntVec> best;
    for_each_candidate(alpha, cutoff, bound, strategy, budget, [&](const IntVec& k) {
        const long double len = std::sqrt(static_cast<long double>(norm_squared(k)));
        long double inner = std::fabs(dot(k, alpha));
        if (inner <= kCompareSlack * len) inner = 0;
        const long double value = inner * std::pow(len, static_cast<long double>(tau));
        IntVec c = canonical_sign(k);
        if (value < best_value || (value == best_value && better_witness(c, best))) {
            best_value = value;
            best = std::move(c);
        }
    });
    if (!best) throw InvariantError("best_gamma found no candidate vectors");
    return BestGamma{static_cast<double>(best_value), *best};
}

std::vector<ResonanceReport> resonance_search(const DirectionVector& alpha, double max_order, double tol,
                                              std::uint64_t budget) {
    if (!(max_order >= 1) || !std::isfinite(max_order)) throw DomainError("max_order must be finite and >= 1");
    if (!(tol >= 0) || !std::isfinite(tol)) throw DomainError("tolerance must be finite and >= 0");

    std::vector<ResonanceReport> out;
    const double axial = tol + kCompareSlack * max_order;
    for_each_candidate(alpha, max_order, axial, Enumeration::slab, budget, [&](const IntVec& k) {
        std::int64_t g = 0;
        for (auto v : k) g = std::gcd(g, v);
        if (g != 1) return;
        if (canonical_sign(k) != k) return;
        const double len = norm(k);
        const double residual = static_cast<double>(std::fabs(dot(k, alpha)));
        if (residual <= tol + kCompareSlack * len) out.push_back({k, len, residual});
    });
    std::sort(out.begin(), out.end(),
              [](const ResonanceReport& a, const ResonanceReport& b) { return shorter_then_lex(a.k, b.k); });
    return out;
}

DirectionVector random_direction(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    RealVec v(n);
    while (true) {
        for (auto& x : v) x = gauss(rng);
        if (norm(v) > 1e-12) return DirectionVector::normalize(v);
    }
}

MeasureEstimate complement_measure_estimate(const DioParams& params, std::size_t samples, std::uint64_t seed) {
    params.validate();
    required_cutoff(params);
    if (samples < 1) throw DomainError("sample count must be >= 1");

    std::mt19937_64 rng(seed);
    std::size_t excluded = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        const DirectionVector alpha = random_direction(static_cast<std::size_t>(params.n), rng);
        if (!check_truncated(alpha, params).passed()) ++excluded;
    }
    const double f = static_cast<double>(excluded) / static_cast<double>(samples);
    return MeasureEstimate{f, std::sqrt(f * (1 - f) / static_cast<double>(samples)), samples, excluded};
}

}  // namespace torusfill
