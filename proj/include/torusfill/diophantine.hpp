#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "torusfill/enumeration.hpp"
#include "torusfill/vector.hpp"

namespace torusfill {

// Parameters (n, tau, gamma, N) of the truncated Diophantine set
//   D(tau, gamma, N) = { alpha : |k.alpha| >= gamma |k|^-tau for 0 < |k| <= N }.
// An absent cutoff denotes the untruncated set.
struct DioParams {
    int n = 2;
    double tau = 1;
    double gamma = 0.1;
    std::optional<double> cutoff;

    // n >= 2, tau >= n - 1, gamma in (0, 1), cutoff >= 1 when present.
    void validate() const;
};

struct ViolationWitness {
    IntVec k;
    double inner;      // |k.alpha|
    double threshold;  // gamma |k|^-tau
};

struct CheckResult {
    std::optional<ViolationWitness> violation;
    [[nodiscard]] bool passed() const noexcept { return !violation.has_value(); }
};

struct ResonanceReport {
    IntVec k;         // primitive, first nonzero entry positive
    double order;     // |k|
    double residual;  // |k.alpha|
};

struct BestGamma {
    double gamma_max;
    IntVec argmin;
};

struct MeasureEstimate {
    double fraction;
    double standard_error;
    std::size_t samples;
    std::size_t excluded;
};

// How the candidate set {k : 0 < |k| <= N} is produced. `box` walks the
// integer cube [-floor(N), floor(N)]^n; `slab` only enumerates lattice points
// in the slab |k.alpha| <= gamma around the resonance plane, which contains
// every possible violator. Both give identical answers.
enum class Enumeration { slab, box };

// Violators satisfy |k.alpha| < gamma |k|^-tau - kCompareSlack * |k|.
inline constexpr double kCompareSlack = 1e-12;

// Decides alpha in D^1(tau, gamma, N). On failure returns the violating k of
// smallest norm, sign-normalised so its first nonzero entry is positive, ties
// broken lexicographically.
CheckResult check_truncated(const DirectionVector& alpha, const DioParams& params,
                            Enumeration strategy = Enumeration::slab, std::uint64_t budget = kDefaultBudget);

// gamma_max = min over 0 < |k| <= N of |k.alpha| |k|^tau, with the k attaining
// it (same tie-break as check_truncated). Exact resonances report 0.
BestGamma best_gamma(const DirectionVector& alpha, double tau, double cutoff,
                     Enumeration strategy = Enumeration::slab, std::uint64_t budget = kDefaultBudget);

// Primitive k with |k| <= max_order and |k.alpha| <= tol (plus kCompareSlack
// |k| so that tol = 0 finds exact resonances in floating point), one per
// +-pair, sorted by norm then lexicographically.
std::vector<ResonanceReport> resonance_search(const DirectionVector& alpha, double max_order, double tol,
                                              std::uint64_t budget = kDefaultBudget);

// Uniform direction on S^{n-1} from normalised Gaussians.
DirectionVector random_direction(std::size_t n, std::mt19937_64& rng);

// Monte Carlo fraction of directions outside D^1(tau, gamma, N) with its
// binomial standard error. Reproducible for a fixed seed.
MeasureEstimate complement_measure_estimate(const DioParams& params, std::size_t samples, std::uint64_t seed);

}  // namespace torusfill
