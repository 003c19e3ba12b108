#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace torusfill {

using IntVec = std::vector<std::int64_t>;
using RealVec = std::vector<double>;

inline constexpr double kUnitTolerance = 1e-9;

// A direction on the unit sphere S^{n-1}. Construction rejects vectors whose
// Euclidean norm differs from 1 by more than kUnitTolerance; use normalize()
// to build one from an arbitrary nonzero vector.
class DirectionVector {
public:
    explicit DirectionVector(RealVec coords);

    static DirectionVector normalize(std::span<const double> v);

    [[nodiscard]] std::size_t dim() const noexcept { return coords_.size(); }
    [[nodiscard]] const RealVec& coords() const noexcept { return coords_; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return coords_[i]; }

private:
    RealVec coords_;
};

// k . alpha in extended precision.
long double dot(std::span<const std::int64_t> k, const DirectionVector& alpha);

// Euclidean norm of the component of k orthogonal to alpha, computed as the
// norm of k - (k.alpha) alpha to avoid cancellation in |k|^2 - (k.alpha)^2.
long double perp_norm(std::span<const std::int64_t> k, const DirectionVector& alpha);

std::int64_t norm_squared(std::span<const std::int64_t> k);
double norm(std::span<const std::int64_t> k);
double norm(std::span<const double> v);

// Representative of {k, -k} whose first nonzero entry is positive.
IntVec canonical_sign(IntVec k);

// Integer vectors ordered by Euclidean norm, then lexicographically.
bool shorter_then_lex(const IntVec& a, const IntVec& b);

bool is_zero(std::span<const std::int64_t> k);

std::string to_string(std::span<const std::int64_t> k);
std::string to_string(std::span<const double> v);

}  // namespace torusfill
