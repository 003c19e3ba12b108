#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "torusfill/vector.hpp"

namespace torusfill {

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

// Quadratic form q(p) = (w_a * p.alpha)^2 + (w_r * |p_perp|)^2 where p_perp is
// the component of p orthogonal to the axis alpha. Every body in this library
// (cylinders and their polars) is sandwiched by a sublevel set of such a form.
struct AxialForm {
    const DirectionVector* axis;
    long double axial_weight;
    long double radial_weight;

    // Image of p under the linear map whose squared norm is q(p).
    void apply(std::span<const std::int64_t> p, std::span<long double> out) const;
};

struct EnumerationStats {
    std::uint64_t nodes = 0;
    std::uint64_t lll_swaps = 0;
};

// Columns of a unimodular matrix whose images under the form are LLL-reduced.
// Their form values bound the successive minima of any body sandwiched by it.
std::vector<IntVec> reduced_basis(const AxialForm& form);

// Calls `visit` for every nonzero k in Z^n with q(k) <= radius^2 (up to a
// relative slack of 1e-9, so callers must filter by their exact gauge).
// The lattice basis is LLL-reduced with respect to q before a Fincke-Pohst
// depth-first search, so the cost tracks the number of points found rather
// than the size of a bounding box. Throws ResourceError when the search tree
// exceeds `budget` nodes.
EnumerationStats enumerate_ellipsoid(const AxialForm& form, long double radius, std::uint64_t budget,
                                     const std::function<void(const IntVec&)>& visit);

}  // namespace torusfill
