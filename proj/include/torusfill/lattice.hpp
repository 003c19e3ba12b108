#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "torusfill/enumeration.hpp"
#include "torusfill/vector.hpp"

namespace torusfill {

// Solid cylinder with axis span{alpha}:
//   { p : |p.alpha| <= axial_half, |p - (p.alpha) alpha| <= radial_half }.
struct CylinderBody {
    DirectionVector axis;
    double axial_half;
    double radial_half;
};

// Exact polar of CylinderBody(axis, a, b):
//   { p : a |p.alpha| + b |p - (p.alpha) alpha| <= 1 }.
struct DiamondBody {
    DirectionVector axis;
    double axial_half;
    double radial_half;
};

using Body = std::variant<CylinderBody, DiamondBody>;

// Successive minima lambda_1 <= ... <= lambda_n of a body with respect to Z^n,
// each with an integer witness attaining it. Witnesses are independent.
struct MinimaResult {
    std::vector<double> lambdas;
    std::vector<IntVec> witnesses;
};

// n integer columns forming a Z-basis of Z^n (determinant +-1).
struct IntegerBasis {
    std::vector<IntVec> columns;
};

// Absolute slack used for "k lies in lambda * body" comparisons.
inline constexpr double kMembershipSlack = 1e-12;

void validate(const Body& body);
std::size_t dimension(const Body& body);
const DirectionVector& axis_of(const Body& body);

// Smallest lambda with k in lambda * body (the gauge of the body at k).
double dilation_needed(const Body& body, std::span<const std::int64_t> k);
bool contains(const Body& body, std::span<const double> p, double slack = kMembershipSlack);

// Deterministic order used everywhere: dilation, then norm, then lexicographic.
bool dilation_order(const Body& body, const IntVec& a, const IntVec& b);

// All nonzero k with dilation_needed(body, k) <= lambda, in dilation order.
std::vector<IntVec> lattice_points_in(const Body& body, double lambda, std::uint64_t budget = kDefaultBudget);

MinimaResult successive_minima(const Body& body, std::uint64_t budget = kDefaultBudget);

DiamondBody polar_body(const CylinderBody& body);
CylinderBody polar_body(const DiamondBody& body);

// Cylinder with reciprocal extents (1/a, 1/b). Contains the exact polar
// DiamondBody(alpha, a, b); used where a superset of the polar suffices.
CylinderBody coreciprocal_cylinder(const CylinderBody& body);

// Products lambda_k(polar) * lambda_{n+1-k}(body) for k = 1..n.
std::vector<double> duality_check(const CylinderBody& body, std::uint64_t budget = kDefaultBudget);

// A Z-basis of Z^n whose columns all lie in (n * lambda_n) * body.
IntegerBasis extract_zbasis(const Body& body, const MinimaResult& minima, std::uint64_t budget = kDefaultBudget);

}  // namespace torusfill
