#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "torusfill/vector.hpp"

namespace torusfill {

// Quotient metric on T^n = R^n / Z^n.
double torus_distance(std::span<const double> p, std::span<const double> q);

// Resolution of the coverage certificate. A cell of the base grid (side
// h <= delta / (2 sqrt n)) that is only partly inside the delta-neighbourhood
// of an orbit piece is split into 2^n children, down to cells whose diameter
// is at most `min_cell_diameter`. A point set that is (delta - min_cell_diameter)
// -dense is always certified; coarser resolutions are cheaper but may miss
// coverage that relies on several strands at once.
struct CoverageOptions {
    double min_cell_diameter = 0;  // 0 selects delta/64 for n = 2 and delta/16 for n = 3
    std::uint64_t max_cells = 40'000'000;
};

struct CoverageResult {
    double delta;
    double time_step;
    double grid_side;                 // h of the base grid
    std::optional<double> fill_time;  // multiple of time_step, absent when the budget ran out
    std::uint64_t uncovered_cells;    // leaves still uncovered when the run stopped
    double max_time;
    std::uint64_t steps;
    double min_cell_diameter;
};

// Marches theta(t) = theta0 + t alpha mod 1 in steps of dt and reports the
// first step at which the orbit segment [0, t] is certified delta-dense.
// Certification is sound for the continuous orbit: a cell is retired only
// when all its corners lie within delta of the orbit segment itself. Requires
// n in {2, 3}, dt > 0 and delta in (0, 1/2).
CoverageResult empirical_fill_time(const DirectionVector& alpha, std::span<const double> theta0, double delta,
                                   double dt, double max_time, const CoverageOptions& options = {});

struct DensityVerdict {
    bool covered;
    // On failure, the center of an uncovered cell that is farthest from the
    // point set, and its distance to the nearest point (a lower bound when no
    // point lies within 2 delta).
    RealVec counterexample;
    double nearest_distance;
};

// Certifies that every closed delta-ball on T^n contains one of the points.
DensityVerdict verify_delta_dense(const std::vector<RealVec>& points, double delta,
                                  const CoverageOptions& options = {});

struct ResonantReference {
    DirectionVector alpha;  // N(q, 1)
    double delta;           // 1 / (2 sqrt(q^2 + 1))
    double expected_time;   // sqrt(q^2 + 1)
};

// Relative margin used when simulating the resonant reference: the radius is
// delta * (1 + margin) and leaves are refined down to margin * delta.
inline constexpr double kResonantMargin = 1e-3;

// Resonant flow on T^2 whose closed orbit of length sqrt(q^2+1) fills the
// torus exactly to within 1/(2 sqrt(q^2+1)).
ResonantReference resonant_reference(int q);

}  // namespace torusfill
