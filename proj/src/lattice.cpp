#include "torusfill/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <string>

#include "torusfill/errors.hpp"
#include "torusfill/integer_matrix.hpp"

namespace torusfill {
namespace {

constexpr std::int64_t kMaxBasisEntry = std::int64_t{1} << 30;
constexpr std::uint64_t kMaxBacktrackNodes = 10'000'000;

struct Extents {
    const DirectionVector& axis;
    double axial;
    double radial;
    bool cylinder;
};

Extents extents(const Body& body) {
    return std::visit(
        [](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            return Extents{b.axis, b.axial_half, b.radial_half, std::is_same_v<T, CylinderBody>};
        },
        body);
}

// Ellipsoid {q <= radius^2} that contains lambda * body.
std::pair<AxialForm, long double> enclosing_form(const Body& body, double lambda) {
    const Extents e = extents(body);
    if (e.cylinder) {
        // q = (x/a)^2 + (|y|/b)^2 <= 2 max(|x|/a, |y|/b)^2
        return {AxialForm{&e.axis, 1.0L / e.axial, 1.0L / e.radial}, std::sqrt(2.0L) * lambda};
    }
    // q = (a x)^2 + (b |y|)^2 <= (a|x| + b|y|)^2
    return {AxialForm{&e.axis, static_cast<long double>(e.axial), static_cast<long double>(e.radial)},
            static_cast<long double>(lambda)};
}

long double gauge(const Extents& e, long double x, long double y) {
    if (e.cylinder) return std::max(std::fabs(x) / e.axial, y / e.radial);
    return e.axial * std::fabs(x) + e.radial * y;
}

struct Scored {
    IntVec k;
    double dilation;
    std::int64_t norm2;
};

bool scored_less(const Scored& a, const Scored& b) {
    if (a.dilation != b.dilation) return a.dilation < b.dilation;
    if (a.norm2 != b.norm2) return a.norm2 < b.norm2;
    return a.k < b.k;
}

std::vector<Scored> scored_points(const Body& body, double lambda, std::uint64_t budget) {
    if (!(lambda > 0) || !std::isfinite(lambda)) throw DomainError("dilation factor must be positive and finite");
    validate(body);
    std::vector<Scored> out;
    auto [form, radius] = enclosing_form(body, lambda);
    enumerate_ellipsoid(form, radius, budget, [&](const IntVec& k) {
        const double d = dilation_needed(body, k);
        if (d <= lambda + kMembershipSlack) out.push_back({k, d, norm_squared(k)});
    });
    std::sort(out.begin(), out.end(), scored_less);
    return out;
}

}  // namespace

void validate(const Body& body) {
    const Extents e = extents(body);
    if (!(e.axial > 0) || !(e.radial > 0) || !std::isfinite(e.axial) || !std::isfinite(e.radial)) {
        throw DomainError("body half-extents must be positive and finite");
    }
}

std::size_t dimension(const Body& body) { return extents(body).axis.dim(); }

const DirectionVector& axis_of(const Body& body) {
    return std::visit([](const auto& b) -> const DirectionVector& { return b.axis; }, body);
}

double dilation_needed(const Body& body, std::span<const std::int64_t> k) {
    const Extents e = extents(body);
    if (k.size() != e.axis.dim()) throw DomainError("lattice vector dimension does not match the body");
    if (is_zero(k)) throw DomainError("dilation of the zero vector is undefined");
    return static_cast<double>(gauge(e, dot(k, e.axis), perp_norm(k, e.axis)));
}

bool contains(const Body& body, std::span<const double> p, double slack) {
    const Extents e = extents(body);
    long double x = 0;
    for (std::size_t i = 0; i < p.size(); ++i) x += static_cast<long double>(p[i]) * e.axis[i];
    long double sq = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const long double y = p[i] - x * e.axis[i];
        sq += y * y;
    }
    const long double y = std::sqrt(sq);
    if (e.cylinder) return std::fabs(x) <= e.axial + slack && y <= e.radial + slack;
    return gauge(e, x, y) <= 1 + slack;
}

bool dilation_order(const Body& body, const IntVec& a, const IntVec& b) {
    return scored_less({a, dilation_needed(body, a), norm_squared(a)}, {b, dilation_needed(body, b), norm_squared(b)});
}

std::vector<IntVec> lattice_points_in(const Body& body, double lambda, std::uint64_t budget) {
    auto scored = scored_points(body, lambda, budget);
    std::vector<IntVec> out;
    out.reserve(scored.size());
    for (auto& s : scored) out.push_back(std::move(s.k));
    return out;
}

MinimaResult successive_minima(const Body& body, std::uint64_t budget) {
    validate(body);
    const std::size_t n = dimension(body);

    // The reduced basis gives n independent vectors, so its largest dilation
    // bounds lambda_n. Start from the smallest and grow until n independent
    // vectors appear; every point below the final radius has been seen, so
    // the greedy scan is exact.
    auto [form, unused] = enclosing_form(body, 1.0);
    (void)unused;
    double upper = 0;
    double lower = INFINITY;
    for (const auto& v : reduced_basis(form)) {
        const double d = dilation_needed(body, v);
        upper = std::max(upper, d);
        lower = std::min(lower, d);
    }

    double radius = lower;
    while (true) {
        const auto points = scored_points(body, radius, budget);
        MinimaResult result;
        for (const auto& p : points) {
            result.witnesses.push_back(canonical_sign(p.k));
            if (rank(result.witnesses) == result.witnesses.size()) {
                result.lambdas.push_back(p.dilation);
                if (result.lambdas.size() == n) return result;
            } else {
                result.witnesses.pop_back();
            }
        }
        if (radius >= upper) {
            throw InvariantError("reduced basis bound did not yield n independent lattice vectors");
        }
        radius = std::min(2 * radius, upper);
    }
}

DiamondBody polar_body(const CylinderBody& body) {
    validate(body);
    return DiamondBody{body.axis, body.axial_half, body.radial_half};
}

CylinderBody polar_body(const DiamondBody& body) {
    validate(body);
    return CylinderBody{body.axis, body.axial_half, body.radial_half};
}

CylinderBody coreciprocal_cylinder(const CylinderBody& body) {
    validate(body);
    return CylinderBody{body.axis, 1.0 / body.axial_half, 1.0 / body.radial_half};
}

std::vector<double> duality_check(const CylinderBody& body, std::uint64_t budget) {
    const MinimaResult primal = successive_minima(body, budget);
    const MinimaResult dual = successive_minima(polar_body(body), budget);
    const std::size_t n = primal.lambdas.size();
    std::vector<double> products(n);
    for (std::size_t k = 0; k < n; ++k) products[k] = dual.lambdas[k] * primal.lambdas[n - 1 - k];
    return products;
}

IntegerBasis extract_zbasis(const Body& body, const MinimaResult& minima, std::uint64_t budget) {
    const std::size_t n = dimension(body);
    if (minima.lambdas.size() != n) throw DomainError("minima do not match the body dimension");
    const double reach = static_cast<double>(n) * minima.lambdas.back();

    // The witnesses go first, so a unimodular witness set comes back as is.
    // The remaining points follow in dilation order, one per +-pair.
    std::vector<IntVec> candidates;
    std::set<IntVec> seen;
    bool dropped = false;
    const auto offer = [&](const IntVec& raw) {
        IntVec k = canonical_sign(raw);
        const bool small = std::all_of(k.begin(), k.end(), [](std::int64_t v) { return std::llabs(v) <= kMaxBasisEntry; });
        if (!small) {
            dropped = true;
        } else if (seen.insert(k).second) {
            candidates.push_back(std::move(k));
        }
    };
    for (const auto& w : minima.witnesses) {
        if (w.size() != n || is_zero(w)) throw DomainError("minima witnesses do not match the body dimension");
        if (dilation_needed(body, w) <= reach + kMembershipSlack) offer(w);
    }
    for (const auto& k : lattice_points_in(body, reach, budget)) offer(k);

    // Greedy: extend by the first candidate that keeps the set primitive.
    std::vector<IntVec> chosen;
    for (const auto& k : candidates) {
        chosen.push_back(k);
        if (is_primitive(chosen)) {
            if (chosen.size() == n) return IntegerBasis{chosen};
        } else {
            chosen.pop_back();
        }
    }

    // Backtracking over candidate subsets in order; any subset of a basis is
    // primitive, so pruning on primitivity loses nothing.
    std::uint64_t nodes = 0;
    chosen.clear();
    std::function<bool(std::size_t)> search = [&](std::size_t from) {
        if (chosen.size() == n) return true;
        for (std::size_t i = from; i + (n - chosen.size()) <= candidates.size(); ++i) {
            if (++nodes > kMaxBacktrackNodes) return false;
            chosen.push_back(candidates[i]);
            if (is_primitive(chosen) && search(i + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    if (search(0)) return IntegerBasis{chosen};
    if (dropped) throw ResourceError("basis candidates exceed the 2^30 entry bound");
    throw InvariantError("no Z-basis found within n * lambda_n of the body");
}

}  // namespace torusfill
