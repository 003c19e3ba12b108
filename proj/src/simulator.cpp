#include "torusfill/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "torusfill/errors.hpp"

namespace torusfill {
namespace {

constexpr std::uint64_t kMaxBaseCells = std::uint64_t{1} << 24;
constexpr int kMaxDepth = 20;
constexpr double kInsideSlack = 1e-10;
// Orbit pieces longer than this are split so that the {-1,0,1}^n translates
// of each piece reach every cell it can cover.
constexpr long double kMaxPieceLength = 0.25L;

using Point = std::array<double, 3>;

struct Segment {
    Point from{};
    Point to{};
};

struct Cell {
    std::array<std::uint32_t, 3> idx{};
    std::uint8_t level = 0;
};

long double frac(long double v) { return v - std::floor(v); }

// Squared distance from p to the segment [s.from, s.to] in R^n.
double segment_distance2(const Point& p, const Segment& s, std::size_t n) {
    double dd = 0;
    double wd = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = s.to[i] - s.from[i];
        dd += d * d;
        wd += (p[i] - s.from[i]) * d;
    }
    const double t = dd > 0 ? std::clamp(wd / dd, 0.0, 1.0) : 0.0;
    double e2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = p[i] - s.from[i] - t * (s.to[i] - s.from[i]);
        e2 += e * e;
    }
    return e2;
}

// Uncovered part of [0,1)^n as a forest of dyadic cells over a base grid.
class CoverageGrid {
public:
    CoverageGrid(std::size_t n, double delta, const CoverageOptions& options)
        : n_(n), radius_(delta), root_n_(std::sqrt(static_cast<double>(n))) {
        if (n != 2 && n != 3) throw DomainError("the coverage simulator supports n = 2 or n = 3 only");
        if (!(delta > 0 && delta < 0.5)) throw DomainError("delta must lie in (0, 1/2)");
        const double root_n = std::sqrt(static_cast<double>(n));
        const double side_count = std::ceil(2 * root_n / delta);
        if (std::pow(side_count, static_cast<double>(n)) > static_cast<double>(kMaxBaseCells)) {
            const double min_delta = 2 * root_n / std::floor(std::pow(static_cast<double>(kMaxBaseCells), 1.0 / n));
            throw DomainError("delta too small for the coverage grid; minimal admissible delta is " +
                              std::to_string(min_delta));
        }
        side_ = static_cast<std::uint32_t>(side_count);
        h_ = 1.0 / side_;
        min_diameter_ = options.min_cell_diameter > 0 ? options.min_cell_diameter
                                                      : delta / (n == 2 ? 64.0 : 16.0);
        const double base_diameter = h_ * root_n_;
        depth_ = 0;
        while (depth_ < kMaxDepth && base_diameter / std::ldexp(1.0, depth_) > min_diameter_) ++depth_;
        max_cells_ = options.max_cells;

        std::size_t total = 1;
        for (std::size_t i = 0; i < n; ++i) total *= side_;
        buckets_.resize(total);
        for (std::size_t b = 0; b < total; ++b) {
            Cell c;
            std::size_t rest = b;
            for (std::size_t i = 0; i < n; ++i) {
                c.idx[i] = static_cast<std::uint32_t>(rest % side_);
                rest /= side_;
            }
            buckets_[b].push_back(c);
        }
        remaining_ = total;
    }

    [[nodiscard]] std::uint64_t remaining() const { return remaining_; }
    [[nodiscard]] double grid_side() const { return static_cast<double>(h_); }
    [[nodiscard]] double min_cell_diameter() const { return min_diameter_; }

    // Retires every cell near `piece` that lies inside the radius-neighbourhood
    // of `axis`. Both segments are given with `piece.from` in [0,1)^n; all
    // integer translates that can reach the unit cube are tried.
    void cover(const Segment& piece, const Segment& axis) {
        const std::size_t shifts = n_ == 2 ? 9 : 27;
        for (std::size_t code = 0; code < shifts; ++code) {
            Point k{};
            std::size_t rest = code;
            for (std::size_t i = 0; i < n_; ++i) {
                k[i] = static_cast<double>(static_cast<int>(rest % 3) - 1);
                rest /= 3;
            }
            std::array<std::int64_t, 3> lo{};
            std::array<std::int64_t, 3> hi{};
            bool hit = true;
            for (std::size_t i = 0; i < n_ && hit; ++i) {
                const double a = std::min(piece.from[i], piece.to[i]) + k[i] - radius_;
                const double b = std::max(piece.from[i], piece.to[i]) + k[i] + radius_;
                if (b < 0 || a >= 1) hit = false;
                lo[i] = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(a / h_)));
                hi[i] = std::min<std::int64_t>(side_ - 1, static_cast<std::int64_t>(std::floor(b / h_)));
                if (lo[i] > hi[i]) hit = false;
            }
            if (!hit) continue;
            Segment shifted = axis;
            for (std::size_t i = 0; i < n_; ++i) {
                shifted.from[i] += k[i];
                shifted.to[i] += k[i];
            }
            Segment near = piece;
            for (std::size_t i = 0; i < n_; ++i) {
                near.from[i] += k[i];
                near.to[i] += k[i];
            }
            visit_buckets(lo, hi, near, shifted);
        }
    }

    template <typename F>
    void for_each_cell(F&& f) const {
        for (const auto& bucket : buckets_)
            for (const auto& c : bucket) f(c);
    }

    Point center(const Cell& c) const {
        const double s = h_ / std::ldexp(1.0, c.level);
        Point p{};
        for (std::size_t i = 0; i < n_; ++i) p[i] = (c.idx[i] + 0.5) * s;
        return p;
    }

    std::size_t bucket_of(const Point& p) const {
        std::size_t b = 0;
        std::size_t stride = 1;
        for (std::size_t i = 0; i < n_; ++i) {
            auto j = static_cast<std::int64_t>(std::floor(p[i] / h_));
            j = std::clamp<std::int64_t>(j, 0, side_ - 1);
            b += static_cast<std::size_t>(j) * stride;
            stride *= side_;
        }
        return b;
    }

    [[nodiscard]] std::uint32_t side_count() const { return side_; }

private:
    enum class Relation { outside, inside, partial };

    Relation classify(const Cell& c, const Segment& axis) const {
        const double s = h_ / std::ldexp(1.0, c.level);
        const double half_diag = s * root_n_ / 2;
        const double dc2 = segment_distance2(center(c), axis, n_);
        const double far = radius_ + half_diag;
        if (dc2 > far * far) return Relation::outside;
        const double inner = radius_ - kInsideSlack;
        if (inner > half_diag && dc2 <= (inner - half_diag) * (inner - half_diag)) return Relation::inside;
        const double r2 = inner * inner;
        const std::size_t corners = std::size_t{1} << n_;
        for (std::size_t m = 0; m < corners; ++m) {
            Point p{};
            for (std::size_t i = 0; i < n_; ++i) p[i] = (c.idx[i] + ((m >> i) & 1U)) * s;
            if (segment_distance2(p, axis, n_) > r2) return Relation::partial;
        }
        return Relation::inside;
    }

    void refine(const Cell& c, const Segment& axis, std::vector<Cell>& out) {
        switch (classify(c, axis)) {
            case Relation::outside:
                out.push_back(c);
                return;
            case Relation::inside:
                return;
            case Relation::partial:
                break;
        }
        if (c.level >= depth_) {
            out.push_back(c);
            return;
        }
        const std::size_t children = std::size_t{1} << n_;
        for (std::size_t m = 0; m < children; ++m) {
            Cell child;
            child.level = static_cast<std::uint8_t>(c.level + 1);
            for (std::size_t i = 0; i < n_; ++i) child.idx[i] = c.idx[i] * 2 + ((m >> i) & 1U);
            refine(child, axis, out);
        }
    }

    // Buckets whose base cell cannot meet the neighbourhood of the new piece
    // are skipped: anything of theirs inside the full axis capsule was retired
    // when the earlier pieces passed.
    void visit_buckets(const std::array<std::int64_t, 3>& lo, const std::array<std::int64_t, 3>& hi,
                       const Segment& near, const Segment& axis) {
        const double reach = radius_ + h_ * root_n_ / 2;
        std::array<std::int64_t, 3> j = lo;
        std::vector<Cell> next;
        while (true) {
            std::size_t b = 0;
            std::size_t stride = 1;
            for (std::size_t i = 0; i < n_; ++i) {
                b += static_cast<std::size_t>(j[i]) * stride;
                stride *= side_;
            }
            auto& bucket = buckets_[b];
            Point mid{};
            for (std::size_t i = 0; i < n_; ++i) mid[i] = (static_cast<double>(j[i]) + 0.5) * h_;
            if (!bucket.empty() && segment_distance2(mid, near, n_) <= reach * reach) {
                next.clear();
                for (const auto& c : bucket) refine(c, axis, next);
                remaining_ = remaining_ - bucket.size() + next.size();
                if (remaining_ > max_cells_) {
                    throw ResourceError("coverage grid exceeded the budget of " + std::to_string(max_cells_) +
                                        " cells");
                }
                bucket.swap(next);
            }
            std::size_t i = 0;
            while (i < n_ && j[i] == hi[i]) {
                j[i] = lo[i];
                ++i;
            }
            if (i == n_) break;
            ++j[i];
        }
    }

    std::size_t n_;
    double radius_;
    double root_n_;
    std::uint32_t side_ = 0;
    double h_ = 0;
    double min_diameter_ = 0;
    int depth_ = 0;
    std::uint64_t max_cells_ = 0;
    std::uint64_t remaining_ = 0;
    std::vector<std::vector<Cell>> buckets_;
};

}  // namespace

double torus_distance(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw DomainError("torus points have different dimensions");
    long double sq = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const long double d = frac(static_cast<long double>(p[i]) - q[i]);
        const long double m = std::min(d, 1 - d);
        sq += m * m;
    }
    return static_cast<double>(std::sqrt(sq));
}

CoverageResult empirical_fill_time(const DirectionVector& alpha, std::span<const double> theta0, double delta,
                                   double dt, double max_time, const CoverageOptions& options) {
    const std::size_t n = alpha.dim();
    if (theta0.size() != n) throw DomainError("starting point has the wrong dimension");
    if (!(dt > 0) || !std::isfinite(dt)) throw DomainError("time step must be positive");
    if (!(max_time >= 0) || !std::isfinite(max_time)) throw DomainError("max_time must be finite and >= 0");
    CoverageGrid grid(n, delta, options);

    Point start{};
    for (std::size_t i = 0; i < n; ++i) start[i] = frac(static_cast<long double>(theta0[i]));

    CoverageResult result{};
    result.delta = delta;
    result.time_step = dt;
    result.grid_side = grid.grid_side();
    result.max_time = max_time;
    result.min_cell_diameter = grid.min_cell_diameter();

    const auto position = [&](long double t) {
        Point p{};
        for (std::size_t i = 0; i < n; ++i) p[i] = start[i] + t * alpha[i];
        return p;
    };

    // The orbit in the universal cover is the single segment [start, position(t)].
    // Each piece is tested against the whole segment, translated with the piece,
    // so no seams appear between consecutive pieces.
    const auto cover_piece = [&](long double t0, long double t1) {
        const Point a = position(t0);
        const Point b = position(t1);
        Segment piece;
        Segment axis;
        for (std::size_t i = 0; i < n; ++i) {
            const long double shift = std::floor(a[i]);
            piece.from[i] = a[i] - shift;
            piece.to[i] = b[i] - shift;
            axis.from[i] = start[i] - shift;
            axis.to[i] = b[i] - shift;
        }
        grid.cover(piece, axis);
    };

    cover_piece(0, 0);
    const auto steps = static_cast<std::uint64_t>(std::floor(max_time / dt + 1e-9));
    std::uint64_t step = 0;
    while (grid.remaining() > 0 && step < steps) {
        const long double t0 = static_cast<long double>(step) * dt;
        ++step;
        const long double t1 = static_cast<long double>(step) * dt;
        const auto pieces = static_cast<std::uint64_t>(std::ceil((t1 - t0) / kMaxPieceLength));
        for (std::uint64_t p = 0; p < pieces; ++p) {
            cover_piece(t0 + (t1 - t0) * p / pieces, t0 + (t1 - t0) * (p + 1) / pieces);
        }
    }
    result.steps = step;
    result.uncovered_cells = grid.remaining();
    if (grid.remaining() == 0) result.fill_time = static_cast<double>(static_cast<long double>(step) * dt);
    return result;
}

DensityVerdict verify_delta_dense(const std::vector<RealVec>& points, double delta, const CoverageOptions& options) {
    if (points.empty()) throw DomainError("point set is empty");
    const std::size_t n = points.front().size();
    CoverageGrid grid(n, delta, options);

    std::vector<std::vector<std::size_t>> by_bucket(std::size_t(std::pow(grid.side_count(), n)));
    std::vector<Point> reduced;
    reduced.reserve(points.size());
    for (const auto& p : points) {
        if (p.size() != n) throw DomainError("points have mixed dimensions");
        Point q{};
        for (std::size_t i = 0; i < n; ++i) q[i] = frac(static_cast<long double>(p[i]));
        by_bucket[grid.bucket_of(q)].push_back(reduced.size());
        reduced.push_back(q);
        grid.cover(Segment{q, q}, Segment{q, q});
    }

    DensityVerdict verdict{grid.remaining() == 0, {}, 0};
    if (verdict.covered) return verdict;

    // Nearest point to a cell center, searched over buckets within 2 delta.
    const auto side = static_cast<std::int64_t>(grid.side_count());
    const auto reach = static_cast<std::int64_t>(std::ceil(2 * delta / grid.grid_side())) + 1;
    const double window = 2 * delta;
    const auto nearest = [&](const Point& c) {
        double best = window;
        std::array<std::int64_t, 3> base{};
        for (std::size_t i = 0; i < n; ++i) base[i] = static_cast<std::int64_t>(std::floor(c[i] / grid.grid_side()));
        std::array<std::int64_t, 3> off{};
        off.fill(-reach);
        RealVec cv(n);
        RealVec pv(n);
        for (std::size_t i = 0; i < n; ++i) cv[i] = static_cast<double>(c[i]);
        while (true) {
            std::size_t b = 0;
            std::size_t stride = 1;
            for (std::size_t i = 0; i < n; ++i) {
                const std::int64_t j = ((base[i] + off[i]) % side + side) % side;
                b += static_cast<std::size_t>(j) * stride;
                stride *= static_cast<std::size_t>(side);
            }
            for (std::size_t idx : by_bucket[b]) {
                for (std::size_t i = 0; i < n; ++i) pv[i] = static_cast<double>(reduced[idx][i]);
                best = std::min(best, torus_distance(cv, pv));
            }
            std::size_t i = 0;
            while (i < n && off[i] == reach) off[i++] = -reach;
            if (i == n) break;
            ++off[i];
        }
        return best;
    };

    constexpr std::uint64_t kMaxProbes = 200'000;
    std::uint64_t probes = 0;
    double best = -1;
    grid.for_each_cell([&](const Cell& c) {
        if (probes++ >= kMaxProbes) return;
        const Point mid = grid.center(c);
        const double d = nearest(mid);
        if (d > best) {
            best = d;
            verdict.counterexample.assign(n, 0);
            for (std::size_t i = 0; i < n; ++i) verdict.counterexample[i] = static_cast<double>(mid[i]);
        }
    });
    verdict.nearest_distance = best;
    return verdict;
}

ResonantReference resonant_reference(int q) {
    if (q < 1) throw DomainError("q must be a positive integer");
    const double len = std::sqrt(static_cast<double>(q) * q + 1);
    const double v[2] = {static_cast<double>(q), 1.0};
    return ResonantReference{DirectionVector::normalize(v), 1 / (2 * len), len};
}

}  // namespace torusfill
