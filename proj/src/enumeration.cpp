#include "torusfill/enumeration.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "torusfill/errors.hpp"

namespace torusfill {

void AxialForm::apply(std::span<const std::int64_t> p, std::span<long double> out) const {
    const DirectionVector& a = *axis;
    const long double x = dot(p, a);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const long double along = x * a[i];
        const long double perp = static_cast<long double>(p[i]) - along;
        out[i] = axial_weight * along + radial_weight * perp;
    }
}

namespace {

constexpr std::int64_t kMaxCoefficient = std::int64_t{1} << 52;

long double inner(const std::vector<long double>& u, const std::vector<long double>& v) {
    long double s = 0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

// LLL-reduced basis of Z^n with respect to an AxialForm, with its
// Gram-Schmidt data.
class ReducedBasis {
public:
    ReducedBasis(const AxialForm& form, std::size_t n) : form_(form), n_(n) {
        unimodular_.assign(n, IntVec(n, 0));
        images_.assign(n, std::vector<long double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            unimodular_[i][i] = 1;
            refresh_image(i);
        }
    }

    std::uint64_t reduce() {
        constexpr long double kLovasz = 0.99L;
        constexpr std::uint64_t kMaxSwaps = 1'000'000;
        std::uint64_t swaps = 0;
        gram_schmidt();
        std::size_t k = 1;
        while (k < n_) {
            size_reduce(k);
            const long double mu = mu_[k][k - 1];
            if (norms_[k] >= (kLovasz - mu * mu) * norms_[k - 1]) {
                ++k;
            } else {
                std::swap(unimodular_[k], unimodular_[k - 1]);
                std::swap(images_[k], images_[k - 1]);
                gram_schmidt();
                if (++swaps > kMaxSwaps) throw ResourceError("lattice reduction did not converge");
                k = k > 1 ? k - 1 : 1;
            }
        }
        gram_schmidt();
        return swaps;
    }

    const std::vector<IntVec>& unimodular() const { return unimodular_; }
    const std::vector<std::vector<long double>>& mu() const { return mu_; }
    const std::vector<long double>& norms() const { return norms_; }

private:
    void refresh_image(std::size_t i) { form_.apply(unimodular_[i], images_[i]); }

    void gram_schmidt() {
        mu_.assign(n_, std::vector<long double>(n_, 0));
        norms_.assign(n_, 0);
        star_.assign(n_, std::vector<long double>(n_));
        for (std::size_t i = 0; i < n_; ++i) {
            star_[i] = images_[i];
            for (std::size_t j = 0; j < i; ++j) {
                mu_[i][j] = inner(images_[i], star_[j]) / norms_[j];
                for (std::size_t c = 0; c < n_; ++c) star_[i][c] -= mu_[i][j] * star_[j][c];
            }
            norms_[i] = inner(star_[i], star_[i]);
            if (!(norms_[i] > 0)) throw InvariantError("degenerate quadratic form in lattice reduction");
        }
    }

    void size_reduce(std::size_t k) {
        for (std::size_t jj = k; jj-- > 0;) {
            const long double m = inner(images_[k], star_[jj]) / norms_[jj];
            if (std::fabs(m) <= 0.5L) continue;
            const long double q = std::nearbyint(m);
            if (std::fabs(q) > static_cast<long double>(kMaxCoefficient))
                throw ResourceError("lattice reduction coefficient exceeds 2^52");
            const auto qi = static_cast<std::int64_t>(q);
            for (std::size_t c = 0; c < n_; ++c) {
                unimodular_[k][c] -= qi * unimodular_[jj][c];
                if (std::llabs(unimodular_[k][c]) > kMaxCoefficient)
                    throw ResourceError("lattice reduction coefficient exceeds 2^52");
            }
            refresh_image(k);
        }
        // Recompute row k of mu against the unchanged earlier vectors.
        star_[k] = images_[k];
        for (std::size_t j = 0; j < k; ++j) {
            mu_[k][j] = inner(images_[k], star_[j]) / norms_[j];
            for (std::size_t c = 0; c < n_; ++c) star_[k][c] -= mu_[k][j] * star_[j][c];
        }
        norms_[k] = inner(star_[k], star_[k]);
    }

    const AxialForm& form_;
    std::size_t n_;
    std::vector<IntVec> unimodular_;
    std::vector<std::vector<long double>> images_;
    std::vector<std::vector<long double>> star_;
    std::vector<std::vector<long double>> mu_;
    std::vector<long double> norms_;
};

}  // namespace

std::vector<IntVec> reduced_basis(const AxialForm& form) {
    ReducedBasis basis(form, form.axis->dim());
    basis.reduce();
    return basis.unimodular();
}

EnumerationStats enumerate_ellipsoid(const AxialForm& form, long double radius, std::uint64_t budget,
                                     const std::function<void(const IntVec&)>& visit) {
    const std::size_t n = form.axis->dim();
    if (!(radius > 0)) return {};
    if (!(form.axial_weight > 0) || !(form.radial_weight > 0)) throw DomainError("quadratic form weights must be positive");

    ReducedBasis basis(form, n);
    EnumerationStats stats;
    stats.lll_swaps = basis.reduce();

    const auto& mu = basis.mu();
    const auto& bnorm = basis.norms();
    const auto& u = basis.unimodular();
    const long double bound = radius * radius * (1 + 1e-9L) + 1e-30L;

    const auto over_budget = [&] {
        return ResourceError("lattice enumeration exceeded the budget of " + std::to_string(budget) +
                             " candidate points");
    };

    std::vector<std::int64_t> coeff(n, 0);
    std::vector<long double> partial(n + 1, 0);  // partial[i] = contribution of levels >= i
    IntVec point(n);

    // Depth-first over levels n-1 .. 0.
    std::function<void(std::size_t)> descend = [&](std::size_t level) {
        long double center = 0;
        for (std::size_t j = level + 1; j < n; ++j) center -= mu[j][level] * static_cast<long double>(coeff[j]);
        const long double rem = bound - partial[level + 1];
        if (rem < 0) return;
        const long double half = std::sqrt(rem / bnorm[level]);
        const long double lo = std::ceil(center - half);
        const long double hi = std::floor(center + half);
        if (hi < lo) return;
        if (hi - lo + 1 > static_cast<long double>(budget - stats.nodes)) throw over_budget();
        for (long double x = lo; x <= hi; x += 1) {
            if (++stats.nodes > budget) throw over_budget();
            const long double d = x - center;
            partial[level] = partial[level + 1] + bnorm[level] * d * d;
            if (partial[level] > bound) continue;
            coeff[level] = static_cast<std::int64_t>(x);
            if (level == 0) {
                bool zero = true;
                for (std::size_t c = 0; c < n; ++c) {
                    __int128 s = 0;
                    for (std::size_t i = 0; i < n; ++i) s += static_cast<__int128>(coeff[i]) * u[i][c];
                    if (s > kMaxCoefficient || s < -kMaxCoefficient)
                        throw ResourceError("lattice point coordinate exceeds 2^52");
                    point[c] = static_cast<std::int64_t>(s);
                    zero = zero && s == 0;
                }
                if (!zero) visit(point);
            } else {
                descend(level - 1);
            }
        }
        coeff[level] = 0;
    };
    descend(n - 1);
    return stats;
}

}  // namespace torusfill
