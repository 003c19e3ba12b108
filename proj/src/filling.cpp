#include "torusfill/filling.hpp"

#include <cmath>
#include <string>

#include "torusfill/integer_matrix.hpp"
#include "torusfill/simulator.hpp"

namespace torusfill {
namespace {

void require_delta(double delta) {
    if (!(delta > 0 && delta < 0.5)) throw DomainError("delta must lie in (0, 1/2)");
}

void require_dimension(int n) {
    if (n < 2 || n > 20) throw DomainError("dimension n must lie in [2, 20]");
}

double frac(long double v) { return static_cast<double>(v - std::floor(v)); }

}  // namespace

double factorial(int n) {
    double f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double critical_cutoff(int n, double delta) {
    require_dimension(n);
    require_delta(delta);
    return (1 + n * n * factorial(n)) / delta;
}

double bound_constant(int n, double tau) {
    require_dimension(n);
    if (!(tau >= n - 1) || !std::isfinite(tau)) throw DomainError("exponent tau must satisfy tau >= n - 1");
    return std::pow(1 + n * n * factorial(n), tau + 1);
}

double filling_time_bound(int n, double tau, double gamma, double delta) {
    if (!(gamma > 0 && gamma < 1)) throw DomainError("gamma must lie in (0, 1)");
    require_delta(delta);
    return bound_constant(n, tau) / (gamma * std::pow(delta, tau));
}

AdaptedBasis adapted_basis(const DirectionVector& alpha, const DioParams& params, std::uint64_t budget) {
    params.validate();
    if (!params.cutoff) throw DomainError("the adapted basis needs a finite cutoff N");
    const int n = params.n;
    const double cutoff = *params.cutoff;
    const double nfact = factorial(n);
    if (!(cutoff > 1 + n * n * nfact)) {
        throw DomainError("cutoff N = " + std::to_string(cutoff) + " must exceed 1 + n^2 n! = " +
                          std::to_string(1 + n * n * nfact));
    }
    const CheckResult check = check_truncated(alpha, params, Enumeration::slab, budget);
    if (!check.passed()) {
        throw HypothesisError("direction violates the truncated Diophantine condition at k = " +
                                  to_string(check.violation->k),
                              *check.violation);
    }

    const double axial = std::pow(cutoff, params.tau) / params.gamma;
    const CylinderBody cylinder{alpha, axial, 1.0 / (cutoff - 1)};
    const CylinderBody coreciprocal = coreciprocal_cylinder(cylinder);

    // Z^n cap C* = {0}, i.e. lambda_1(C*) > 1.
    const auto inside = lattice_points_in(coreciprocal, 1.0, budget);
    if (!inside.empty()) {
        throw InvariantError("coreciprocal cylinder contains the lattice point " + to_string(inside.front()) +
                             " although the Diophantine check passed");
    }

    MinimaResult minima = successive_minima(cylinder, budget);
    if (!(minima.lambdas.back() < nfact)) {
        throw InvariantError("lambda_n(C) = " + std::to_string(minima.lambdas.back()) + " is not below n!");
    }

    IntegerBasis zbasis = extract_zbasis(cylinder, minima, budget);

    AdaptedBasis out{alpha, params, {}, {}, {}, cylinder, coreciprocal, std::move(minima)};
    for (auto col : zbasis.columns) {
        long double x = dot(col, alpha);
        if (x < 0) {
            for (auto& v : col) v = -v;
            x = -x;
        }
        RealVec omega(col.size());
        for (std::size_t i = 0; i < col.size(); ++i) omega[i] = static_cast<double>(col[i] / x);
        out.multipliers.push_back(static_cast<double>(x));
        out.directions.push_back(std::move(omega));
        out.integer_basis.columns.push_back(std::move(col));
    }

    const BasisInvariantReport report = check_invariants(out);
    if (!report.all_ok()) throw InvariantError("constructed basis violates the adapted-basis invariants");
    return out;
}

BasisInvariantReport check_invariants(const AdaptedBasis& basis) {
    const int n = basis.params.n;
    const double cutoff = *basis.params.cutoff;
    const double nn = n * factorial(n);

    BasisInvariantReport r{};
    r.multiplier_lower = std::sqrt(3.0) / 2;
    r.multiplier_upper = nn * std::pow(cutoff, basis.params.tau) / basis.params.gamma;
    r.multipliers_ok = true;
    r.deviations_ok = true;
    for (std::size_t j = 0; j < basis.multipliers.size(); ++j) {
        const auto& w = basis.integer_basis.columns[j];
        const long double x = dot(w, basis.alpha);
        const double xj = basis.multipliers[j];
        r.multipliers_ok = r.multipliers_ok && xj > r.multiplier_lower && xj <= r.multiplier_upper * (1 + 1e-12) &&
                           std::fabs(static_cast<double>(x) - xj) <= 1e-12 * std::fabs(xj);
        // |alpha - omega_j| = |y_j| / x_j with y_j the part of w_j orthogonal to alpha.
        const double deviation = static_cast<double>(perp_norm(w, basis.alpha) / x);
        const double bound = nn / (xj * (cutoff - 1));
        r.deviations.push_back(deviation);
        r.deviation_bounds.push_back(bound);
        r.deviations_ok = r.deviations_ok && deviation <= bound * (1 + 1e-12);
    }
    const Wide det = determinant(basis.integer_basis.columns);
    r.determinant = static_cast<long long>(det);
    r.unimodular = det == 1 || det == -1;
    return r;
}

FillingCertificate hitting_time(const AdaptedBasis& basis, std::span<const double> theta, double delta) {
    require_delta(delta);
    const std::size_t n = basis.alpha.dim();
    if (theta.size() != n) throw DomainError("target point has the wrong dimension");
    const auto inverse = unimodular_inverse(basis.integer_basis.columns);

    FillingCertificate cert{};
    cert.theta.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(theta[i])) throw DomainError("target point has a non-finite entry");
        cert.theta[i] = frac(theta[i]);
    }

    // t = frac(M^-1 theta). Each term a * theta_i is split into its rounded
    // product and exact error so the fractional part survives large entries.
    cert.coords.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        long double acc = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto a = static_cast<long double>(inverse[j][i]);
            const long double th = cert.theta[i];
            const long double p = a * th;
            const long double err = std::fmal(a, th, -p);
            acc += (p - std::floor(p)) + err;
        }
        double t = frac(acc);
        if (t >= 1.0) t = 0.0;
        cert.coords[j] = t;
    }

    long double time = 0;
    long double distance_bound = 0;
    long double mult_sum = 0;
    const auto report = check_invariants(basis);
    for (std::size_t j = 0; j < n; ++j) {
        const long double tx = static_cast<long double>(cert.coords[j]) * basis.multipliers[j];
        time += tx;
        distance_bound += tx * report.deviations[j];
        mult_sum += basis.multipliers[j];
    }
    cert.time = static_cast<double>(time);
    cert.distance_bound = static_cast<double>(distance_bound);
    cert.multiplier_sum = static_cast<double>(mult_sum);

    RealVec endpoint(n);
    for (std::size_t i = 0; i < n; ++i) endpoint[i] = frac(time * basis.alpha[i]);
    cert.endpoint_distance = torus_distance(endpoint, cert.theta);

    cert.delta = delta;
    cert.cutoff_used = *basis.params.cutoff;
    cert.critical_cutoff = critical_cutoff(basis.params.n, delta);
    cert.bound = filling_time_bound(basis.params.n, basis.params.tau, basis.params.gamma, delta);
    cert.guarantee_applies = cert.cutoff_used >= cert.critical_cutoff * (1 - 1e-12);
    return cert;
}

}  // namespace torusfill
