#pragma once

#include <cstdint>
#include <vector>

#include "torusfill/diophantine.hpp"
#include "torusfill/errors.hpp"
#include "torusfill/lattice.hpp"

namespace torusfill {

double factorial(int n);

// N*(delta) = (1 + n^2 n!) / delta, the critical truncation order.
double critical_cutoff(int n, double delta);

// C(n, tau) = (1 + n^2 n!)^(tau + 1).
double bound_constant(int n, double tau);

// C(n, tau) / (gamma delta^tau): every direction in D^1(tau, gamma, N*(delta))
// fills the torus to within delta before this time.
double filling_time_bound(int n, double tau, double gamma, double delta);

// The direction fails the truncated Diophantine hypothesis.
class HypothesisError : public DomainError {
public:
    HypothesisError(const std::string& what, ViolationWitness witness)
        : DomainError(what), witness_(std::move(witness)) {}
    [[nodiscard]] const ViolationWitness& witness() const noexcept { return witness_; }

private:
    ViolationWitness witness_;
};

// Z-basis {w_1, ..., w_n} of Z^n adapted to alpha: w_j = x_j * omega_j with
//   (i)   sqrt(3)/2 < x_j <= n n! N^tau / gamma,
//   (ii)  |alpha - omega_j| <= n n! / (x_j (N - 1)),
//   (iii) det[w_1 ... w_n] = +-1.
// Immutable once built.
struct AdaptedBasis {
    DirectionVector alpha;
    DioParams params;
    std::vector<double> multipliers;  // x_j = w_j . alpha
    std::vector<RealVec> directions;  // omega_j = w_j / x_j
    IntegerBasis integer_basis;       // w_j

    // Construction diagnostics.
    CylinderBody cylinder;           // C = cyl(alpha, N^tau/gamma, 1/(N-1))
    CylinderBody coreciprocal;       // C* = cyl(alpha, gamma/N^tau, N-1)
    MinimaResult cylinder_minima;    // successive minima of C
};

struct BasisInvariantReport {
    double multiplier_lower;              // sqrt(3)/2
    double multiplier_upper;              // n n! N^tau / gamma
    std::vector<double> deviations;       // |alpha - omega_j|
    std::vector<double> deviation_bounds; // n n! / (x_j (N-1))
    long long determinant;
    bool multipliers_ok;
    bool deviations_ok;
    bool unimodular;
    [[nodiscard]] bool all_ok() const noexcept { return multipliers_ok && deviations_ok && unimodular; }
};

// Builds the adapted basis. Requires a finite cutoff N > 1 + n^2 n! and alpha
// in D^1(tau, gamma, N) (HypothesisError otherwise). The lattice-point
// exclusion Z^n cap C* = {0} and lambda_n(C) < n! are verified on the way and
// raise InvariantError if they ever fail.
AdaptedBasis adapted_basis(const DirectionVector& alpha, const DioParams& params,
                           std::uint64_t budget = kDefaultBudget);

// Recomputes the three invariants from scratch.
BasisInvariantReport check_invariants(const AdaptedBasis& basis);

struct FillingCertificate {
    RealVec theta;            // target, reduced mod 1
    RealVec coords;           // t_j in [0, 1)
    double time;              // T = sum t_j x_j
    double endpoint_distance; // torus distance |T alpha - theta|
    double distance_bound;    // sum t_j x_j |alpha - omega_j|
    double multiplier_sum;    // sum x_j, an upper bound for T
    double bound;             // C(n, tau) / (gamma delta^tau)
    double delta;
    double cutoff_used;       // N of the basis
    double critical_cutoff;   // N*(delta)
    bool guarantee_applies;   // N >= N*(delta): endpoint_distance < delta is guaranteed
};

// Time T at which the orbit t -> t alpha started at 0 reaches within delta of
// theta. theta = sum t_j w_j mod Z^n is solved exactly with the integer
// inverse of the basis matrix; T = sum t_j x_j.
FillingCertificate hitting_time(const AdaptedBasis& basis, std::span<const double> theta, double delta);

}  // namespace torusfill
