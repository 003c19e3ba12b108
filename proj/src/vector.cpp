#include "torusfill/vector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "torusfill/errors.hpp"

namespace torusfill {

DirectionVector::DirectionVector(RealVec coords) : coords_(std::move(coords)) {
    if (coords_.size() < 2) {
        throw DomainError("direction vector needs dimension >= 2");
    }
    for (double c : coords_) {
        if (!std::isfinite(c)) throw DomainError("direction vector has a non-finite entry");
    }
    const double len = norm(coords_);
    if (std::abs(len - 1.0) > kUnitTolerance) {
        throw DomainError("direction vector " + to_string(coords_) + " has norm " +
                          std::to_string(len) + ", expected 1 (use normalize)");
    }
}

DirectionVector DirectionVector::normalize(std::span<const double> v) {
    long double sq = 0;
    for (double x : v) sq += static_cast<long double>(x) * x;
    if (!(sq > 0) || !std::isfinite(static_cast<double>(sq))) {
        throw DomainError("cannot normalize the zero vector");
    }
    const long double len = std::sqrt(sq);
    RealVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<double>(v[i] / len);
    return DirectionVector(std::move(out));
}

long double dot(std::span<const std::int64_t> k, const DirectionVector& alpha) {
    long double s = 0;
    for (std::size_t i = 0; i < k.size(); ++i) s += static_cast<long double>(k[i]) * alpha[i];
    return s;
}

long double perp_norm(std::span<const std::int64_t> k, const DirectionVector& alpha) {
    const long double x = dot(k, alpha);
    long double sq = 0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        const long double y = static_cast<long double>(k[i]) - x * alpha[i];
        sq += y * y;
    }
    return std::sqrt(sq);
}

std::int64_t norm_squared(std::span<const std::int64_t> k) {
    std::int64_t s = 0;
    for (auto v : k) s += v * v;
    return s;
}

double norm(std::span<const std::int64_t> k) {
    long double s = 0;
    for (auto v : k) s += static_cast<long double>(v) * v;
    return static_cast<double>(std::sqrt(s));
}

double norm(std::span<const double> v) {
    long double s = 0;
    for (double x : v) s += static_cast<long double>(x) * x;
    return static_cast<double>(std::sqrt(s));
}

IntVec canonical_sign(IntVec k) {
    auto it = std::find_if(k.begin(), k.end(), [](std::int64_t v) { return v != 0; });
    if (it != k.end() && *it < 0) {
        for (auto& v : k) v = -v;
    }
    return k;
}

bool shorter_then_lex(const IntVec& a, const IntVec& b) {
    const auto na = norm_squared(a);
    const auto nb = norm_squared(b);
    if (na != nb) return na < nb;
    return a < b;
}

bool is_zero(std::span<const std::int64_t> k) {
    return std::all_of(k.begin(), k.end(), [](std::int64_t v) { return v == 0; });
}

std::string to_string(std::span<const std::int64_t> k) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < k.size(); ++i) os << (i ? "," : "") << k[i];
    os << ')';
    return os.str();
}

std::string to_string(std::span<const double> v) {
    std::ostringstream os;
    os.precision(10);
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ')';
    return os.str();
}

}  // namespace torusfill
