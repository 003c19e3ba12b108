#pragma once

#include <cstdint>
#include <vector>

#include "torusfill/vector.hpp"

namespace torusfill {

// Exact integer linear algebra on small sets of integer vectors. All routines
// are fraction-free over 128-bit integers and throw ResourceError if an
// intermediate value would overflow.

using Wide = __int128;

// Determinant of the square matrix whose columns are `cols`.
Wide determinant(const std::vector<IntVec>& cols);

// Rank of the vectors over Q.
std::size_t rank(const std::vector<IntVec>& vecs);

// True when the vectors are independent and can be completed to a Z-basis of
// Z^n, i.e. the gcd of all maximal minors is 1.
bool is_primitive(const std::vector<IntVec>& vecs);

bool is_unimodular(const std::vector<IntVec>& cols);

// Inverse of the unimodular matrix whose columns are `cols`, returned as rows
// so that (inverse * v)[j] = dot(rows[j], v). Throws DomainError when the
// determinant is not +-1.
std::vector<IntVec> unimodular_inverse(const std::vector<IntVec>& cols);

}  // namespace torusfill
