#include "torusfill/integer_matrix.hpp"

#include <numeric>
#include <string>

#include "torusfill/errors.hpp"

namespace torusfill {
namespace {

Wide checked_mul(Wide a, Wide b) {
    Wide r;
    if (__builtin_mul_overflow(a, b, &r)) throw ResourceError("128-bit overflow in exact integer elimination");
    return r;
}

Wide checked_sub(Wide a, Wide b) {
    Wide r;
    if (__builtin_sub_overflow(a, b, &r)) throw ResourceError("128-bit overflow in exact integer elimination");
    return r;
}

Wide wide_abs(Wide a) { return a < 0 ? -a : a; }

Wide wide_gcd(Wide a, Wide b) {
    a = wide_abs(a);
    b = wide_abs(b);
    while (b != 0) {
        Wide t = a % b;
        a = b;
        b = t;
    }
    return a;
}

using WideMatrix = std::vector<std::vector<Wide>>;

// Bareiss elimination in place; returns the determinant of a square matrix.
Wide bareiss_det(WideMatrix m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    Wide sign = 1;
    Wide prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = checked_sub(checked_mul(m[i][j], m[k][k]), checked_mul(m[i][k], m[k][j])) / prev;
            }
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

WideMatrix rows_of_columns(const std::vector<IntVec>& cols) {
    const std::size_t n = cols.size();
    WideMatrix m(n, std::vector<Wide>(n));
    for (std::size_t j = 0; j < n; ++j) {
        if (cols[j].size() != n) throw DomainError("determinant needs a square matrix");
        for (std::size_t i = 0; i < n; ++i) m[i][j] = cols[j][i];
    }
    return m;
}

// Determinant of the submatrix built from the given rows of the columns.
Wide minor_det(const std::vector<IntVec>& vecs, const std::vector<std::size_t>& rows) {
    const std::size_t j = vecs.size();
    WideMatrix m(j, std::vector<Wide>(j));
    for (std::size_t r = 0; r < j; ++r)
        for (std::size_t c = 0; c < j; ++c) m[r][c] = vecs[c][rows[r]];
    return bareiss_det(std::move(m));
}

}  // namespace

Wide determinant(const std::vector<IntVec>& cols) { return bareiss_det(rows_of_columns(cols)); }

std::size_t rank(const std::vector<IntVec>& vecs) {
    if (vecs.empty()) return 0;
    const std::size_t n = vecs.front().size();
    WideMatrix rows;
    rows.reserve(vecs.size());
    for (const auto& v : vecs) rows.emplace_back(v.begin(), v.end());

    std::size_t r = 0;
    for (std::size_t col = 0; col < n && r < rows.size(); ++col) {
        std::size_t p = r;
        while (p < rows.size() && rows[p][col] == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[r], rows[p]);
        for (std::size_t i = r + 1; i < rows.size(); ++i) {
            if (rows[i][col] == 0) continue;
            const Wide a = rows[r][col];
            const Wide b = rows[i][col];
            Wide g = 0;
            for (std::size_t c = col; c < n; ++c) {
                rows[i][c] = checked_sub(checked_mul(rows[i][c], a), checked_mul(rows[r][c], b));
                g = wide_gcd(g, rows[i][c]);
            }
            if (g > 1)
                for (std::size_t c = col; c < n; ++c) rows[i][c] /= g;
        }
        ++r;
    }
    return r;
}

bool is_primitive(const std::vector<IntVec>& vecs) {
    if (vecs.empty()) return true;
    const std::size_t n = vecs.front().size();
    const std::size_t j = vecs.size();
    if (j > n) return false;

    // Walk all j-subsets of the n coordinate rows.
    std::vector<std::size_t> rows(j);
    std::iota(rows.begin(), rows.end(), 0);
    Wide g = 0;
    while (true) {
        g = wide_gcd(g, minor_det(vecs, rows));
        if (g == 1) return true;
        std::size_t i = j;
        while (i > 0 && rows[i - 1] == n - j + (i - 1)) --i;
        if (i == 0) break;
        ++rows[i - 1];
        for (std::size_t t = i; t < j; ++t) rows[t] = rows[t - 1] + 1;
    }
    return false;
}

bool is_unimodular(const std::vector<IntVec>& cols) {
    const Wide d = determinant(cols);
    return d == 1 || d == -1;
}

std::vector<IntVec> unimodular_inverse(const std::vector<IntVec>& cols) {
    const std::size_t n = cols.size();
    const Wide det = determinant(cols);
    if (det != 1 && det != -1) throw DomainError("matrix is not unimodular");

    const WideMatrix m = rows_of_columns(cols);
    // inverse = det * adjugate, adj[j][i] = (-1)^{i+j} minor(i, j)
    std::vector<IntVec> inv(n, IntVec(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            WideMatrix sub;
            sub.reserve(n - 1);
            for (std::size_t r = 0; r < n; ++r) {
                if (r == i) continue;
                std::vector<Wide> row;
                row.reserve(n - 1);
                for (std::size_t c = 0; c < n; ++c)
                    if (c != j) row.push_back(m[r][c]);
                sub.push_back(std::move(row));
            }
            Wide cof = bareiss_det(std::move(sub));
            if ((i + j) % 2 == 1) cof = -cof;
            cof *= det;
            if (cof > INT64_MAX || cof < INT64_MIN) throw ResourceError("adjugate entry exceeds 64 bits");
            inv[j][i] = static_cast<std::int64_t>(cof);
        }
    }
    return inv;
}

}  // namespace torusfill
