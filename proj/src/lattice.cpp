#include "fano/lattice.hpp"

#include <cstdlib>
#include <numeric>
#include <utility>

namespace fano {

namespace {

long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw Error("integer overflow in lattice arithmetic");
    return r;
}

long long checked_add(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r)) throw Error("integer overflow in lattice arithmetic");
    return r;
}

// row_i <- a*row_i + b*row_j ; row_j <- c*row_i + d*row_j  (with ad - bc = +-1)
void combine_rows(IntMat& m, std::size_t i, std::size_t j, long long a, long long b, long long c,
                  long long d) {
    for (std::size_t k = 0; k < m[i].size(); ++k) {
        long long x = m[i][k], y = m[j][k];
        m[i][k] = checked_add(checked_mul(a, x), checked_mul(b, y));
        m[j][k] = checked_add(checked_mul(c, x), checked_mul(d, y));
    }
}

long long ext_gcd(long long a, long long b, long long& x, long long& y) {
    if (b == 0) {
        x = a >= 0 ? 1 : -1;
        y = 0;
        return std::llabs(a);
    }
    long long x1, y1;
    long long g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

}  // namespace

long long gcd_all(const IntVec& v) {
    long long g = 0;
    for (long long x : v) g = std::gcd(g, std::llabs(x));
    return g;
}

long long det(const IntMat& square) {
    std::size_t n = square.size();
    if (n == 0) return 1;
    IntMat a = square;
    long long sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                __int128 v = static_cast<__int128>(a[i][j]) * a[k][k] -
                             static_cast<__int128>(a[i][k]) * a[k][j];
                v /= prev;
                a[i][j] = static_cast<long long>(v);
            }
        }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

IntMat transpose(const IntMat& a) {
    if (a.empty()) return {};
    IntMat t(a[0].size(), IntVec(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

IntMat multiply(const IntMat& a, const IntMat& b) {
    std::size_t inner = b.size();
    std::size_t cols = inner ? b[0].size() : 0;
    IntMat c(a.size(), IntVec(cols, 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < inner; ++k)
            for (std::size_t j = 0; j < cols; ++j)
                c[i][j] = checked_add(c[i][j], checked_mul(a[i][k], b[k][j]));
    return c;
}

IntMat identity(std::size_t n) {
    IntMat m(n, IntVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

IntMat integer_left_kernel(const IntMat& b, std::size_t* rank_out) {
    std::size_t m = b.size();
    std::size_t ncols = m ? b[0].size() : 0;
    IntMat aug(m, IntVec(ncols + m, 0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < ncols; ++j) aug[i][j] = b[i][j];
        aug[i][ncols + i] = 1;
    }
    std::size_t row = 0;
    for (std::size_t col = 0; col < ncols && row < m; ++col) {
        for (std::size_t i = row + 1; i < m; ++i) {
            if (aug[i][col] == 0) continue;
            long long x, y;
            long long p = aug[row][col], q = aug[i][col];
            long long g = ext_gcd(p, q, x, y);
            // [x y; -q/g p/g] has determinant 1
            combine_rows(aug, row, i, x, y, -q / g, p / g);
        }
        if (aug[row][col] != 0) {
            if (aug[row][col] < 0)
                for (auto& v : aug[row]) v = -v;
            for (std::size_t i = 0; i < row; ++i) {
                long long f = aug[i][col] / aug[row][col];
                if (aug[i][col] - f * aug[row][col] < 0) --f;
                if (f != 0)
                    for (std::size_t k = 0; k < aug[i].size(); ++k)
                        aug[i][k] = checked_add(aug[i][k], -checked_mul(f, aug[row][k]));
            }
            ++row;
        }
    }
    if (rank_out) *rank_out = row;
    IntMat kernel;
    for (std::size_t i = row; i < m; ++i) kernel.emplace_back(aug[i].begin() + ncols, aug[i].end());
    return kernel;
}

IntVec smith_diagonal(IntMat a) {
    std::size_t rows = a.size();
    std::size_t cols = rows ? a[0].size() : 0;
    IntVec diag;
    std::size_t t = 0;
    while (t < rows && t < cols) {
        // pivot: smallest nonzero absolute entry in the trailing block
        long long best = 0;
        std::size_t pi = t, pj = t;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (a[i][j] != 0 && (best == 0 || std::llabs(a[i][j]) < best)) {
                    best = std::llabs(a[i][j]);
                    pi = i;
                    pj = j;
                }
        if (best == 0) break;
        std::swap(a[t], a[pi]);
        for (auto& r : a) std::swap(r[t], r[pj]);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                long long f = a[i][t] / a[t][t];
                if (f != 0)
                    for (std::size_t j = t; j < cols; ++j)
                        a[i][j] = checked_add(a[i][j], -checked_mul(f, a[t][j]));
                if (a[i][t] != 0) {
                    std::swap(a[t], a[i]);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                long long f = a[t][j] / a[t][t];
                if (f != 0)
                    for (std::size_t i = t; i < rows; ++i)
                        a[i][j] = checked_add(a[i][j], -checked_mul(f, a[i][t]));
                if (a[t][j] != 0) {
                    for (auto& r : a) std::swap(r[t], r[j]);
                    clean = false;
                }
            }
            if (clean) {
                // divisibility of the trailing block
                for (std::size_t i = t + 1; i < rows && clean; ++i)
                    for (std::size_t j = t + 1; j < cols; ++j)
                        if (a[i][j] % a[t][t] != 0) {
                            for (std::size_t k = t; k < cols; ++k)
                                a[t][k] = checked_add(a[t][k], a[i][k]);
                            clean = false;
                            break;
                        }
            }
        }
        diag.push_back(std::llabs(a[t][t]));
        ++t;
    }
    return diag;
}

IntMat unimodular_inverse(const IntMat& a) {
    std::size_t n = a.size();
    long long d = det(a);
    if (std::llabs(d) != 1) throw Error("matrix is not unimodular");
    // adjugate / det, via cofactors (sizes here are tiny)
    IntMat inv(n, IntVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            IntMat minor;
            for (std::size_t r = 0; r < n; ++r) {
                if (r == j) continue;
                IntVec row;
                for (std::size_t c = 0; c < n; ++c)
                    if (c != i) row.push_back(a[r][c]);
                minor.push_back(row);
            }
            long long cof = det(minor) * (((i + j) % 2) ? -1 : 1);
            inv[i][j] = cof * d;
        }
    return inv;
}

}  // namespace fano
