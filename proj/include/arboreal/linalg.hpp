/**
 * Exact linear algebra: rank over F_2 (bitset elimination), rank over the
 * rationals, and Smith normal form over the integers.  Sizes here are
 * small (hundreds of rows), so plain Gaussian/Smith elimination with
 * arbitrary-precision entries is the right tool.
 */
#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace arboreal {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Dense matrix over F_2 with 64-bit packed rows.
class F2Matrix {
public:
    F2Matrix(int rows, int cols)
        : rows_(rows), cols_(cols), words_((cols + 63) / 64),
          data_(static_cast<size_t>(rows) * words_, 0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    void set(int r, int c, bool v = true) {
        uint64_t& w = data_[static_cast<size_t>(r) * words_ + c / 64];
        if (v) w |= (1ull << (c % 64));
        else w &= ~(1ull << (c % 64));
    }
    bool get(int r, int c) const {
        return (data_[static_cast<size_t>(r) * words_ + c / 64] >> (c % 64)) & 1ull;
    }

    void flip(int r, int c) {
        data_[static_cast<size_t>(r) * words_ + c / 64] ^= (1ull << (c % 64));
    }

    int rank() const {
        std::vector<uint64_t> work = data_;
        int rank = 0;
        for (int c = 0; c < cols_ && rank < rows_; ++c) {
            int pivot = -1;
            for (int r = rank; r < rows_; ++r) {
                if ((work[static_cast<size_t>(r) * words_ + c / 64] >> (c % 64)) & 1ull) {
                    pivot = r;
                    break;
                }
            }
            if (pivot < 0) continue;
            for (int w = 0; w < words_; ++w)
                std::swap(work[static_cast<size_t>(pivot) * words_ + w],
                          work[static_cast<size_t>(rank) * words_ + w]);
            for (int r = 0; r < rows_; ++r) {
                if (r == rank) continue;
                if ((work[static_cast<size_t>(r) * words_ + c / 64] >> (c % 64)) & 1ull)
                    for (int w = 0; w < words_; ++w)
                        work[static_cast<size_t>(r) * words_ + w] ^=
                            work[static_cast<size_t>(rank) * words_ + w];
            }
            ++rank;
        }
        return rank;
    }

    /// this * other over F_2.
    F2Matrix multiply(const F2Matrix& other) const {
        F2Matrix out(rows_, other.cols_);
        for (int r = 0; r < rows_; ++r)
            for (int k = 0; k < cols_; ++k)
                if (get(r, k))
                    for (int w = 0; w < other.words_; ++w)
                        out.data_[static_cast<size_t>(r) * out.words_ + w] ^=
                            other.data_[static_cast<size_t>(k) * other.words_ + w];
        return out;
    }

    bool is_zero() const {
        for (uint64_t w : data_) if (w) return false;
        return true;
    }

private:
    int rows_, cols_, words_;
    std::vector<uint64_t> data_;
};

/// Rank of a dense rational matrix by fraction-free-ish Gaussian elimination.
inline int rational_rank(std::vector<std::vector<BigRational>> m) {
    if (m.empty()) return 0;
    const int rows = static_cast<int>(m.size());
    const int cols = static_cast<int>(m[0].size());
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (m[r][c] != 0) { pivot = r; break; }
        if (pivot < 0) continue;
        std::swap(m[pivot], m[rank]);
        BigRational pv = m[rank][c];
        for (int r = rank + 1; r < rows; ++r) {
            if (m[r][c] == 0) continue;
            BigRational factor = m[r][c] / pv;
            for (int k = c; k < cols; ++k) m[r][k] -= factor * m[rank][k];
        }
        ++rank;
    }
    return rank;
}

/// Nullspace basis of an integer matrix (kernel of m: Z^cols -> Z^rows),
/// returned as rational vectors scaled to primitive integer vectors.
inline std::vector<std::vector<BigInt>> integer_kernel_basis(
    const std::vector<std::vector<BigInt>>& m, int cols) {
    const int rows = static_cast<int>(m.size());
    std::vector<std::vector<BigRational>> a(rows, std::vector<BigRational>(cols));
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) a[r][c] = BigRational(m[r][c]);

    std::vector<int> pivot_col;
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (a[r][c] != 0) { pivot = r; break; }
        if (pivot < 0) continue;
        std::swap(a[pivot], a[rank]);
        BigRational pv = a[rank][c];
        for (int k = 0; k < cols; ++k) a[rank][k] /= pv;
        for (int r = 0; r < rows; ++r) {
            if (r == rank || a[r][c] == 0) continue;
            BigRational factor = a[r][c];
            for (int k = 0; k < cols; ++k) a[r][k] -= factor * a[rank][k];
        }
        pivot_col.push_back(c);
        ++rank;
    }

    std::vector<char> is_pivot(cols, 0);
    for (int c : pivot_col) is_pivot[c] = 1;
    std::vector<std::vector<BigInt>> basis;
    for (int free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<BigRational> v(cols, 0);
        v[free] = 1;
        for (int i = 0; i < rank; ++i) v[pivot_col[i]] = -a[i][free];
        // scale to a primitive integer vector
        BigInt lcm = 1;
        for (const auto& x : v) {
            BigInt den = boost::multiprecision::denominator(x);
            lcm = boost::multiprecision::lcm(lcm, den);
        }
        std::vector<BigInt> iv(cols);
        BigInt g = 0;
        for (int k = 0; k < cols; ++k) {
            iv[k] = boost::multiprecision::numerator(v[k]) * (lcm / boost::multiprecision::denominator(v[k]));
            g = boost::multiprecision::gcd(g, iv[k]);
        }
        if (g > 1)
            for (auto& x : iv) x /= g;
        basis.push_back(std::move(iv));
    }
    return basis;
}

/// Smith normal form diagonal of an integer matrix.  Returns the nonzero
/// diagonal entries d_1 | d_2 | ... (positive).
inline std::vector<BigInt> smith_normal_form_diagonal(std::vector<std::vector<BigInt>> m) {
    if (m.empty() || m[0].empty()) return {};
    const int rows = static_cast<int>(m.size());
    const int cols = static_cast<int>(m[0].size());
    std::vector<BigInt> diag;
    int t = 0;
    while (t < rows && t < cols) {
        // find a nonzero pivot with least absolute value
        int pr = -1, pc = -1;
        BigInt best = 0;
        for (int r = t; r < rows; ++r)
            for (int c = t; c < cols; ++c) {
                if (m[r][c] == 0) continue;
                BigInt a = abs(m[r][c]);
                if (pr < 0 || a < best) { pr = r; pc = c; best = a; }
            }
        if (pr < 0) break;
        std::swap(m[pr], m[t]);
        for (int r = 0; r < rows; ++r) std::swap(m[r][pc], m[r][t]);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (int r = t + 1; r < rows; ++r) {
                if (m[r][t] == 0) continue;
                BigInt qq = m[r][t] / m[t][t];
                for (int c = t; c < cols; ++c) m[r][c] -= qq * m[t][c];
                if (m[r][t] != 0) {  // remainder smaller than pivot: swap up
                    std::swap(m[r], m[t]);
                    clean = false;
                }
            }
            for (int c = t + 1; c < cols; ++c) {
                if (m[t][c] == 0) continue;
                BigInt qq = m[t][c] / m[t][t];
                for (int r = t; r < rows; ++r) m[r][c] -= qq * m[r][t];
                if (m[t][c] != 0) {
                    for (int r = t; r < rows; ++r) std::swap(m[r][c], m[r][t]);
                    clean = false;
                }
            }
        }
        // ensure divisibility of the remaining block by the pivot
        for (int r = t + 1; r < rows; ++r) {
            for (int c = t + 1; c < cols; ++c) {
                if (m[r][c] % m[t][t] != 0) {
                    for (int k = t; k < cols; ++k) m[t][k] += m[r][k];
                    clean = false;
                    break;
                }
            }
            if (!clean) break;
        }
        if (!clean) continue;  // redo this pivot
        diag.push_back(abs(m[t][t]));
        ++t;
    }
    return diag;
}

}  // namespace arboreal
