#pragma once

// Exact integer and modular linear algebra: Smith normal form over Z,
// kernels, linear solves, and invariant factors of quotient modules.
// Everything is arbitrary precision (GMP); no floating point anywhere.

#include <gmpxx.h>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace psc {

using Int = mpz_class;

inline Int int_pow(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Int int_pow(long base, unsigned long e) { return int_pow(Int(base), e); }

/// p-adic valuation of x; returns -1 for x == 0 (infinite).
inline long p_valuation(const Int& x, const Int& p) {
    if (x == 0) return -1;
    Int a = abs(x);
    long v = 0;
    while (a % p == 0) {
        a /= p;
        ++v;
    }
    return v;
}

struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// IntMatrix: sparse exact integer matrix.

struct IntMatrix {
    long rows = 0;
    long cols = 0;
    std::map<std::pair<long, long>, Int> entries;  // nonzero entries only

    IntMatrix() = default;
    IntMatrix(long r, long c) : rows(r), cols(c) {}

    static IntMatrix identity(long n) {
        IntMatrix m(n, n);
        for (long i = 0; i < n; ++i) m.entries[{i, i}] = 1;
        return m;
    }

    Int at(long i, long j) const {
        auto it = entries.find({i, j});
        return it == entries.end() ? Int(0) : it->second;
    }

    void set(long i, long j, const Int& v) {
        if (i < 0 || i >= rows || j < 0 || j >= cols)
            throw input_error("IntMatrix::set: index out of range");
        if (v == 0)
            entries.erase({i, j});
        else
            entries[{i, j}] = v;
    }

    bool is_zero() const { return entries.empty(); }

    IntMatrix mul(const IntMatrix& o) const {
        if (cols != o.rows) throw input_error("IntMatrix::mul: shape mismatch");
        IntMatrix r(rows, o.cols);
        for (const auto& [ij, a] : entries)
            for (long k = 0; k < o.cols; ++k) {
                Int b = o.at(ij.second, k);
                if (b != 0) {
                    Int& e = r.entries[{ij.first, k}];
                    e += a * b;
                }
            }
        for (auto it = r.entries.begin(); it != r.entries.end();)
            it = (it->second == 0) ? r.entries.erase(it) : std::next(it);
        return r;
    }

    std::vector<Int> apply(const std::vector<Int>& x) const {
        if ((long)x.size() != cols) throw input_error("IntMatrix::apply: shape mismatch");
        std::vector<Int> y(rows, Int(0));
        for (const auto& [ij, a] : entries) y[ij.first] += a * x[ij.second];
        return y;
    }

    std::vector<Int> column(long j) const {
        std::vector<Int> c(rows, Int(0));
        for (long i = 0; i < rows; ++i) c[i] = at(i, j);
        return c;
    }

    bool operator==(const IntMatrix& o) const {
        return rows == o.rows && cols == o.cols && entries == o.entries;
    }
};

namespace detail {

// Dense worker used by the SNF elimination; converted back to sparse at the end.
struct Dense {
    long rows = 0, cols = 0;
    std::vector<std::vector<Int>> a;

    Dense(long r, long c) : rows(r), cols(c), a(r, std::vector<Int>(c, Int(0))) {}

    static Dense from(const IntMatrix& m) {
        Dense d(m.rows, m.cols);
        for (const auto& [ij, v] : m.entries) d.a[ij.first][ij.second] = v;
        return d;
    }

    static Dense identity(long n) {
        Dense d(n, n);
        for (long i = 0; i < n; ++i) d.a[i][i] = 1;
        return d;
    }

    IntMatrix to_sparse() const {
        IntMatrix m(rows, cols);
        for (long i = 0; i < rows; ++i)
            for (long j = 0; j < cols; ++j)
                if (a[i][j] != 0) m.entries[{i, j}] = a[i][j];
        return m;
    }

    void swap_rows(long i, long j) { std::swap(a[i], a[j]); }
    void swap_cols(long i, long j) {
        for (long r = 0; r < rows; ++r) std::swap(a[r][i], a[r][j]);
    }
    // row_i += q * row_j
    void add_row(long i, long j, const Int& q) {
        for (long c = 0; c < cols; ++c)
            if (a[j][c] != 0) a[i][c] += q * a[j][c];
    }
    // col_i += q * col_j
    void add_col(long i, long j, const Int& q) {
        for (long r = 0; r < rows; ++r)
            if (a[r][j] != 0) a[r][i] += q * a[r][j];
    }
    void negate_row(long i) {
        for (long c = 0; c < cols; ++c) a[i][c] = -a[i][c];
    }
    void negate_col(long j) {
        for (long r = 0; r < rows; ++r) a[r][j] = -a[r][j];
    }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Smith normal form.

struct SnfResult {
    std::vector<Int> diag;  // d_1 | d_2 | ..., length min(rows, cols), zeros last
    IntMatrix U, V;         // U * M * V = D, both unimodular
    IntMatrix Uinv, Vinv;   // exact inverses, maintained during elimination

    long rank() const {
        long r = 0;
        for (const auto& d : diag)
            if (d != 0) ++r;
        return r;
    }
};

// Pivot rule: smallest nonzero absolute value, ties broken by (row, col)
// lexicographic order.  This makes the output deterministic for a fixed input.
inline SnfResult smith_normal_form(const IntMatrix& m) {
    using detail::Dense;
    Dense A = Dense::from(m);
    Dense U = Dense::identity(m.rows), Uinv = Dense::identity(m.rows);
    Dense V = Dense::identity(m.cols), Vinv = Dense::identity(m.cols);

    auto row_op = [&](long i, long j, const Int& q) {  // row_i += q row_j
        A.add_row(i, j, q);
        U.add_row(i, j, q);
        Uinv.add_col(j, i, -q);
    };
    auto col_op = [&](long i, long j, const Int& q) {  // col_i += q col_j
        A.add_col(i, j, q);
        V.add_col(i, j, q);
        Vinv.add_row(j, i, -q);
    };
    auto row_swap = [&](long i, long j) {
        A.swap_rows(i, j);
        U.swap_rows(i, j);
        Uinv.swap_cols(i, j);
    };
    auto col_swap = [&](long i, long j) {
        A.swap_cols(i, j);
        V.swap_cols(i, j);
        Vinv.swap_rows(i, j);
    };

    const long n = std::min(m.rows, m.cols);
    long t = 0;
    while (t < n) {
        // locate pivot
        long pi = -1, pj = -1;
        for (long i = t; i < m.rows; ++i)
            for (long j = t; j < m.cols; ++j) {
                if (A.a[i][j] == 0) continue;
                if (pi < 0 || cmp(abs(A.a[i][j]), abs(A.a[pi][pj])) < 0) {
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) break;  // submatrix is zero
        if (pi != t) row_swap(t, pi);
        if (pj != t) col_swap(t, pj);

        bool clean = true;
        for (long i = t + 1; i < m.rows; ++i) {
            if (A.a[i][t] == 0) continue;
            Int q = A.a[i][t] / A.a[t][t];  // truncated division
            if (q != 0) row_op(i, t, -q);
            if (A.a[i][t] != 0) clean = false;
        }
        if (!clean) continue;  // remainders became new, smaller pivot candidates
        for (long j = t + 1; j < m.cols; ++j) {
            if (A.a[t][j] == 0) continue;
            Int q = A.a[t][j] / A.a[t][t];
            if (q != 0) col_op(j, t, -q);
            if (A.a[t][j] != 0) clean = false;
        }
        if (!clean) continue;

        // pivot must divide the remaining submatrix for the divisibility chain
        bool divides = true;
        for (long i = t + 1; i < m.rows && divides; ++i)
            for (long j = t + 1; j < m.cols && divides; ++j)
                if (A.a[i][j] % A.a[t][t] != 0) {
                    row_op(t, i, 1);
                    divides = false;
                }
        if (!divides) continue;

        if (A.a[t][t] < 0) {
            A.negate_row(t);
            U.negate_row(t);
            Uinv.negate_col(t);
        }
        ++t;
    }

    SnfResult r;
    r.diag.resize(n);
    for (long i = 0; i < n; ++i) r.diag[i] = A.a[i][i];
    r.U = U.to_sparse();
    r.V = V.to_sparse();
    r.Uinv = Uinv.to_sparse();
    r.Vinv = Vinv.to_sparse();
    return r;
}

/// Basis of the integer kernel {x : Mx = 0}, as matrix columns.
inline IntMatrix kernel_z(const IntMatrix& m, const SnfResult& snf) {
    long r0 = snf.rank();
    IntMatrix k(m.cols, m.cols - r0);
    for (long j = r0; j < m.cols; ++j)
        for (long i = 0; i < m.cols; ++i) {
            Int v = snf.V.at(i, j);
            if (v != 0) k.entries[{i, j - r0}] = v;
        }
    return k;
}

inline IntMatrix kernel_z(const IntMatrix& m) { return kernel_z(m, smith_normal_form(m)); }

/// One exact solution of Mx = b over Z, or nullopt.
inline std::optional<std::vector<Int>> solve_z(const IntMatrix& m, const SnfResult& snf,
                                               const std::vector<Int>& b) {
    if ((long)b.size() != m.rows) throw input_error("solve_z: shape mismatch");
    std::vector<Int> ub = snf.U.apply(b);
    std::vector<Int> z(m.cols, Int(0));
    long n = (long)snf.diag.size();
    for (long i = 0; i < m.rows; ++i) {
        Int rhs = (i < (long)ub.size()) ? ub[i] : Int(0);
        if (i < n && snf.diag[i] != 0) {
            if (rhs % snf.diag[i] != 0) return std::nullopt;
            z[i] = rhs / snf.diag[i];
        } else if (rhs != 0) {
            return std::nullopt;
        }
    }
    return snf.V.apply(z);
}

inline std::optional<std::vector<Int>> solve_z(const IntMatrix& m, const std::vector<Int>& b) {
    return solve_z(m, smith_normal_form(m), b);
}

// ---------------------------------------------------------------------------
// Quotient invariants: invariant factors of ker(d_out) / im(d_in).

struct QuotientResult {
    std::vector<Int> factors;                    // units dropped; 0 = free summand
    std::vector<std::vector<Int>> representatives;  // vectors in the ambient space
};

inline QuotientResult quotient_with_representatives(const IntMatrix& d_in,
                                                    const IntMatrix& d_out) {
    if (d_out.cols != d_in.rows)
        throw input_error("quotient_invariants: chain dimensions do not match");
    if (!d_out.mul(d_in).is_zero())
        throw input_error("quotient_invariants: composition d_out*d_in is nonzero");

    SnfResult so = smith_normal_form(d_out);
    IntMatrix K = kernel_z(d_out, so);  // basis of the cycle lattice
    SnfResult sk = smith_normal_form(K);

    // express the image generators in the kernel basis
    IntMatrix X(K.cols, d_in.cols);
    for (long j = 0; j < d_in.cols; ++j) {
        auto x = solve_z(K, sk, d_in.column(j));
        if (!x) throw input_error("quotient_invariants: image is not inside the kernel");
        for (long i = 0; i < K.cols; ++i)
            if ((*x)[i] != 0) X.entries[{i, j}] = (*x)[i];
    }

    SnfResult sx = smith_normal_form(X);
    QuotientResult q;
    long k = K.cols;
    long nd = (long)sx.diag.size();
    for (long t = 0; t < k; ++t) {
        Int d = (t < nd) ? sx.diag[t] : Int(0);
        if (d == 1) continue;  // unit: trivial summand
        q.factors.push_back(d);
        q.representatives.push_back(K.apply(sx.Uinv.column(t)));
    }
    return q;
}

inline std::vector<Int> quotient_invariants(const IntMatrix& d_in, const IntMatrix& d_out) {
    return quotient_with_representatives(d_in, d_out).factors;
}

// ---------------------------------------------------------------------------
// ModMatrix: exact matrix over Z/m (m a prime power in this project).
// Kernel and solve are reduced to integer SNF by adjoining m*I, so there is a
// single exact engine underneath.

struct ModMatrix {
    Int modulus;
    long rows = 0;
    long cols = 0;
    std::map<std::pair<long, long>, Int> entries;  // reduced to [0, modulus)

    ModMatrix() = default;
    ModMatrix(Int m, long r, long c) : modulus(std::move(m)), rows(r), cols(c) {
        if (modulus <= 1) throw input_error("ModMatrix: modulus must be >= 2");
    }

    Int at(long i, long j) const {
        auto it = entries.find({i, j});
        return it == entries.end() ? Int(0) : it->second;
    }

    void set(long i, long j, Int v) {
        if (i < 0 || i >= rows || j < 0 || j >= cols)
            throw input_error("ModMatrix::set: index out of range");
        v %= modulus;
        if (v < 0) v += modulus;
        if (v == 0)
            entries.erase({i, j});
        else
            entries[{i, j}] = v;
    }

    IntMatrix lift() const {
        IntMatrix m(rows, cols);
        m.entries = entries;
        return m;
    }

    std::vector<Int> apply(const std::vector<Int>& x) const {
        if ((long)x.size() != cols) throw input_error("ModMatrix::apply: shape mismatch");
        std::vector<Int> y(rows, Int(0));
        for (const auto& [ij, a] : entries) y[ij.first] += a * x[ij.second];
        for (auto& v : y) {
            v %= modulus;
            if (v < 0) v += modulus;
        }
        return y;
    }
};

/// Generators of {x : Mx = 0 mod m} as a Z/m-module.  Each generator is
/// scaled so that the unit part of its first nonzero coordinate is 1.
inline std::vector<std::vector<Int>> kernel_mod(const ModMatrix& m) {
    // integer kernel of [M | m*I] projected on the x-block
    IntMatrix aug(m.rows, m.cols + m.rows);
    aug.entries = m.entries;
    for (long i = 0; i < m.rows; ++i) aug.entries[{i, m.cols + i}] = m.modulus;
    IntMatrix K = kernel_z(aug);
    std::vector<std::vector<Int>> gens;
    for (long j = 0; j < K.cols; ++j) {
        std::vector<Int> v(m.cols);
        long lead = -1;
        for (long i = 0; i < m.cols; ++i) {
            Int e = K.at(i, j) % m.modulus;
            if (e < 0) e += m.modulus;
            v[i] = e;
            if (lead < 0 && e != 0) lead = i;
        }
        if (lead < 0) continue;
        // strip the unit factor of the leading coordinate
        Int g = gcd(v[lead], m.modulus);
        Int unit = v[lead] / g;
        Int uinv;
        if (mpz_invert(uinv.get_mpz_t(), unit.get_mpz_t(), m.modulus.get_mpz_t())) {
            for (auto& x : v) {
                x = x * uinv % m.modulus;
                if (x < 0) x += m.modulus;
            }
        }
        gens.push_back(std::move(v));
    }
    return gens;
}

/// One solution of Mx = b mod m, or nullopt if there is none.
inline std::optional<std::vector<Int>> solve_mod(const ModMatrix& m, const std::vector<Int>& b) {
    if ((long)b.size() != m.rows) throw input_error("solve_mod: dimension mismatch");
    IntMatrix aug(m.rows, m.cols + m.rows);
    aug.entries = m.entries;
    for (long i = 0; i < m.rows; ++i) aug.entries[{i, m.cols + i}] = m.modulus;
    auto x = solve_z(aug, b);
    if (!x) return std::nullopt;
    std::vector<Int> v(m.cols);
    for (long i = 0; i < m.cols; ++i) {
        v[i] = (*x)[i] % m.modulus;
        if (v[i] < 0) v[i] += m.modulus;
    }
    return v;
}

// ---------------------------------------------------------------------------
// Dense mod-p helpers (p prime).  Used for the F_p spans of the structure
// theory, where the chain groups are plain vector spaces.

inline long mod_inverse(long a, long p) {
    long t = 0, nt = 1, r = p, nr = ((a % p) + p) % p;
    while (nr != 0) {
        long q = r / nr;
        long tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) throw input_error("mod_inverse: not invertible");
    return ((t % p) + p) % p;
}

/// Incremental row space over F_p with provenance: each accepted vector is
/// remembered, and solve() returns coefficients over the accepted vectors.
struct FpSpan {
    long p;
    long dim;
    std::vector<std::vector<long>> rref;    // reduced rows
    std::vector<std::vector<long>> combo;   // rref[i] = sum combo[i][g] * gen[g]
    std::vector<long> pivot;                // pivot column of each rref row
    long ngens = 0;

    FpSpan(long p_, long dim_) : p(p_), dim(dim_) {}

    long rank() const { return (long)rref.size(); }

    // Reduce v against the rows; c collects the combination used.
    void reduce(std::vector<long>& v, std::vector<long>& c) const {
        for (size_t i = 0; i < rref.size(); ++i) {
            long x = v[pivot[i]] % p;
            if (x == 0) continue;
            for (long j = 0; j < dim; ++j) v[j] = ((v[j] - x * rref[i][j]) % p + p) % p;
            for (long g = 0; g < ngens; ++g) c[g] = ((c[g] - x * combo[i][g]) % p + p) % p;
        }
    }

    /// Insert a generator; returns true if it increased the rank.
    bool insert(const std::vector<long>& vin) {
        std::vector<long> v(vin);
        for (auto& x : v) x = ((x % p) + p) % p;
        std::vector<long> c(ngens + 1, 0);
        c[ngens] = 1;
        // reduce with the extended combo length
        for (size_t i = 0; i < rref.size(); ++i) {
            long x = v[pivot[i]] % p;
            if (x == 0) continue;
            for (long j = 0; j < dim; ++j) v[j] = ((v[j] - x * rref[i][j]) % p + p) % p;
            for (long g = 0; g < ngens; ++g) c[g] = ((c[g] - x * combo[i][g]) % p + p) % p;
        }
        long piv = -1;
        for (long j = 0; j < dim; ++j)
            if (v[j] != 0) {
                piv = j;
                break;
            }
        ++ngens;
        for (auto& row : combo) row.push_back(0);
        if (piv < 0) return false;
        long inv = mod_inverse(v[piv], p);
        for (long j = 0; j < dim; ++j) v[j] = (v[j] * inv) % p;
        for (auto& x : c) x = (x * inv) % p;
        // back-substitute to keep the rows reduced
        for (size_t i = 0; i < rref.size(); ++i) {
            long x = rref[i][piv];
            if (x == 0) continue;
            for (long j = 0; j < dim; ++j)
                rref[i][j] = ((rref[i][j] - x * v[j]) % p + p) % p;
            for (long g = 0; g < ngens; ++g)
                combo[i][g] = ((combo[i][g] - x * c[g]) % p + p) % p;
        }
        rref.push_back(std::move(v));
        combo.push_back(std::move(c));
        pivot.push_back(piv);
        return true;
    }

    bool contains(const std::vector<long>& vin) const {
        std::vector<long> v(vin);
        for (auto& x : v) x = ((x % p) + p) % p;
        std::vector<long> c(ngens, 0);
        reduce(v, c);
        for (long j = 0; j < dim; ++j)
            if (v[j] != 0) return false;
        return true;
    }

    /// Coefficients over the inserted generators, or nullopt.
    std::optional<std::vector<long>> solve(const std::vector<long>& vin) const {
        std::vector<long> v(vin);
        for (auto& x : v) x = ((x % p) + p) % p;
        std::vector<long> c(ngens, 0);
        reduce(v, c);
        for (long j = 0; j < dim; ++j)
            if (v[j] != 0) return std::nullopt;
        for (auto& x : c) x = ((p - x) % p + p) % p;  // v = sum c_g gen_g
        return c;
    }
};

}  // namespace psc
