#pragma once

// Minimal chain complexes of cyclic p-groups and their tensor products.
// C(alpha) has one generator c_d in every degree d >= 0 with boundary
// p^alpha * c_{d-1} on even degrees >= 2 and zero otherwise; the tensor
// complex computes the homology of B(Z/p^{a_1} x ... x Z/p^{a_n}).

#include "psc/exactlin.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace psc {

inline bool is_odd_prime(long p) {
    if (p < 3 || p % 2 == 0) return false;
    for (long d = 3; d * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

struct GroupSpec {
    long p = 3;
    std::vector<long> alphas;

    GroupSpec() = default;
    GroupSpec(long p_, std::vector<long> a) : p(p_), alphas(std::move(a)) { validate(); }

    void validate() const {
        if (!is_odd_prime(p)) throw input_error("odd prime required");
        if (alphas.empty()) throw input_error("GroupSpec: at least one cyclic factor required");
        for (size_t i = 0; i < alphas.size(); ++i) {
            if (alphas[i] < 1) throw input_error("GroupSpec: exponents must be positive");
            if (i && alphas[i] < alphas[i - 1])
                throw input_error("GroupSpec: exponents must be sorted ascending");
        }
    }

    long n() const { return (long)alphas.size(); }

    bool operator==(const GroupSpec& o) const { return p == o.p && alphas == o.alphas; }
};

struct Ring {
    bool modular = false;
    long ell = 0;  // coefficient ring Z/p^ell when modular

    static Ring integers() { return Ring{false, 0}; }
    static Ring mod(long ell) {
        if (ell < 1) throw input_error("Ring: modular exponent must be >= 1");
        return Ring{true, ell};
    }

    Int modulus(long p) const { return modular ? int_pow(p, (unsigned long)ell) : Int(0); }

    bool operator==(const Ring& o) const { return modular == o.modular && ell == o.ell; }
};

struct BasisElem {
    std::vector<long> degrees;  // one entry per cyclic factor

    BasisElem() = default;
    explicit BasisElem(std::vector<long> d) : degrees(std::move(d)) {}

    long total_degree() const {
        long s = 0;
        for (long d : degrees) s += d;
        return s;
    }

    std::string text() const {
        std::string s;
        for (size_t i = 0; i < degrees.size(); ++i) {
            if (i) s += "*";
            s += "c" + std::to_string(degrees[i]);
        }
        return s;
    }

    auto operator<=>(const BasisElem&) const = default;
};

/// Homogeneous chain in the tensor complex, coefficients in Z or Z/p^ell.
/// The empty coefficient map is the zero chain.
struct Chain {
    GroupSpec spec;
    Ring ring;
    long degree = 0;
    std::map<BasisElem, Int> coeffs;

    Chain() = default;
    Chain(GroupSpec s, Ring r, long d) : spec(std::move(s)), ring(r), degree(d) {}

    bool zero() const { return coeffs.empty(); }

    void add_term(const BasisElem& b, const Int& c) {
        if ((long)b.degrees.size() != spec.n())
            throw input_error("Chain: basis element arity mismatch");
        if (b.total_degree() != degree) throw input_error("Chain: inhomogeneous term");
        Int& e = coeffs[b];
        e += c;
        reduce_entry(b, e);
    }

    void reduce_entry(const BasisElem& b, Int& e) {
        if (ring.modular) {
            Int m = ring.modulus(spec.p);
            e %= m;
            if (e < 0) e += m;
        }
        if (e == 0) coeffs.erase(b);
    }

    void normalize() {
        for (auto it = coeffs.begin(); it != coeffs.end();) {
            Int e = it->second;
            if (ring.modular) {
                Int m = ring.modulus(spec.p);
                e %= m;
                if (e < 0) e += m;
            }
            if (e == 0)
                it = coeffs.erase(it);
            else {
                it->second = e;
                ++it;
            }
        }
    }

    Chain scaled(const Int& k) const {
        Chain r(spec, ring, degree);
        for (const auto& [b, c] : coeffs) r.add_term(b, c * k);
        return r;
    }

    Chain plus(const Chain& o) const {
        if (!(spec == o.spec) || !(ring == o.ring)) throw input_error("Chain::plus: mismatch");
        if (degree != o.degree && !zero() && !o.zero())
            throw input_error("Chain::plus: degree mismatch");
        Chain r(spec, ring, zero() ? o.degree : degree);
        r.coeffs = coeffs;
        for (const auto& [b, c] : o.coeffs) r.add_term(b, c);
        return r;
    }

    Chain minus(const Chain& o) const { return plus(o.scaled(Int(-1))); }

    bool operator==(const Chain& o) const {
        return spec == o.spec && ring == o.ring && coeffs == o.coeffs;
    }
};

// ---------------------------------------------------------------------------
// Canonical bases of graded components (lexicographic on degree tuples).

namespace detail {
inline void enum_tuples(long n, long d, long min_deg, std::vector<long>& cur,
                        std::vector<BasisElem>& out) {
    if (n == 1) {
        if (d >= min_deg) {
            cur.push_back(d);
            out.emplace_back(cur);
            cur.pop_back();
        }
        return;
    }
    for (long k = min_deg; k <= d - min_deg * (n - 1); ++k) {
        cur.push_back(k);
        enum_tuples(n - 1, d - k, min_deg, cur, out);
        cur.pop_back();
    }
}
}  // namespace detail

/// All degree tuples of total degree d, lexicographically ordered.
inline std::vector<BasisElem> component_basis(const GroupSpec& spec, long d) {
    std::vector<BasisElem> out;
    if (d < 0) return out;
    std::vector<long> cur;
    detail::enum_tuples(spec.n(), d, 0, cur, out);
    return out;
}

/// Degree tuples with every entry >= 1 (the fully reduced component).
inline std::vector<BasisElem> reduced_basis(const GroupSpec& spec, long d) {
    std::vector<BasisElem> out;
    if (d < spec.n()) return out;
    std::vector<long> cur;
    detail::enum_tuples(spec.n(), d, 1, cur, out);
    return out;
}

inline std::map<BasisElem, long> basis_index(const std::vector<BasisElem>& basis) {
    std::map<BasisElem, long> idx;
    for (size_t i = 0; i < basis.size(); ++i) idx[basis[i]] = (long)i;
    return idx;
}

inline std::vector<Int> chain_to_vector(const Chain& c, const std::vector<BasisElem>& basis,
                                        const std::map<BasisElem, long>& idx) {
    std::vector<Int> v(basis.size(), Int(0));
    for (const auto& [b, x] : c.coeffs) {
        auto it = idx.find(b);
        if (it == idx.end()) throw input_error("chain_to_vector: term outside the component");
        v[it->second] = x;
    }
    return v;
}

inline Chain vector_to_chain(const std::vector<Int>& v, const GroupSpec& spec, Ring ring, long d,
                             const std::vector<BasisElem>& basis) {
    Chain c(spec, ring, d);
    for (size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) c.add_term(basis[i], v[i]);
    return c;
}

// ---------------------------------------------------------------------------
// Boundary operator.  Signs follow the Koszul rule applied left-to-right:
// d(x (x) y) = dx (x) y + (-1)^{|x|} x (x) dy.

inline Chain boundary(const Chain& c) {
    Chain r(c.spec, c.ring, c.degree - 1);
    for (const auto& [b, coef] : c.coeffs) {
        long sign_exp = 0;
        for (long i = 0; i < c.spec.n(); ++i) {
            long d = b.degrees[i];
            if (d >= 2 && d % 2 == 0) {
                BasisElem t = b;
                t.degrees[i] -= 1;
                Int v = coef * int_pow(c.spec.p, (unsigned long)c.spec.alphas[i]);
                if (sign_exp % 2) v = -v;
                r.add_term(t, v);
            }
            sign_exp += d;
        }
    }
    return r;
}

inline bool is_cycle(const Chain& c) { return boundary(c).zero(); }

/// Matrix of the boundary from degree d to degree d-1 over Z.
inline IntMatrix boundary_matrix_z(const GroupSpec& spec, long d) {
    auto src = component_basis(spec, d);
    auto dst = component_basis(spec, d - 1);
    auto dst_idx = basis_index(dst);
    IntMatrix m((long)dst.size(), (long)src.size());
    for (size_t j = 0; j < src.size(); ++j) {
        Chain c(spec, Ring::integers(), d);
        c.add_term(src[j], Int(1));
        Chain bc = boundary(c);
        for (const auto& [b, v] : bc.coeffs) m.set(dst_idx.at(b), (long)j, v);
    }
    return m;
}

inline ModMatrix boundary_matrix_mod(const GroupSpec& spec, long ell, long d) {
    IntMatrix z = boundary_matrix_z(spec, d);
    ModMatrix m(int_pow(spec.p, (unsigned long)ell), z.rows, z.cols);
    for (const auto& [ij, v] : z.entries) m.set(ij.first, ij.second, v);
    return m;
}

inline std::variant<IntMatrix, ModMatrix> boundary_matrix(const GroupSpec& spec, Ring ring,
                                                          long d) {
    if (ring.modular) return boundary_matrix_mod(spec, ring.ell, d);
    return boundary_matrix_z(spec, d);
}

// ---------------------------------------------------------------------------
// Homology.

struct HomologySummary {
    long degree = 0;
    std::vector<Int> invariant_factors;  // ascending, 0 = free summand
    std::vector<Chain> representatives;  // one cycle per factor
};

namespace detail {

// Integral cycles mod p^ell: kernel of [boundary | m*I], which projects
// isomorphically onto the lattice {x : dx == 0 mod m}.
inline IntMatrix cycle_lattice_mod(const GroupSpec& spec, long d, const Int& m, long dim_d,
                                   long dim_prev) {
    IntMatrix bnd = boundary_matrix_z(spec, d);
    IntMatrix aug(dim_prev, dim_d + dim_prev);
    aug.entries = bnd.entries;
    for (long i = 0; i < dim_prev; ++i) aug.entries[{i, dim_d + i}] = m;
    IntMatrix K = kernel_z(aug);
    IntMatrix proj(dim_d, K.cols);
    for (const auto& [ij, v] : K.entries)
        if (ij.first < dim_d) proj.entries[ij] = v;
    return proj;
}

}  // namespace detail

inline HomologySummary homology(const GroupSpec& spec, long d, Ring ring) {
    if (d < 0) throw input_error("homology: negative degree");
    auto basis = component_basis(spec, d);
    HomologySummary h;
    h.degree = d;

    if (!ring.modular) {
        IntMatrix d_out = boundary_matrix_z(spec, d);
        IntMatrix d_in = boundary_matrix_z(spec, d + 1);
        auto q = quotient_with_representatives(d_in, d_out);
        h.invariant_factors = q.factors;
        for (const auto& rep : q.representatives)
            h.representatives.push_back(vector_to_chain(rep, spec, ring, d, basis));
        return h;
    }

    Int m = ring.modulus(spec.p);
    long dim_d = (long)basis.size();
    long dim_prev = (long)component_basis(spec, d - 1).size();
    long dim_next = (long)component_basis(spec, d + 1).size();

    IntMatrix K = detail::cycle_lattice_mod(spec, d, m, dim_d, dim_prev);
    // relations: boundaries from one degree up, plus m * (everything)
    IntMatrix bnd_in = boundary_matrix_z(spec, d + 1);
    IntMatrix rel(dim_d, dim_next + dim_d);
    rel.entries = bnd_in.entries;
    for (long i = 0; i < dim_d; ++i) rel.entries[{i, dim_next + i}] = m;

    SnfResult sk = smith_normal_form(K);
    IntMatrix X(K.cols, rel.cols);
    for (long j = 0; j < rel.cols; ++j) {
        auto x = solve_z(K, sk, rel.column(j));
        if (!x) throw input_error("homology: relations escaped the cycle lattice");
        for (long i = 0; i < K.cols; ++i)
            if ((*x)[i] != 0) X.entries[{i, j}] = (*x)[i];
    }
    SnfResult sx = smith_normal_form(X);
    long k = K.cols;
    for (long t = 0; t < k; ++t) {
        Int f = (t < (long)sx.diag.size()) ? sx.diag[t] : Int(0);
        if (f == 1) continue;
        h.invariant_factors.push_back(f);
        auto repv = K.apply(sx.Uinv.column(t));
        h.representatives.push_back(vector_to_chain(repv, spec, ring, d, basis));
    }
    return h;
}

/// Product of the finite invariant factors; Int(0) encodes an infinite group.
inline Int homology_order(const HomologySummary& h) {
    Int ord = 1;
    for (const auto& f : h.invariant_factors) {
        if (f == 0) return Int(0);
        ord *= f;
    }
    return ord;
}

// ---------------------------------------------------------------------------
// Direct sum decomposition: split a chain by the set of tensor positions that
// carry positive degree.

inline std::map<std::vector<long>, Chain> reduced_components(const Chain& c) {
    std::map<std::vector<long>, Chain> comps;
    for (const auto& [b, coef] : c.coeffs) {
        std::vector<long> omega;
        for (long i = 0; i < c.spec.n(); ++i)
            if (b.degrees[i] > 0) omega.push_back(i + 1);  // 1-based positions
        auto it = comps.find(omega);
        if (it == comps.end()) it = comps.emplace(omega, Chain(c.spec, c.ring, c.degree)).first;
        it->second.add_term(b, coef);
    }
    return comps;
}

// ---------------------------------------------------------------------------
// Kunneth order oracle.  Completely independent of the boundary matrices and
// the SNF path: it folds the closed-form cyclic homology through the Kunneth
// formula, tracking full invariant factor structure of each degree.

namespace detail {

// finitely generated: Z^free + sum Z/p^{e}, exponents unsorted
struct AbGroup {
    long free = 0;
    std::vector<long> exps;
};

inline AbGroup cyclic_homology_group(long alpha, long d) {
    if (d == 0) return {1, {}};
    if (d % 2 == 1) return {0, {alpha}};
    return {0, {}};
}

inline AbGroup tensor(const AbGroup& a, const AbGroup& b) {
    AbGroup r;
    r.free = a.free * b.free;
    for (long e : a.exps)
        for (int i = 0; i < b.free; ++i) r.exps.push_back(e);
    for (long e : b.exps)
        for (int i = 0; i < a.free; ++i) r.exps.push_back(e);
    for (long e1 : a.exps)
        for (long e2 : b.exps) r.exps.push_back(std::min(e1, e2));
    return r;
}

inline AbGroup tor(const AbGroup& a, const AbGroup& b) {
    AbGroup r;
    for (long e1 : a.exps)
        for (long e2 : b.exps) r.exps.push_back(std::min(e1, e2));
    return r;
}

inline AbGroup direct_sum(const AbGroup& a, const AbGroup& b) {
    AbGroup r = a;
    r.free += b.free;
    r.exps.insert(r.exps.end(), b.exps.begin(), b.exps.end());
    return r;
}

}  // namespace detail

inline Int kunneth_order_oracle(const GroupSpec& spec, long d) {
    if (d < 0) throw input_error("kunneth_order_oracle: negative degree");
    using detail::AbGroup;
    // groups[k] = H_k of the partial tensor product, k <= d
    std::vector<AbGroup> groups(d + 1);
    for (long k = 0; k <= d; ++k) groups[k] = detail::cyclic_homology_group(spec.alphas[0], k);
    for (long f = 1; f < spec.n(); ++f) {
        std::vector<AbGroup> next(d + 1);
        for (long k = 0; k <= d; ++k) {
            AbGroup acc;
            for (long i = 0; i <= k; ++i) {
                AbGroup t =
                    detail::tensor(groups[i], detail::cyclic_homology_group(spec.alphas[f], k - i));
                acc = detail::direct_sum(acc, t);
            }
            for (long i = 0; i <= k - 1; ++i) {
                AbGroup t = detail::tor(groups[i],
                                        detail::cyclic_homology_group(spec.alphas[f], k - 1 - i));
                acc = detail::direct_sum(acc, t);
            }
            next[k] = acc;
        }
        groups = std::move(next);
    }
    const AbGroup& g = groups[d];
    if (g.free > 0) return Int(0);
    Int ord = 1;
    for (long e : g.exps) ord *= int_pow(spec.p, (unsigned long)e);
    return ord;
}

// ---------------------------------------------------------------------------
// Canonical text rendering.

inline std::string int_text(const Int& v) { return v.get_str(); }

/// Renders a chain as a signed combination of basis tensors in canonical
/// (lexicographic) order, e.g. "c0*c1 + 2*c1*c0".  The zero chain is "0".
inline std::string render_chain(const Chain& c) {
    if (c.coeffs.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [b, v] : c.coeffs) {
        Int a = v;
        bool neg = a < 0;
        if (neg) a = -a;
        if (first) {
            if (neg) os << "-";
            first = false;
        } else {
            os << (neg ? " - " : " + ");
        }
        if (a != 1) os << a.get_str() << "*";
        os << b.text();
    }
    return os.str();
}

}  // namespace psc
