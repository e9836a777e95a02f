#pragma once

// Toda-bracket cycles and special cycles, the generating sets of reduced
// homology, and the mod-p structure theory: the complexes (C_*)^n with the
// differentials d^(kappa), their joint kernel, the lens-product span, and the
// structure map Psi^n indexed by the families J.

#include "psc/chainops.hpp"

#include <numeric>

namespace psc {

// ---------------------------------------------------------------------------
// Toda cycles.  T(c_{2m_1-1},...,c_{2m_k-1}) is the chain
//   sum_l p^{beta_l - beta_1} c_{2m_1} (x) ... (x) c_{2m_l-1} (x) ... (x) c_{2m_k}
// and satisfies p^{beta_1} T = d(c_{2m_1} (x) ... (x) c_{2m_k}) exactly.

struct TodaSpec {
    std::vector<long> betas;  // sorted ascending
    std::vector<long> ms;     // m_i >= 1

    void validate() const {
        if (betas.empty() || betas.size() != ms.size())
            throw input_error("TodaSpec: needs matching nonempty exponent/degree lists");
        for (size_t i = 0; i < betas.size(); ++i) {
            if (betas[i] < 1 || ms[i] < 1) throw input_error("TodaSpec: entries must be >= 1");
            if (i && betas[i] < betas[i - 1])
                throw input_error("TodaSpec: exponents must be sorted");
        }
    }

    long k() const { return (long)betas.size(); }
    long degree() const {
        long d = 0;
        for (long m : ms) d += 2 * m;
        return d - 1;
    }
};

inline Chain toda_cycle(long p, const TodaSpec& t) {
    t.validate();
    GroupSpec spec(p, t.betas);
    Chain c(spec, Ring::integers(), t.degree());
    for (long l = 0; l < t.k(); ++l) {
        std::vector<long> degs(t.k());
        for (long i = 0; i < t.k(); ++i) degs[i] = (i == l) ? 2 * t.ms[i] - 1 : 2 * t.ms[i];
        c.add_term(BasisElem(std::move(degs)), int_pow(p, (unsigned long)(t.betas[l] - t.betas[0])));
    }
    return c;
}

/// The product of the even generators whose boundary is p^{beta_1} T.
inline Chain toda_top_tensor(long p, const TodaSpec& t) {
    t.validate();
    GroupSpec spec(p, t.betas);
    std::vector<long> degs(t.k());
    for (long i = 0; i < t.k(); ++i) degs[i] = 2 * t.ms[i];
    Chain c(spec, Ring::integers(), t.degree() + 1);
    c.add_term(BasisElem(std::move(degs)), Int(1));
    return c;
}

// ---------------------------------------------------------------------------
// Special cycles: a Toda block at positions i_1 < ... < i_j tensored with odd
// generators at the complementary positions, moved into position order by the
// Koszul-signed shuffle applied term by term.

struct SpecialCycle {
    std::vector<long> toda_positions;  // 0-based, strictly increasing
    std::vector<long> toda_ms;         // block degrees 2m-1
    std::vector<long> outer_positions; // 0-based, strictly increasing
    std::vector<long> outer_ms;        // outer degrees 2d-1

    long degree() const {
        long d = 0;
        for (long m : toda_ms) d += 2 * m;
        for (long m : outer_ms) d += 2 * m - 1;
        return d - 1;
    }
};

inline void validate_special(const GroupSpec& spec, const SpecialCycle& s) {
    long n = spec.n();
    if (s.toda_positions.empty() || s.toda_positions.size() != s.toda_ms.size() ||
        s.outer_positions.size() != s.outer_ms.size())
        throw input_error("SpecialCycle: malformed");
    std::vector<char> seen(n, 0);
    auto mark = [&](const std::vector<long>& v) {
        for (size_t i = 0; i < v.size(); ++i) {
            if (v[i] < 0 || v[i] >= n || seen[v[i]]) throw input_error("SpecialCycle: bad positions");
            if (i && v[i] <= v[i - 1]) throw input_error("SpecialCycle: positions must increase");
            seen[v[i]] = 1;
        }
    };
    mark(s.toda_positions);
    mark(s.outer_positions);
    for (long i = 0; i < n; ++i)
        if (!seen[i]) throw input_error("SpecialCycle: positions must partition 1..n");
    for (long m : s.toda_ms)
        if (m < 1) throw input_error("SpecialCycle: m >= 1 required");
    for (long m : s.outer_ms)
        if (m < 1) throw input_error("SpecialCycle: outer degrees must be >= 1");
}

inline Chain special_cycle(const GroupSpec& spec, const SpecialCycle& s) {
    validate_special(spec, s);
    long n = spec.n();
    TodaSpec t;
    for (size_t a = 0; a < s.toda_positions.size(); ++a)
        t.betas.push_back(spec.alphas[s.toda_positions[a]]);
    t.ms = s.toda_ms;
    Chain block = toda_cycle(spec.p, t);

    // written order: block factors then outer factors; slot of each written factor
    std::vector<long> slots = s.toda_positions;
    slots.insert(slots.end(), s.outer_positions.begin(), s.outer_positions.end());

    Chain out(spec, Ring::integers(), s.degree());
    for (const auto& [b, coef] : block.coeffs) {
        std::vector<long> degs_written = b.degrees;
        for (long m : s.outer_ms) degs_written.push_back(2 * m - 1);
        // Koszul sign of sorting the written word into slot order
        long sign = 0;
        for (size_t u = 0; u < slots.size(); ++u)
            for (size_t v = u + 1; v < slots.size(); ++v)
                if (slots[u] > slots[v]) sign += degs_written[u] * degs_written[v];
        std::vector<long> degs(n, 0);
        for (size_t u = 0; u < slots.size(); ++u) degs[slots[u]] = degs_written[u];
        out.add_term(BasisElem(std::move(degs)), (sign % 2) ? -coef : coef);
    }
    return out;
}

/// All special cycles of total degree d whose Toda block starts at the first
/// position; their classes generate the fully reduced homology.
inline std::vector<SpecialCycle> special_basis(const GroupSpec& spec, long d) {
    long n = spec.n();
    std::vector<SpecialCycle> out;
    if (d < 1) return out;

    // choose the block positions (always containing the first), then the
    // degree splits: the block costs 2*sum(ms) - 1, each outer costs 2m - 1.
    for (long j = 1; j <= n; ++j) {
        std::vector<long> pos(j);
        pos[0] = 0;
        auto emit_positions = [&](const std::vector<long>& rest) {
            for (long a = 0; a < j - 1; ++a) pos[a + 1] = rest[a];
            std::vector<long> outer;
            for (long i = 1; i < n; ++i)
                if (std::find(pos.begin(), pos.end(), i) == pos.end()) outer.push_back(i);
            long n_out = (long)outer.size();
            std::vector<long> ms(j, 1), os(n_out, 1);
            std::function<void(long, long)> rec_outer = [&](long oi, long rem) {
                if (oi == n_out) {
                    if (rem == 0) {
                        SpecialCycle s;
                        s.toda_positions = pos;
                        s.toda_ms = ms;
                        s.outer_positions = outer;
                        s.outer_ms = os;
                        out.push_back(s);
                    }
                    return;
                }
                for (long m = 1; 2 * m - 1 <= rem - (n_out - oi - 1); ++m) {
                    os[oi] = m;
                    rec_outer(oi + 1, rem - (2 * m - 1));
                }
            };
            std::function<void(long, long)> rec_ms = [&](long mi, long rem) {
                if (mi == j) {
                    if (rem >= n_out) rec_outer(0, rem);
                    return;
                }
                for (long m = 1; 2 * m <= rem; ++m) {
                    ms[mi] = m;
                    rec_ms(mi + 1, rem - 2 * m);
                }
            };
            rec_ms(0, d + 1);  // budget: degree plus the block's odd shift
        };
        if (j == 1) {
            emit_positions({});
        } else {
            std::vector<long> comb(j - 1);
            std::function<void(long, long)> rec = [&](long at, long start) {
                if (at == j - 1) {
                    emit_positions(comb);
                    return;
                }
                for (long v = start; v < n; ++v) {
                    comb[at] = v;
                    rec(at + 1, v + 1);
                }
            };
            rec(0, 1);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Expression of classes in a list of basis chains, modulo boundaries.

struct ExpressResult {
    std::vector<Int> coefficients;  // one per basis chain
    Chain boundary_witness;         // c - sum coeff_i basis_i = boundary(witness)
};

/// Exact integral expression of [c] in the given classes modulo boundaries.
inline std::optional<ExpressResult> express_in_basis_z(const Chain& c,
                                                       const std::vector<Chain>& basis) {
    auto comp = component_basis(c.spec, c.degree);
    auto idx = basis_index(comp);
    auto next = component_basis(c.spec, c.degree + 1);
    long dim = (long)comp.size();
    long nb = (long)basis.size();
    IntMatrix bnd = boundary_matrix_z(c.spec, c.degree + 1);
    IntMatrix A(dim, nb + (long)next.size());
    for (long j = 0; j < nb; ++j) {
        if (basis[j].degree != c.degree || !(basis[j].spec == c.spec))
            throw input_error("express_in_basis: basis chain degree mismatch");
        auto v = chain_to_vector(basis[j], comp, idx);
        for (long i = 0; i < dim; ++i)
            if (v[i] != 0) A.entries[{i, j}] = v[i];
    }
    for (const auto& [ij, v] : bnd.entries) A.entries[{ij.first, nb + ij.second}] = v;
    auto sol = solve_z(A, chain_to_vector(c, comp, idx));
    if (!sol) return std::nullopt;
    ExpressResult r;
    r.coefficients.assign(sol->begin(), sol->begin() + nb);
    r.boundary_witness = Chain(c.spec, c.ring, c.degree + 1);
    for (size_t i = 0; i < next.size(); ++i)
        if ((*sol)[nb + i] != 0) r.boundary_witness.add_term(next[i], (*sol)[nb + i]);
    return r;
}

/// Mod-p^ell variant, via solve_mod on the augmented system.
inline std::optional<std::vector<Int>> express_in_basis(const Chain& c,
                                                        const std::vector<Chain>& basis,
                                                        const Int& modulus) {
    auto comp = component_basis(c.spec, c.degree);
    auto idx = basis_index(comp);
    auto next = component_basis(c.spec, c.degree + 1);
    long dim = (long)comp.size();
    long nb = (long)basis.size();
    IntMatrix bnd = boundary_matrix_z(c.spec, c.degree + 1);
    ModMatrix A(modulus, dim, nb + (long)next.size());
    for (long j = 0; j < nb; ++j) {
        if (basis[j].degree != c.degree) throw input_error("express_in_basis: degree mismatch");
        auto v = chain_to_vector(basis[j], comp, idx);
        for (long i = 0; i < dim; ++i) A.set(i, j, v[i]);
    }
    for (const auto& [ij, v] : bnd.entries) A.set(ij.first, nb + ij.second, v);
    auto sol = solve_mod(A, chain_to_vector(c, comp, idx));
    if (!sol) return std::nullopt;
    return std::vector<Int>(sol->begin(), sol->begin() + nb);
}

// ---------------------------------------------------------------------------
// Homology of the fully reduced component (all tensor positions positive).
// The boundary respects the direct sum decomposition, so this is literally
// the subcomplex spanned by the reduced tuples.

inline IntMatrix reduced_boundary_matrix_z(const GroupSpec& spec, long d) {
    auto src = reduced_basis(spec, d);
    auto dst = reduced_basis(spec, d - 1);
    auto dst_idx = basis_index(dst);
    IntMatrix m((long)dst.size(), (long)src.size());
    for (size_t j = 0; j < src.size(); ++j) {
        Chain c(spec, Ring::integers(), d);
        c.add_term(src[j], Int(1));
        for (const auto& [b, v] : boundary(c).coeffs) {
            auto it = dst_idx.find(b);
            if (it == dst_idx.end()) throw input_error("reduced boundary escaped the component");
            m.set(it->second, (long)j, v);
        }
    }
    return m;
}

inline HomologySummary reduced_homology(const GroupSpec& spec, long d) {
    auto basis = reduced_basis(spec, d);
    auto q = quotient_with_representatives(reduced_boundary_matrix_z(spec, d + 1),
                                           reduced_boundary_matrix_z(spec, d));
    HomologySummary h;
    h.degree = d;
    h.invariant_factors = q.factors;
    for (const auto& rep : q.representatives)
        h.representatives.push_back(vector_to_chain(rep, spec, Ring::integers(), d, basis));
    return h;
}

// ---------------------------------------------------------------------------
// The mod-p structure theory.  Everything below works in the fully reduced
// component with F_p coefficients, where the chain groups have zero
// differential and classes are chains.

/// Matrix of d^(kappa) (unit single-factor rule c_d -> c_{d-2p^kappa+1} on
/// even d >= 2p^kappa, kappa >= 0) on the reduced degree-d component.
inline std::vector<std::vector<long>> reduced_derivation_matrix(const GroupSpec& spec, long kappa,
                                                                long d) {
    Int pk = (kappa == 0) ? Int(1) : int_pow(spec.p, (unsigned long)kappa);
    long step = 2 * pk.get_si() - 1;
    auto src = reduced_basis(spec, d);
    auto dst = reduced_basis(spec, d - step);
    auto dst_idx = basis_index(dst);
    std::vector<std::vector<long>> m(dst.size(), std::vector<long>(src.size(), 0));
    for (size_t j = 0; j < src.size(); ++j) {
        const auto& degs = src[j].degrees;
        for (long i = 0; i < spec.n(); ++i) {
            if (degs[i] % 2 != 0 || degs[i] < step + 1) continue;
            long after = 0;
            for (long k2 = i + 1; k2 < spec.n(); ++k2) after += degs[k2];
            BasisElem t = src[j];
            t.degrees[i] -= step;
            long v = (after % 2) ? spec.p - 1 : 1;
            auto it = dst_idx.find(t);
            m[it->second][j] = (m[it->second][j] + v) % spec.p;
        }
    }
    return m;
}

inline std::vector<long> fp_chain_vector(const Chain& c, const std::vector<BasisElem>& basis,
                                         const std::map<BasisElem, long>& idx, long p) {
    std::vector<long> v(basis.size(), 0);
    for (const auto& [b, x] : c.coeffs) {
        auto it = idx.find(b);
        if (it == idx.end()) throw input_error("fp_chain_vector: term outside the reduced basis");
        v[it->second] = (long)mpz_fdiv_ui(x.get_mpz_t(), (unsigned long)p);
    }
    return v;
}

inline Chain fp_vector_chain(const std::vector<long>& v, const GroupSpec& spec, long d,
                             const std::vector<BasisElem>& basis) {
    Chain c(spec, Ring::mod(1), d);
    for (size_t i = 0; i < v.size(); ++i)
        if (v[i] % spec.p != 0) c.add_term(basis[i], Int(v[i]));
    return c;
}

/// Basis of the joint kernel of all d^(kappa), kappa >= 0, in reduced degree d.
inline std::vector<Chain> cinfty_basis(const GroupSpec& spec, long d) {
    for (long a : spec.alphas)
        if (a != spec.alphas[0]) throw input_error("cinfty_basis: equal exponents required");
    auto basis = reduced_basis(spec, d);
    long dim = (long)basis.size();
    std::vector<Chain> out;
    if (dim == 0) return out;
    long kmax = kappa_max_for_degree(spec.p, d);
    std::vector<std::vector<std::vector<long>>> mats;
    for (long k = 0; k <= kmax; ++k) mats.push_back(reduced_derivation_matrix(spec, k, d));
    long rows = 0;
    for (const auto& m : mats) rows += (long)m.size();
    ModMatrix big(Int(spec.p), rows, dim);
    long r0 = 0;
    for (const auto& m : mats) {
        for (size_t i = 0; i < m.size(); ++i)
            for (long j = 0; j < dim; ++j)
                if (m[i][j]) big.set(r0 + (long)i, j, Int(m[i][j]));
        r0 += (long)m.size();
    }
    for (const auto& g : kernel_mod(big)) {
        std::vector<long> v(dim);
        for (long i = 0; i < dim; ++i) v[i] = (long)g[i].get_si();
        out.push_back(fp_vector_chain(v, spec, d, basis));
    }
    return out;
}

// ---------------------------------------------------------------------------
// The lens-product span L^n: images of odd-generator tensors under group
// homomorphisms (Z/p^alpha)^k -> (Z/p^alpha)^n, realized by the recursive
// family of the surjectivity proof: L^{n} = L^{n-1} (x) N  +  the images of
// the Vandermonde homomorphisms phi_(lambda).

struct LensGenerator {
    Chain chain;                       // mod p, fully reduced part of the image
    std::vector<std::vector<long>> M;  // composite matrix (n x k) mod p
    std::vector<long> ms;              // source odd tensor degrees 2m_i - 1
};

namespace detail {

inline Chain lens_chain_from(const GroupSpec& spec, const std::vector<std::vector<long>>& M,
                             const std::vector<long>& ms, long d) {
    long k = (long)ms.size();
    GroupSpec src(spec.p, std::vector<long>(k, spec.alphas[0]));
    Chain base(src, Ring::mod(1), d);
    std::vector<long> degs(k);
    for (long i = 0; i < k; ++i) degs[i] = 2 * ms[i] - 1;
    base.add_term(BasisElem(degs), Int(1));
    OpMatrix push = matrix_hom_pushforward(spec.p, spec.alphas[0], M, d);
    return fully_reduced_part(apply_op(push, base));
}

}  // namespace detail

/// Independent spanning set of L^n in reduced degree d, with the homomorphism
/// matrix and source tuple of every generator.
inline std::vector<LensGenerator> lens_span_basis(const GroupSpec& spec, long d) {
    for (long a : spec.alphas)
        if (a != spec.alphas[0]) throw input_error("lens_span_basis: equal exponents required");
    long p = spec.p, n = spec.n(), alpha = spec.alphas[0];
    auto basis = reduced_basis(spec, d);
    auto idx = basis_index(basis);
    std::vector<LensGenerator> out;
    if (basis.empty()) return out;

    FpSpan span(p, (long)basis.size());
    auto try_insert = [&](std::vector<std::vector<long>> M, std::vector<long> ms) {
        Chain c = detail::lens_chain_from(spec, M, ms, d);
        if (c.zero()) return;
        if (span.insert(fp_chain_vector(c, basis, idx, p)))
            out.push_back(LensGenerator{std::move(c), std::move(M), std::move(ms)});
    };

    if (n == 1) {
        if (d % 2 == 1) try_insert({{1}}, {(d + 1) / 2});
        return out;
    }

    GroupSpec prev(p, std::vector<long>(n - 1, alpha));
    // L^{n-1} (x) N
    for (long m = 1; 2 * m - 1 <= d - (n - 1); ++m) {
        for (const auto& g : lens_span_basis(prev, d - (2 * m - 1))) {
            std::vector<std::vector<long>> M(n, std::vector<long>(g.ms.size() + 1, 0));
            for (long i = 0; i < n - 1; ++i)
                for (size_t j = 0; j < g.ms.size(); ++j) M[i][j] = g.M[i][j];
            M[n - 1][g.ms.size()] = 1;
            std::vector<long> ms = g.ms;
            ms.push_back(m);
            try_insert(std::move(M), std::move(ms));
        }
    }
    // Vandermonde images of L^{n-1}
    std::vector<LensGenerator> prev_gens = lens_span_basis(prev, d);
    std::vector<long> lambda(n - 1, 0);
    while (true) {
        bool nonzero = false;
        for (long x : lambda) nonzero = nonzero || x != 0;
        if (nonzero) {  // lambda = 0 gives the plain inclusion, covered above
            for (const auto& g : prev_gens) {
                std::vector<std::vector<long>> M(n, std::vector<long>(g.ms.size(), 0));
                for (long i = 0; i < n - 1; ++i)
                    for (size_t j = 0; j < g.ms.size(); ++j) M[i][j] = g.M[i][j];
                for (size_t j = 0; j < g.ms.size(); ++j) {
                    long acc = 0;
                    for (long i = 0; i < n - 1; ++i) acc += lambda[i] * g.M[i][j];
                    M[n - 1][j] = ((acc % p) + p) % p;
                }
                try_insert(std::move(M), g.ms);
            }
        }
        long i = 0;
        for (; i < n - 1; ++i) {
            if (++lambda[i] < p) break;
            lambda[i] = 0;
        }
        if (i == n - 1) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// The families J = (J_1,...,J_n) indexing the target of Psi^n.

struct JFamily {
    // tags[i] = -1 encodes N, tags[i] = k >= 0 encodes L_{< p^k}
    std::vector<long> tags;

    std::string text() const {
        std::string s;
        for (size_t i = 0; i < tags.size(); ++i) {
            if (i) s += ",";
            s += (tags[i] < 0) ? "N" : ("L<p^" + std::to_string(tags[i]));
        }
        return s;
    }
};

inline std::vector<JFamily> jset(long n) {
    if (n < 1) throw input_error("jset: n >= 1 required");
    std::vector<JFamily> out;
    std::vector<long> tags(n);
    std::function<void(long, long)> rec = [&](long i, long kcount) {
        if (i == n) {
            out.push_back(JFamily{tags});
            return;
        }
        tags[i] = -1;  // N
        rec(i + 1, kcount + 1);
        tags[i] = kcount;  // L_{< p^kcount}
        rec(i + 1, kcount);
    };
    rec(0, 0);
    return out;
}

/// dim_d of J_1 (x) ... (x) J_n: dim N_d = 1 for odd d >= 1, and
/// dim (L_{<p^k})_d = 1 for even 2 <= d < 2p^k.
inline long jfamily_dimension(const JFamily& fam, long p, long d) {
    std::vector<long> cur(d + 1, 0), nxt(d + 1, 0);
    cur[0] = 1;
    for (long t : fam.tags) {
        std::fill(nxt.begin(), nxt.end(), 0);
        for (long a = 0; a <= d; ++a) {
            if (!cur[a]) continue;
            if (t < 0) {
                for (long e = 1; a + e <= d; e += 2) nxt[a + e] += cur[a];
            } else {
                Int bound = 2 * int_pow(p, (unsigned long)t);
                for (long e = 2; a + e <= d && Int(e) < bound; e += 2) nxt[a + e] += cur[a];
            }
        }
        std::swap(cur, nxt);
    }
    return cur[d];
}

inline long jset_total_dimension(long n, long p, long d) {
    long s = 0;
    for (const auto& f : jset(n)) s += jfamily_dimension(f, p, d);
    return s;
}

// ---------------------------------------------------------------------------
// The structure map Psi^n, induced by the projections C -> N and C -> L with
// the L_{<p^k} truncations.

struct StructureMap {
    std::vector<JFamily> families;
    std::vector<std::pair<long, BasisElem>> row_labels;  // (family index, tuple)
    std::vector<BasisElem> source_basis;                 // reduced degree-d tuples
    std::vector<std::vector<long>> matrix;               // mod p
};

inline StructureMap structure_map(const GroupSpec& spec, long d) {
    for (long a : spec.alphas)
        if (a != spec.alphas[0]) throw input_error("structure_map: equal exponents required");
    StructureMap sm;
    sm.families = jset(spec.n());
    sm.source_basis = reduced_basis(spec, d);
    auto idx = basis_index(sm.source_basis);
    for (size_t f = 0; f < sm.families.size(); ++f) {
        const auto& fam = sm.families[f];
        // enumerate the tuples compatible with the family pattern
        for (const auto& b : sm.source_basis) {
            bool ok = true;
            for (long i = 0; i < spec.n() && ok; ++i) {
                long t = fam.tags[i], e = b.degrees[i];
                if (t < 0)
                    ok = (e % 2 == 1);
                else
                    ok = (e % 2 == 0) && e >= 2 && Int(e) < 2 * int_pow(spec.p, (unsigned long)t);
            }
            if (ok) sm.row_labels.push_back({(long)f, b});
        }
    }
    sm.matrix.assign(sm.row_labels.size(), std::vector<long>(sm.source_basis.size(), 0));
    for (size_t r = 0; r < sm.row_labels.size(); ++r)
        sm.matrix[r][idx.at(sm.row_labels[r].second)] = 1;
    return sm;
}

/// Rank over F_p of (matrix restricted to the given chains as columns).
inline long fp_rank_on_chains(const std::vector<std::vector<long>>& matrix,
                              const std::vector<Chain>& chains,
                              const std::vector<BasisElem>& basis, long p) {
    if (chains.empty() || matrix.empty()) return 0;
    auto idx = basis_index(basis);
    FpSpan span(p, (long)matrix.size());
    long rank = 0;
    for (const auto& c : chains) {
        auto v = fp_chain_vector(c, basis, idx, p);
        std::vector<long> img(matrix.size(), 0);
        for (size_t r = 0; r < matrix.size(); ++r) {
            long acc = 0;
            for (size_t j = 0; j < v.size(); ++j) acc += matrix[r][j] * v[j];
            img[r] = ((acc % p) + p) % p;
        }
        if (span.insert(img)) ++rank;
    }
    return rank;
}

}  // namespace psc
