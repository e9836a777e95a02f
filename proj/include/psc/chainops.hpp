#pragma once

// Chain-level operations: maps induced by group homomorphisms, the diagonal,
// cross products, the Bockstein, the Milnor-type differentials d^(kappa,ell),
// and the almost representable subspace RH.
//
// Odd-degree operators (Bockstein, d^(kappa,ell)) extend to tensor factors
// with the sign (-1)^{d_{i+1}+...+d_n} on factor i.  With this convention the
// operators square to zero, satisfy d(a x b) = (-1)^{|b|} da x b + a x db,
// and reproduce the chain equality
//     d^(kappa,alpha) T(c_1, c_{2p^kappa-1}) = p^{alpha-1} (c_1 (x) c_1)
// on the nose.

#include "psc/grouphom.hpp"

#include <functional>
#include <optional>

namespace psc {

// ---------------------------------------------------------------------------
// OpMatrix: an exact sparse linear map between graded components.

struct OpMatrix {
    GroupSpec spec_in, spec_out;
    Ring ring_in, ring_out;
    long degree_in = 0, degree_out = 0;
    long rows = 0, cols = 0;
    std::map<std::pair<long, long>, Int> m;

    void set(long i, long j, Int v) {
        if (ring_out.modular) {
            Int mod = ring_out.modulus(spec_out.p);
            v %= mod;
            if (v < 0) v += mod;
        }
        if (v == 0)
            m.erase({i, j});
        else
            m[{i, j}] = v;
    }

    Int at(long i, long j) const {
        auto it = m.find({i, j});
        return it == m.end() ? Int(0) : it->second;
    }
};

inline OpMatrix make_op(const GroupSpec& si, const GroupSpec& so, Ring ri, Ring ro, long di,
                        long dout) {
    OpMatrix op;
    op.spec_in = si;
    op.spec_out = so;
    op.ring_in = ri;
    op.ring_out = ro;
    op.degree_in = di;
    op.degree_out = dout;
    op.cols = (long)component_basis(si, di).size();
    op.rows = (long)component_basis(so, dout).size();
    return op;
}

inline Chain apply_op(const OpMatrix& op, const Chain& c) {
    if (!(c.spec == op.spec_in) || c.degree != op.degree_in)
        throw input_error("apply_op: chain does not match the operator domain");
    auto src = component_basis(op.spec_in, op.degree_in);
    auto dst = component_basis(op.spec_out, op.degree_out);
    auto src_idx = basis_index(src);
    Chain r(op.spec_out, op.ring_out, op.degree_out);
    std::vector<Int> x = chain_to_vector(c, src, src_idx);
    for (const auto& [ij, v] : op.m)
        if (x[ij.second] != 0) r.add_term(dst[ij.first], v * x[ij.second]);
    return r;
}

/// second o first
inline OpMatrix compose(const OpMatrix& second, const OpMatrix& first) {
    if (!(first.spec_out == second.spec_in) || first.degree_out != second.degree_in)
        throw input_error("compose: operators do not chain");
    OpMatrix r = make_op(first.spec_in, second.spec_out, first.ring_in, second.ring_out,
                         first.degree_in, second.degree_out);
    // group first's entries by row so each second-entry touches only matches
    std::map<long, std::vector<std::pair<long, Int>>> first_by_row;
    for (const auto& [ij, v] : first.m) first_by_row[ij.first].push_back({ij.second, v});
    std::map<std::pair<long, long>, Int> acc;
    for (const auto& [ij2, w] : second.m) {
        auto it = first_by_row.find(ij2.second);
        if (it == first_by_row.end()) continue;
        for (const auto& [col, v] : it->second) acc[{ij2.first, col}] += w * v;
    }
    for (const auto& [ij, v] : acc) r.set(ij.first, ij.second, v);
    return r;
}

// ---------------------------------------------------------------------------
// Induced maps of cyclic group homomorphisms (phi: G_alpha -> G_beta,
// g_alpha -> g_beta^lambda with p^beta | lambda p^alpha).

struct CyclicHom {
    long alpha = 1;
    long beta = 1;
    Int lambda = 1;
};

inline void check_admissible(long p, const CyclicHom& h) {
    if (h.alpha < 1 || h.beta < 1 || h.lambda <= 0)
        throw input_error("CyclicHom: parameters must be positive");
    Int num = h.lambda * int_pow(p, (unsigned long)h.alpha);
    if (num % int_pow(p, (unsigned long)h.beta) != 0)
        throw input_error("CyclicHom: inadmissible (p^beta does not divide lambda*p^alpha)");
}

/// lambda * p^(alpha-beta) as an exact integer.
inline Int hom_multiplier(long p, const CyclicHom& h) {
    check_admissible(p, h);
    return h.lambda * int_pow(p, (unsigned long)h.alpha) / int_pow(p, (unsigned long)h.beta);
}

/// Scalar by which phi acts on c_d.
inline Int induced_cyclic_scalar(long p, const CyclicHom& h, long d) {
    Int mu = hom_multiplier(p, h);
    if (d % 2 == 0) {
        Int r;
        mpz_pow_ui(r.get_mpz_t(), mu.get_mpz_t(), (unsigned long)(d / 2));
        return r;
    }
    long m = (d + 1) / 2;
    Int r;
    mpz_pow_ui(r.get_mpz_t(), mu.get_mpz_t(), (unsigned long)(m - 1));
    return h.lambda * r;
}

inline OpMatrix induced_cyclic_map(long p, const CyclicHom& h, long d, Ring ring) {
    GroupSpec si(p, {h.alpha}), so(p, {h.beta});
    OpMatrix op = make_op(si, so, ring, ring, d, d);
    op.set(0, 0, induced_cyclic_scalar(p, h, d));
    return op;
}

/// Tensor product of per-factor cyclic maps (no signs: degree-zero maps).
inline OpMatrix tensor_cyclic_maps(long p, const std::vector<CyclicHom>& homs, long d, Ring ring) {
    std::vector<long> ain, aout;
    for (const auto& h : homs) {
        check_admissible(p, h);
        ain.push_back(h.alpha);
        aout.push_back(h.beta);
    }
    GroupSpec si(p, ain), so(p, aout);
    auto src = component_basis(si, d);
    auto dst_idx = basis_index(component_basis(so, d));
    OpMatrix op = make_op(si, so, ring, ring, d, d);
    for (size_t j = 0; j < src.size(); ++j) {
        Int coef = 1;
        for (size_t i = 0; i < homs.size(); ++i)
            coef *= induced_cyclic_scalar(p, homs[i], src[j].degrees[i]);
        op.set(dst_idx.at(src[j]), (long)j, coef);
    }
    return op;
}

// ---------------------------------------------------------------------------
// Diagonal.  Delta(c_{2m+1}) = sum_{i=0}^{2m+1} c_i (x) c_{2m+1-i};
// Delta(c_{2m}) = sum_{i+j=m} c_{2i} (x) c_{2j}.  A chain map mod p^ell for
// ell <= alpha; over Z only the odd-degree columns are cycles.

inline std::vector<std::pair<std::pair<long, long>, Int>> diagonal_terms(long d) {
    std::vector<std::pair<std::pair<long, long>, Int>> t;
    if (d % 2 == 1) {
        for (long i = 0; i <= d; ++i) t.push_back({{i, d - i}, Int(1)});
    } else {
        for (long i = 0; i <= d / 2; ++i) t.push_back({{2 * i, d - 2 * i}, Int(1)});
    }
    return t;
}

inline OpMatrix diagonal(long p, long alpha, long ell, long d) {
    if (ell < 1 || ell > alpha) throw input_error("diagonal: requires 1 <= ell <= alpha");
    Ring r = Ring::mod(ell);
    GroupSpec si(p, {alpha}), so(p, {alpha, alpha});
    OpMatrix op = make_op(si, so, r, r, d, d);
    auto dst_idx = basis_index(component_basis(so, d));
    for (const auto& [de, v] : diagonal_terms(d))
        op.set(dst_idx.at(BasisElem({de.first, de.second})), 0, v);
    return op;
}

// ---------------------------------------------------------------------------
// Cross product: tensor concatenation.  The concatenated exponent list must
// stay sorted; permutations are a separate operation.

inline Chain cross(const Chain& a, const Chain& b) {
    if (a.spec.p != b.spec.p || !(a.ring == b.ring))
        throw input_error("cross: prime or ring mismatch");
    std::vector<long> alphas = a.spec.alphas;
    alphas.insert(alphas.end(), b.spec.alphas.begin(), b.spec.alphas.end());
    GroupSpec s(a.spec.p, alphas);  // validates sortedness
    Chain r(s, a.ring, a.degree + b.degree);
    for (const auto& [ba, va] : a.coeffs)
        for (const auto& [bb, vb] : b.coeffs) {
            std::vector<long> degs = ba.degrees;
            degs.insert(degs.end(), bb.degrees.begin(), bb.degrees.end());
            r.add_term(BasisElem(std::move(degs)), va * vb);
        }
    return r;
}

// ---------------------------------------------------------------------------
// Odd-operator tensor extensions (right-handed Koszul convention).

namespace detail {

// rule(factor_index, degree) -> (target factor degree, coefficient) or nothing
using FactorRule = std::function<std::optional<std::pair<long, Int>>(long, long)>;

inline OpMatrix derivation_matrix(const GroupSpec& spec, long d, long shift, Ring ring_in,
                                  Ring ring_out, const FactorRule& rule) {
    OpMatrix op = make_op(spec, spec, ring_in, ring_out, d, d - shift);
    auto src = component_basis(spec, d);
    auto dst_idx = basis_index(component_basis(spec, d - shift));
    for (size_t j = 0; j < src.size(); ++j) {
        const auto& degs = src[j].degrees;
        for (long i = 0; i < spec.n(); ++i) {
            auto hit = rule(i, degs[i]);
            if (!hit) continue;
            long after = 0;
            for (long k = i + 1; k < spec.n(); ++k) after += degs[k];
            BasisElem t = src[j];
            t.degrees[i] = hit->first;
            Int v = hit->second;
            if (after % 2) v = -v;
            auto it = dst_idx.find(t);
            if (it == dst_idx.end()) throw input_error("derivation_matrix: target out of range");
            op.set(it->second, (long)j, op.at(it->second, (long)j) + v);
        }
    }
    return op;
}

}  // namespace detail

/// Bockstein beta^(ell): coefficients Z/p^ell -> Z/p, single-factor rule
/// c_{2m} -> c_{2m-1}.  Requires ell <= min alpha_i.
inline OpMatrix bockstein(const GroupSpec& spec, long ell, long d) {
    if (ell < 1) throw input_error("bockstein: ell >= 1 required");
    for (long a : spec.alphas)
        if (ell > a) throw input_error("bockstein: requires ell <= min alpha_i");
    return detail::derivation_matrix(
        spec, d, 1, Ring::mod(ell), Ring::mod(1), [](long, long deg) {
            std::optional<std::pair<long, Int>> r;
            if (deg >= 2 && deg % 2 == 0) r = {deg - 1, Int(1)};
            return r;
        });
}

/// Milnor-type differential d^(kappa,ell) of degree -(2p^kappa - 1):
/// on a factor with exponent alpha, c_d -> p^(alpha-1) c_{d-2p^kappa+1} for
/// even d >= 2p^kappa and ell = alpha, zero otherwise.
inline OpMatrix milnor_diff(const GroupSpec& spec, long kappa, long ell, long d) {
    if (kappa < 1 || ell < 1) throw input_error("milnor_diff: kappa, ell >= 1 required");
    Int pk = int_pow(spec.p, (unsigned long)kappa);
    if (pk > 1000000L) throw input_error("milnor_diff: kappa out of supported range");
    long step = 2 * pk.get_si() - 1;
    Int coef = int_pow(spec.p, (unsigned long)(ell - 1));
    const auto& alphas = spec.alphas;
    return detail::derivation_matrix(
        spec, d, step, Ring::mod(ell), Ring::mod(ell),
        [step, coef, ell, &alphas](long i, long deg) {
            std::optional<std::pair<long, Int>> r;
            if (alphas[i] == ell && deg % 2 == 0 && deg >= step + 1) r = {deg - step, coef};
            return r;
        });
}

/// Largest kappa whose differential can act in degree d (larger ones vanish
/// for degree reasons).
inline long kappa_max_for_degree(long p, long d) {
    long k = 0;
    Int pk = p;
    while (2 * pk - 1 <= d) {
        ++k;
        pk *= p;
    }
    return k;
}

// ---------------------------------------------------------------------------
// Almost representable homology RH = ker beta^(ell)  cap  ker d^(kappa,ell).
// For ell <= min alpha_i the mod-p^ell chain groups have zero differential,
// so homology classes are literally chains and the kernels are computed on
// chain coordinates.

struct RhBasis {
    std::vector<Chain> generators;
    long kappa_max = 0;
};

inline RhBasis rh_basis(const GroupSpec& spec, long ell, long d) {
    if (ell < 1) throw input_error("rh_basis: ell >= 1 required");
    for (long a : spec.alphas)
        if (ell > a)
            throw input_error("rh_basis: requires ell <= min alpha_i");
    auto basis = component_basis(spec, d);
    long dim = (long)basis.size();
    RhBasis out;
    out.kappa_max = kappa_max_for_degree(spec.p, d);

    Int mod = int_pow(spec.p, (unsigned long)ell);
    std::vector<const OpMatrix*> ops;
    std::vector<OpMatrix> store;
    store.reserve(out.kappa_max + 1);
    for (long k = 1; k <= out.kappa_max; ++k) store.push_back(milnor_diff(spec, k, ell, d));
    OpMatrix beta = bockstein(spec, ell, d);

    // stack all conditions over Z/p^ell; the Bockstein rows are scaled by
    // p^(ell-1) so that ker(beta mod p) becomes a mod-p^ell condition
    long total_rows = 0;
    for (const auto& op : store) total_rows += op.rows;
    total_rows += beta.rows;
    ModMatrix big(mod, total_rows, dim);
    long row0 = 0;
    for (const auto& op : store) {
        for (const auto& [ij, v] : op.m) big.set(row0 + ij.first, ij.second, v);
        row0 += op.rows;
    }
    Int scale = int_pow(spec.p, (unsigned long)(ell - 1));
    for (const auto& [ij, v] : beta.m) big.set(row0 + ij.first, ij.second, v * scale);

    for (const auto& g : kernel_mod(big))
        out.generators.push_back(vector_to_chain(g, spec, Ring::mod(ell), d, basis));
    return out;
}

// ---------------------------------------------------------------------------
// Pushforward along a general homomorphism of (Z/p^alpha)^k given by an
// integer matrix, mod p.  Computed by dualizing the induced map on
// F_p-cohomology  Lambda(s_1..s_k) (x) F_p[t_1..t_k], where s_i pulls back to
// sum_j M_ij s_j and t_i to sum_j M_ij t_j.

namespace detail {

struct Mono {
    std::vector<char> eps;  // exterior part
    std::vector<long> pow;  // polynomial part
    auto operator<=>(const Mono&) const = default;
};

using MonoSum = std::map<Mono, long>;

inline void add_mono(MonoSum& s, const Mono& m, long c, long p) {
    long& v = s[m];
    v = ((v + c) % p + p) % p;
    if (v == 0) s.erase(m);
}

// multiply every term by s_j (appending on the right, then normal ordering)
inline MonoSum mul_s(const MonoSum& s, long j, long p) {
    MonoSum r;
    for (const auto& [m, c] : s) {
        if (m.eps[j]) continue;  // s_j^2 = 0
        long after = 0;
        for (size_t k = j + 1; k < m.eps.size(); ++k) after += m.eps[k];
        Mono t = m;
        t.eps[j] = 1;
        add_mono(r, t, (after % 2) ? -c : c, p);
    }
    return r;
}

inline MonoSum mul_t(const MonoSum& s, long j, long p) {
    MonoSum r;
    for (const auto& [m, c] : s) {
        Mono t = m;
        t.pow[j] += 1;
        add_mono(r, t, c, p);
    }
    return r;
}

// multiply by a linear form sum_j coef[j] * s_j  (resp. t_j)
inline MonoSum mul_linear(const MonoSum& s, const std::vector<long>& coef, bool exterior, long p) {
    MonoSum r;
    for (size_t j = 0; j < coef.size(); ++j) {
        long c = ((coef[j] % p) + p) % p;
        if (c == 0) continue;
        MonoSum one = exterior ? mul_s(s, (long)j, p) : mul_t(s, (long)j, p);
        for (const auto& [m, v] : one) add_mono(r, m, v * c, p);
    }
    return r;
}

}  // namespace detail

/// Chain-level map on mod-p homology induced by the group homomorphism
/// (Z/p^alpha)^{n_in} -> (Z/p^alpha)^{n_out} with matrix M (n_out x n_in).
inline OpMatrix matrix_hom_pushforward(long p, long alpha,
                                       const std::vector<std::vector<long>>& M, long d) {
    if (M.empty() || M[0].empty()) throw input_error("matrix_hom_pushforward: empty matrix");
    long n_out = (long)M.size(), n_in = (long)M[0].size();
    GroupSpec si(p, std::vector<long>(n_in, alpha));
    GroupSpec so(p, std::vector<long>(n_out, alpha));
    Ring fp = Ring::mod(1);
    OpMatrix op = make_op(si, so, fp, fp, d, d);
    auto src_idx = basis_index(component_basis(si, d));
    auto dst = component_basis(so, d);
    for (size_t row = 0; row < dst.size(); ++row) {
        // expand phi^*(monomial dual to the target basis element)
        detail::MonoSum acc;
        detail::Mono unit;
        unit.eps.assign(n_in, 0);
        unit.pow.assign(n_in, 0);
        acc[unit] = 1;
        for (long i = 0; i < n_out && !acc.empty(); ++i) {
            long deg = dst[row].degrees[i];
            long eps = deg % 2, mm = deg / 2;
            if (eps) acc = detail::mul_linear(acc, M[i], true, p);
            for (long t = 0; t < mm; ++t) acc = detail::mul_linear(acc, M[i], false, p);
        }
        for (const auto& [mono, c] : acc) {
            std::vector<long> degs(n_in);
            for (long j = 0; j < n_in; ++j) degs[j] = 2 * mono.pow[j] + mono.eps[j];
            auto it = src_idx.find(BasisElem(degs));
            if (it == src_idx.end()) continue;  // degree mismatch cannot happen, but be safe
            op.set((long)row, it->second, op.at((long)row, it->second) + c);
        }
    }
    return op;
}

// ---------------------------------------------------------------------------
// Composite pushforwards: the two composite shapes the computations use
// (f_gamma = (id x phi_gamma) o Delta and f = (phi x id) o Delta), plus
// generic step composition for inclusions, permutations and cyclic tensors.

struct PushStep {
    enum class Kind { DiagonalAt, CyclicTensor, Permute, MatrixHom, Include } kind;
    long slot = 0;                                // DiagonalAt
    std::vector<CyclicHom> homs;                  // CyclicTensor, one per factor
    std::vector<long> perm;                       // Permute: perm[i] = target of factor i
    std::vector<std::vector<long>> matrix;        // MatrixHom
    std::vector<long> include_alphas;             // Include: target exponents
    std::vector<long> include_positions;          // Include: 0-based target slots
};

namespace detail {

inline OpMatrix diagonal_at_slot(const GroupSpec& spec, long slot, long d, Ring ring) {
    if (slot < 0 || slot >= spec.n()) throw input_error("diagonal step: bad slot");
    long alpha = spec.alphas[slot];
    if (ring.modular && ring.ell > alpha)
        throw input_error("diagonal step: requires ell <= alpha");
    std::vector<long> aout = spec.alphas;
    aout.insert(aout.begin() + slot, alpha);
    GroupSpec so(spec.p, aout);
    OpMatrix op = make_op(spec, so, ring, ring, d, d);
    auto src = component_basis(spec, d);
    auto dst_idx = basis_index(component_basis(so, d));
    for (size_t j = 0; j < src.size(); ++j) {
        for (const auto& [de, v] : diagonal_terms(src[j].degrees[slot])) {
            std::vector<long> degs = src[j].degrees;
            degs[slot] = de.first;
            degs.insert(degs.begin() + slot + 1, de.second);
            op.set(dst_idx.at(BasisElem(degs)), (long)j, v);
        }
    }
    return op;
}

inline OpMatrix permute_factors(const GroupSpec& spec, const std::vector<long>& perm, long d,
                                Ring ring) {
    if ((long)perm.size() != spec.n()) throw input_error("permute step: size mismatch");
    std::vector<long> aout(spec.n(), -1);
    for (long i = 0; i < spec.n(); ++i) aout[perm[i]] = spec.alphas[i];
    GroupSpec so(spec.p, aout);
    OpMatrix op = make_op(spec, so, ring, ring, d, d);
    auto src = component_basis(spec, d);
    auto dst_idx = basis_index(component_basis(so, d));
    for (size_t j = 0; j < src.size(); ++j) {
        std::vector<long> degs(spec.n());
        for (long i = 0; i < spec.n(); ++i) degs[perm[i]] = src[j].degrees[i];
        // Koszul sign: product over factor pairs whose order flips
        long sign = 0;
        for (long a = 0; a < spec.n(); ++a)
            for (long b = a + 1; b < spec.n(); ++b)
                if (perm[a] > perm[b]) sign += src[j].degrees[a] * src[j].degrees[b];
        op.set(dst_idx.at(BasisElem(degs)), (long)j, (sign % 2) ? Int(-1) : Int(1));
    }
    return op;
}

inline OpMatrix include_factors(const GroupSpec& spec, const std::vector<long>& target_alphas,
                                const std::vector<long>& positions, long d, Ring ring) {
    if ((long)positions.size() != spec.n()) throw input_error("include step: size mismatch");
    GroupSpec so(spec.p, target_alphas);
    for (long i = 0; i < spec.n(); ++i) {
        if (positions[i] < 0 || positions[i] >= so.n() ||
            (i > 0 && positions[i] <= positions[i - 1]))
            throw input_error("include step: positions must be strictly increasing");
        if (so.alphas[positions[i]] != spec.alphas[i])
            throw input_error("include step: exponent mismatch at target slot");
    }
    OpMatrix op = make_op(spec, so, ring, ring, d, d);
    auto src = component_basis(spec, d);
    auto dst_idx = basis_index(component_basis(so, d));
    for (size_t j = 0; j < src.size(); ++j) {
        std::vector<long> degs(so.n(), 0);
        for (long i = 0; i < spec.n(); ++i) degs[positions[i]] = src[j].degrees[i];
        op.set(dst_idx.at(BasisElem(degs)), (long)j, Int(1));
    }
    return op;
}

}  // namespace detail

/// Chain-level matrix of a composite of diagonals, cyclic tensor maps,
/// permutations, inclusions and (equal exponents, mod p) matrix homs.
inline OpMatrix composite_pushforward(const GroupSpec& source, const std::vector<PushStep>& steps,
                                      long d, Ring ring) {
    OpMatrix acc;
    bool first = true;
    GroupSpec cur = source;
    for (const auto& st : steps) {
        OpMatrix next;
        switch (st.kind) {
            case PushStep::Kind::DiagonalAt:
                next = detail::diagonal_at_slot(cur, st.slot, d, ring);
                break;
            case PushStep::Kind::CyclicTensor:
                next = tensor_cyclic_maps(cur.p, st.homs, d, ring);
                if (!(next.spec_in == cur))
                    throw input_error("cyclic tensor step: source exponents mismatch");
                break;
            case PushStep::Kind::Permute:
                next = detail::permute_factors(cur, st.perm, d, ring);
                break;
            case PushStep::Kind::MatrixHom: {
                for (long a : cur.alphas)
                    if (a != cur.alphas[0])
                        throw input_error("matrix hom step: requires equal exponents");
                if (!(ring == Ring::mod(1)))
                    throw input_error("matrix hom step: supported mod p only");
                next = matrix_hom_pushforward(cur.p, cur.alphas[0], st.matrix, d);
                break;
            }
            case PushStep::Kind::Include:
                next = detail::include_factors(cur, st.include_alphas, st.include_positions, d,
                                               ring);
                break;
        }
        acc = first ? next : compose(next, acc);
        first = false;
        cur = acc.spec_out;
    }
    if (first) throw input_error("composite_pushforward: empty descriptor");
    return acc;
}

/// f_gamma = (id x phi_gamma) o Delta : C(a1) -> C(a1) (x) C(a2), where
/// phi_gamma has multiplier gamma * p^(a2-a1).  Over Z the degree must be odd.
inline OpMatrix pushforward_f_gamma(long p, long gamma, long a1, long a2, long d, Ring ring) {
    if (a1 > a2) throw input_error("pushforward_f_gamma: needs a1 <= a2");
    if (!ring.modular && d % 2 == 0)
        throw input_error("pushforward_f_gamma: integral form only on odd degrees");
    std::vector<PushStep> steps;
    PushStep diag;
    diag.kind = PushStep::Kind::DiagonalAt;
    diag.slot = 0;
    steps.push_back(diag);
    PushStep ct;
    ct.kind = PushStep::Kind::CyclicTensor;
    ct.homs = {CyclicHom{a1, a1, 1}, CyclicHom{a1, a2, Int(gamma) * int_pow(p, (unsigned long)(a2 - a1))}};
    steps.push_back(ct);
    return composite_pushforward(GroupSpec(p, {a1}), steps, d, ring);
}

/// f = (phi x id) o Delta : C(a2) -> C(a1) (x) C(a2) with phi(g) = g.
inline OpMatrix pushforward_f_swap(long p, long a1, long a2, long d, Ring ring) {
    if (a1 > a2) throw input_error("pushforward_f_swap: needs a1 <= a2");
    if (!ring.modular && d % 2 == 0)
        throw input_error("pushforward_f_swap: integral form only on odd degrees");
    std::vector<PushStep> steps;
    PushStep diag;
    diag.kind = PushStep::Kind::DiagonalAt;
    diag.slot = 0;
    steps.push_back(diag);
    PushStep ct;
    ct.kind = PushStep::Kind::CyclicTensor;
    ct.homs = {CyclicHom{a2, a1, 1}, CyclicHom{a2, a2, 1}};
    steps.push_back(ct);
    return composite_pushforward(GroupSpec(p, {a2}), steps, d, ring);
}

/// Projection of a chain to the fully reduced component (all factors of
/// positive degree).
inline Chain fully_reduced_part(const Chain& c) {
    Chain r(c.spec, c.ring, c.degree);
    for (const auto& [b, v] : c.coeffs) {
        bool ok = true;
        for (long x : b.degrees) ok = ok && x > 0;
        if (ok) r.add_term(b, v);
    }
    return r;
}

}  // namespace psc
