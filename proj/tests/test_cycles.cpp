#include "doctest.h"
#include "psc/cycles.hpp"

#include <cstdint>

using namespace psc;

namespace {

struct Lcg {
    uint64_t s;
    explicit Lcg(uint64_t seed) : s(seed) {}
    uint64_t next() {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return s >> 33;
    }
    long range(long lo, long hi) { return lo + (long)(next() % (uint64_t)(hi - lo + 1)); }
};

Chain mk(const GroupSpec& s, Ring r, std::vector<std::pair<std::vector<long>, long>> terms) {
    long d = 0;
    for (long x : terms[0].first) d += x;
    Chain c(s, r, d);
    for (auto& [degs, v] : terms) c.add_term(BasisElem(degs), Int(v));
    return c;
}

}  // namespace

TEST_CASE("toda_cycle: golden values") {
    // k = 1: T(c_{2m-1}) = c_{2m-1}
    CHECK(render_chain(toda_cycle(3, TodaSpec{{2}, {3}})) == "c5");
    // k = 2, equal exponents, m = (1,1)
    CHECK(render_chain(toda_cycle(3, TodaSpec{{1, 1}, {1, 1}})) == "c1*c2 + c2*c1");
    // k = 2, beta = (1,2), m = (1,3): c1*c6 + p c2*c5, and p T = d(c2*c6)
    Chain t = toda_cycle(3, TodaSpec{{1, 2}, {1, 3}});
    CHECK(render_chain(t) == "c1*c6 + 3*c2*c5");
    Chain top = toda_top_tensor(3, TodaSpec{{1, 2}, {1, 3}});
    CHECK(boundary(top) == t.scaled(Int(3)));
}

TEST_CASE("toda boundary identity on random specs") {
    Lcg rng(8675309);
    for (int it = 0; it < 50; ++it) {
        long k = rng.range(1, 4);
        TodaSpec t;
        for (long i = 0; i < k; ++i) {
            t.betas.push_back(rng.range(1, 3));
            t.ms.push_back(rng.range(1, 4));
        }
        std::sort(t.betas.begin(), t.betas.end());
        long p = (it % 2) ? 3 : 5;
        Chain cyc = toda_cycle(p, t);
        CHECK(is_cycle(cyc));
        Chain lhs = cyc.scaled(int_pow(p, (unsigned long)t.betas[0]));
        CHECK(lhs == boundary(toda_top_tensor(p, t)));
    }
}

TEST_CASE("special_cycle: identity permutation and single generators") {
    GroupSpec s(3, {1, 1});
    SpecialCycle sc;
    sc.toda_positions = {0, 1};
    sc.toda_ms = {1, 1};
    CHECK(special_cycle(s, sc) == toda_cycle(3, TodaSpec{{1, 1}, {1, 1}}));

    GroupSpec s1(3, {2});
    SpecialCycle single;
    single.toda_positions = {0};
    single.toda_ms = {2};
    CHECK(render_chain(special_cycle(s1, single)) == "c3");
}

TEST_CASE("special_cycle: the worked example at alpha = (1,2,3)") {
    GroupSpec s(3, {1, 2, 3});
    // T(c_1^(2), c_1^(3)) (x) c_1^(1), written with the block at positions 2,3
    SpecialCycle lhs_desc;
    lhs_desc.toda_positions = {1, 2};
    lhs_desc.toda_ms = {1, 1};
    lhs_desc.outer_positions = {0};
    lhs_desc.outer_ms = {1};
    Chain lhs = special_cycle(s, lhs_desc);
    CHECK(render_chain(lhs) == "-c1*c1*c2 - 3*c1*c2*c1");

    // equals -T(c^(1), c^(3)) (x) c^(2)  -  d(c_2 (x) c_2 (x) c_1)
    SpecialCycle mid_desc;
    mid_desc.toda_positions = {0, 2};
    mid_desc.toda_ms = {1, 1};
    mid_desc.outer_positions = {1};
    mid_desc.outer_ms = {1};
    Chain mid = special_cycle(s, mid_desc);
    Chain corr = boundary(mk(s, Ring::integers(), {{{2, 2, 1}, 1}}));
    CHECK(lhs == mid.scaled(Int(-1)).minus(corr));
}

TEST_CASE("special_basis: enumeration matches the cyclic and rank-2 cases") {
    GroupSpec s1(3, {2});
    for (long d = 1; d <= 9; ++d) {
        auto sb = special_basis(s1, d);
        if (d % 2 == 1) {
            REQUIRE(sb.size() == 1);
            CHECK(render_chain(special_cycle(s1, sb[0])) == "c" + std::to_string(d));
        } else {
            CHECK(sb.empty());
        }
    }

    GroupSpec s2(3, {1, 1});
    auto b3 = special_basis(s2, 3);
    REQUIRE(b3.size() == 1);
    CHECK(render_chain(special_cycle(s2, b3[0])) == "c1*c2 + c2*c1");
    auto b5 = special_basis(s2, 5);
    CHECK(b5.size() == 2);  // T(c1,c3) and T(c3,c1)
}

TEST_CASE("special_basis generates the fully reduced homology") {
    std::vector<std::vector<long>> specs = {{1}, {2}, {1, 1}, {1, 2}, {2, 2}, {1, 1, 1}, {1, 2, 3}};
    for (const auto& alphas : specs) {
        GroupSpec s(3, alphas);
        long dmax = 12;
        for (long d = s.n(); d <= dmax; ++d) {
            std::vector<Chain> basis;
            for (const auto& sc : special_basis(s, d)) basis.push_back(special_cycle(s, sc));
            auto h = reduced_homology(s, d);
            for (const auto& rep : h.representatives) {
                auto ex = express_in_basis_z(rep, basis);
                CHECK(ex.has_value());
                if (ex) {
                    Chain acc(s, Ring::integers(), d);
                    for (size_t i = 0; i < basis.size(); ++i)
                        acc = acc.plus(basis[i].scaled(ex->coefficients[i]));
                    acc = acc.plus(boundary(ex->boundary_witness));
                    CHECK(acc == rep);
                }
            }
        }
    }
}

TEST_CASE("express_in_basis: unit vector and boundary cases") {
    GroupSpec s(3, {1, 1});
    std::vector<Chain> basis;
    for (const auto& sc : special_basis(s, 5)) basis.push_back(special_cycle(s, sc));
    REQUIRE(basis.size() == 2);

    auto ex = express_in_basis_z(basis[0], basis);
    REQUIRE(ex.has_value());
    // both classes have order 3 in the reduced H_5, so coefficients are
    // determined mod 3
    CHECK((ex->coefficients[0] - 1) % 3 == 0);
    CHECK(ex->coefficients[1] % 3 == 0);

    Chain bdry = boundary(mk(s, Ring::integers(), {{{2, 4}, 1}}));
    auto exb = express_in_basis_z(bdry, basis);
    REQUIRE(exb.has_value());
    CHECK(exb->coefficients[0] % 3 == 0);
    CHECK(exb->coefficients[1] % 3 == 0);

    auto exm = express_in_basis(basis[0], basis, Int(3));
    REQUIRE(exm.has_value());
    CHECK(((*exm)[0] - 1) % 3 == 0);
    CHECK((*exm)[1] % 3 == 0);
}

TEST_CASE("express_in_basis: rewriting onto the leading-position generators") {
    GroupSpec s(3, {1, 2, 3});
    SpecialCycle lhs_desc;
    lhs_desc.toda_positions = {1, 2};
    lhs_desc.toda_ms = {1, 1};
    lhs_desc.outer_positions = {0};
    lhs_desc.outer_ms = {1};
    Chain c = special_cycle(s, lhs_desc);

    auto sb = special_basis(s, 4);
    std::vector<Chain> basis;
    long target = -1;
    for (size_t i = 0; i < sb.size(); ++i) {
        basis.push_back(special_cycle(s, sb[i]));
        if (sb[i].toda_positions == std::vector<long>{0, 2}) target = (long)i;
    }
    REQUIRE(target >= 0);
    auto ex = express_in_basis_z(c, basis);
    REQUIRE(ex.has_value());
    Chain acc(s, Ring::integers(), 4);
    for (size_t i = 0; i < basis.size(); ++i) acc = acc.plus(basis[i].scaled(ex->coefficients[i]));
    acc = acc.plus(boundary(ex->boundary_witness));
    CHECK(acc == c);
    CHECK((ex->coefficients[target] + 1) % 3 == 0);
}

TEST_CASE("jset: golden families") {
    auto j1 = jset(1);
    REQUIRE(j1.size() == 2);  // (N) and (L_{<1})
    CHECK(j1[0].tags == std::vector<long>{-1});
    CHECK(j1[1].tags == std::vector<long>{0});
    CHECK(jfamily_dimension(j1[1], 3, 2) == 0);  // L_{<1} is empty

    auto j2 = jset(2);
    REQUIRE(j2.size() == 4);
    CHECK(jset_total_dimension(2, 3, 3) == 1);  // only (N, L_{<3})
    CHECK(jset_total_dimension(2, 3, 2) == 1);  // (N,N) via (1,1)
    CHECK(jset_total_dimension(2, 3, 4) == 2);  // (N,N): (1,3),(3,1)
}

TEST_CASE("cinfty_basis: cyclic base cases") {
    GroupSpec s1(3, {1});
    for (long d = 1; d <= 10; ++d) {
        auto cb = cinfty_basis(s1, d);
        if (d % 2 == 1) {
            REQUIRE(cb.size() == 1);  // all of N_d
            CHECK(render_chain(cb[0]) == "c" + std::to_string(d));
        } else {
            CHECK(cb.empty());  // D^{1,0} = 0
        }
    }
}

TEST_CASE("cinfty dimension equals the J-set dimension") {
    for (long n : {1L, 2L, 3L}) {
        GroupSpec s(3, std::vector<long>(n, 1));
        long dmax = (n >= 3) ? 10 : 12;
        for (long d = n; d <= dmax; ++d)
            CHECK((long)cinfty_basis(s, d).size() == jset_total_dimension(n, 3, d));
    }
}

TEST_CASE("T(c1, c5) is not in C^{2,infty}") {
    GroupSpec s(3, {1, 1});
    auto cb = cinfty_basis(s, 7);
    auto basis = reduced_basis(s, 7);
    auto idx = basis_index(basis);
    FpSpan span(3, (long)basis.size());
    for (const auto& c : cb) span.insert(fp_chain_vector(c, basis, idx, 3));
    Chain toda = mk(s, Ring::mod(1), {{{1, 6}, 1}, {{2, 5}, 1}});
    CHECK_FALSE(span.contains(fp_chain_vector(toda, basis, idx, 3)));
}

TEST_CASE("lens span: base case, provenance, and containment in C^infty") {
    GroupSpec s1(3, {1});
    for (long d = 1; d <= 9; ++d) {
        auto lg = lens_span_basis(s1, d);
        CHECK(lg.size() == (d % 2 == 1 ? 1u : 0u));
    }

    GroupSpec s2(3, {1, 1});
    for (long d = 2; d <= 12; ++d) {
        auto lg = lens_span_basis(s2, d);
        auto cb = cinfty_basis(s2, d);
        auto basis = reduced_basis(s2, d);
        auto idx = basis_index(basis);
        FpSpan cspan(3, (long)basis.size());
        for (const auto& c : cb) cspan.insert(fp_chain_vector(c, basis, idx, 3));
        for (const auto& g : lg) {
            CHECK(cspan.contains(fp_chain_vector(g.chain, basis, idx, 3)));
            Chain re = detail::lens_chain_from(s2, g.M, g.ms, d);
            CHECK(re == g.chain);
        }
        CHECK(lg.size() == cb.size());
    }
}

TEST_CASE("equal-exponent machinery rejects mixed exponents") {
    GroupSpec mixed(3, {1, 2});
    CHECK_THROWS_AS(lens_span_basis(mixed, 4), input_error);
    CHECK_THROWS_AS(cinfty_basis(mixed, 4), input_error);
    CHECK_THROWS_AS(structure_map(mixed, 4), input_error);
}

TEST_CASE("structure map Psi^n is bijective on C^{n,infty}") {
    for (long n : {1L, 2L}) {
        GroupSpec s(3, std::vector<long>(n, 1));
        for (long d = n; d <= 10; ++d) {
            auto sm = structure_map(s, d);
            auto cb = cinfty_basis(s, d);
            long target_dim = (long)sm.row_labels.size();
            CHECK(target_dim == jset_total_dimension(n, 3, d));
            CHECK(fp_rank_on_chains(sm.matrix, cb, sm.source_basis, 3) == (long)cb.size());
            CHECK((long)cb.size() == target_dim);
        }
    }
}

TEST_CASE("Vandermonde projection is surjective") {
    // projection of L^{n+1} onto (N)^n (x) L_{<p^n} has full rank, n in {1,2}
    for (long n : {1L, 2L}) {
        GroupSpec s(3, std::vector<long>(n + 1, 1));
        for (long d = n + 1; d <= 12; ++d) {
            auto lg = lens_span_basis(s, d);
            auto basis = reduced_basis(s, d);
            auto idx = basis_index(basis);
            std::vector<long> rows;
            Int bound = 2 * int_pow(3, (unsigned long)n);
            for (size_t i = 0; i < basis.size(); ++i) {
                bool ok = true;
                for (long f = 0; f < n; ++f) ok = ok && basis[i].degrees[f] % 2 == 1;
                long last = basis[i].degrees[n];
                ok = ok && last % 2 == 0 && last >= 2 && Int(last) < bound;
                if (ok) rows.push_back((long)i);
            }
            FpSpan span(3, (long)rows.size());
            long rank = 0;
            for (const auto& g : lg) {
                auto v = fp_chain_vector(g.chain, basis, idx, 3);
                std::vector<long> proj(rows.size());
                for (size_t r = 0; r < rows.size(); ++r) proj[r] = v[rows[r]];
                if (!rows.empty() && span.insert(proj)) ++rank;
            }
            CHECK(rank == (long)rows.size());
        }
    }
}
