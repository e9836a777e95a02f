#pragma once

// Command-line front end: chain text grammar, JSON serialization, and the
// request dispatch shared by the psc binary and the in-process tests.
//
// Chain grammar (whitespace insignificant):
//   chain := term (("+"|"-") term)*
//   term  := [integer "*"] gen ("*" gen)*
//   gen   := "c" digits | "T(" c-gen ("," c-gen)* ")"
// A T(...) block expands to the Toda cycle on the tensor positions it
// occupies, with the exponents taken from the ambient group.

#include "psc/positivity.hpp"

#include "json.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

namespace psc {

using nlohmann::json;

inline const char* PSC_VERSION = "1.0.0";

// ---------------------------------------------------------------------------
// Chain text parsing.

namespace detail {

struct ChainParser {
    const std::string& s;
    size_t i = 0;
    const GroupSpec& spec;
    Ring ring;

    ChainParser(const std::string& text, const GroupSpec& sp, Ring r)
        : s(text), spec(sp), ring(r) {}

    void skip_ws() {
        while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
    }

    bool eat(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }

    long parse_number() {
        skip_ws();
        size_t start = i;
        while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
        if (start == i) throw input_error("chain parse: expected a number at position " +
                                          std::to_string(start));
        return std::stol(s.substr(start, i - start));
    }

    long parse_c_gen() {
        skip_ws();
        if (i >= s.size() || s[i] != 'c') throw input_error("chain parse: expected 'c<degree>'");
        ++i;
        return parse_number();
    }

    // one factor starting at tensor position pos; returns (chain, positions used)
    std::pair<Chain, long> parse_factor(long pos) {
        skip_ws();
        if (i < s.size() && s[i] == 'T') {
            ++i;
            if (!eat('(')) throw input_error("chain parse: expected '(' after T");
            std::vector<long> degrees;
            degrees.push_back(parse_c_gen());
            while (eat(',')) degrees.push_back(parse_c_gen());
            if (!eat(')')) throw input_error("chain parse: expected ')' closing T(...)");
            long k = (long)degrees.size();
            if (pos + k > spec.n())
                throw input_error("chain parse: T(...) runs past the last tensor position");
            TodaSpec t;
            for (long a = 0; a < k; ++a) {
                if (degrees[a] % 2 == 0 || degrees[a] < 1)
                    throw input_error("chain parse: T(...) arguments must be odd generators");
                t.betas.push_back(spec.alphas[pos + a]);
                t.ms.push_back((degrees[a] + 1) / 2);
            }
            Chain c = toda_cycle(spec.p, t);
            c.ring = ring;
            c.normalize();
            return {c, k};
        }
        long d = parse_c_gen();
        if (pos >= spec.n()) throw input_error("chain parse: too many tensor factors");
        GroupSpec s1(spec.p, {spec.alphas[pos]});
        Chain c(s1, ring, d);
        c.add_term(BasisElem({d}), Int(1));
        return {c, 1};
    }

    Chain parse_term(bool negative) {
        skip_ws();
        Int coef = 1;
        if (i < s.size() && std::isdigit((unsigned char)s[i])) {
            coef = parse_number();
            if (!eat('*')) {
                // a bare integer term is only allowed as "0"
                if (coef == 0) return Chain(spec, ring, 0);
                throw input_error("chain parse: expected '*' after the coefficient");
            }
        }
        auto [acc, used] = parse_factor(0);
        long pos = used;
        while (true) {
            size_t save = i;
            if (!eat('*')) break;
            skip_ws();
            if (i >= s.size() || (s[i] != 'c' && s[i] != 'T')) {
                i = save;
                break;
            }
            auto [f, k] = parse_factor(pos);
            acc = cross(acc, f);
            pos += k;
        }
        if (pos != spec.n())
            throw input_error("chain parse: expected " + std::to_string(spec.n()) +
                              " tensor positions, found " + std::to_string(pos));
        if (negative) coef = -coef;
        return acc.scaled(coef);
    }

    Chain parse() {
        skip_ws();
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        Chain acc = parse_term(neg);
        while (true) {
            skip_ws();
            if (i >= s.size()) break;
            if (eat('+'))
                neg = false;
            else if (eat('-'))
                neg = true;
            else
                throw input_error("chain parse: unexpected character at position " +
                                  std::to_string(i));
            Chain t = parse_term(neg);
            if (acc.zero())
                acc = t;
            else if (!t.zero())
                acc = acc.plus(t);
        }
        return acc;
    }
};

}  // namespace detail

inline Chain parse_chain(const std::string& text, const GroupSpec& spec, Ring ring) {
    detail::ChainParser p(text, spec, ring);
    Chain c = p.parse();
    p.skip_ws();
    if (p.i != text.size()) throw input_error("chain parse: trailing input");
    return c;
}

// ---------------------------------------------------------------------------
// JSON serialization.

inline json ring_to_json(const Ring& r) {
    json j;
    j["modular"] = r.modular;
    if (r.modular) j["ell"] = r.ell;
    return j;
}

inline Ring ring_from_json(const json& j) {
    if (!j.value("modular", false)) return Ring::integers();
    return Ring::mod(j.at("ell").get<long>());
}

inline json chain_to_json(const Chain& c) {
    json j;
    j["p"] = c.spec.p;
    j["alphas"] = c.spec.alphas;
    j["ring"] = ring_to_json(c.ring);
    j["degree"] = c.degree;
    json terms = json::array();
    for (const auto& [b, v] : c.coeffs) {
        json t;
        t["coef"] = v.get_str();
        t["gens"] = b.degrees;
        terms.push_back(t);
    }
    j["terms"] = terms;
    j["text"] = render_chain(c);
    return j;
}

inline Chain chain_from_json(const json& j) {
    GroupSpec spec(j.at("p").get<long>(), j.at("alphas").get<std::vector<long>>());
    Chain c(spec, ring_from_json(j.at("ring")), j.at("degree").get<long>());
    for (const auto& t : j.at("terms")) {
        BasisElem b(t.at("gens").get<std::vector<long>>());
        c.add_term(b, Int(t.at("coef").get<std::string>()));
    }
    return c;
}

inline json toda_to_json(const TodaSpec& t) {
    return json{{"betas", t.betas}, {"ms", t.ms}};
}

inline TodaSpec toda_from_json(const json& j) {
    TodaSpec t;
    t.betas = j.at("betas").get<std::vector<long>>();
    t.ms = j.at("ms").get<std::vector<long>>();
    t.validate();
    return t;
}

inline json special_to_json(const SpecialCycle& s) {
    return json{{"toda_positions", s.toda_positions},
                {"toda_ms", s.toda_ms},
                {"outer_positions", s.outer_positions},
                {"outer_ms", s.outer_ms}};
}

inline SpecialCycle special_from_json(const json& j) {
    SpecialCycle s;
    s.toda_positions = j.at("toda_positions").get<std::vector<long>>();
    s.toda_ms = j.at("toda_ms").get<std::vector<long>>();
    s.outer_positions = j.at("outer_positions").get<std::vector<long>>();
    s.outer_ms = j.at("outer_ms").get<std::vector<long>>();
    return s;
}

inline json jfamily_to_json(const JFamily& f) { return json{{"tags", f.tags}, {"text", f.text()}}; }

inline JFamily jfamily_from_json(const json& j) {
    return JFamily{j.at("tags").get<std::vector<long>>()};
}

inline json certificate_to_json(const Certificate& cert) {
    json j;
    j["schema"] = 1;
    j["spec"] = json{{"p", cert.spec.p}, {"alphas", cert.spec.alphas}};
    j["degree"] = cert.degree;
    j["assume_bordism"] = cert.assume_bordism;
    j["root"] = cert.root;
    j["root_chain"] = chain_to_json(cert.root_chain);
    json nodes = json::array();
    for (const auto& n : cert.nodes) {
        json nj;
        nj["rule"] = rule_name(n.rule);
        nj["spec"] = json{{"p", n.spec.p}, {"alphas", n.spec.alphas}};
        nj["conclusion"] = chain_to_json(n.conclusion);
        if (n.has_special) {
            nj["special"] = special_to_json(n.special);
            nj["scalar"] = n.scalar.get_str();
            if (n.positive_factor != -1) nj["positive_factor"] = n.positive_factor;
        }
        if (n.has_lens_leaf) {
            nj["lens_matrix"] = n.lens_matrix;
            nj["lens_ms"] = n.lens_ms;
        }
        if (!n.children.empty()) {
            json ch = json::array();
            for (const auto& [coef, idx] : n.children)
                ch.push_back(json{{"coef", coef.get_str()}, {"node", idx}});
            nj["children"] = ch;
        }
        if (n.has_witness) nj["boundary_witness"] = chain_to_json(n.boundary_witness);
        if (n.residual) {
            nj["residual"] = true;
            nj["lens_children"] = n.lens_children;
            nj["lens_coefficients"] = n.lens_coefficients;
            nj["coverage_children"] = n.coverage_children;
        }
        if (n.sub_child >= 0) nj["sub_child"] = n.sub_child;
        if (!n.embed_positions.empty()) nj["embed_positions"] = n.embed_positions;
        nodes.push_back(nj);
    }
    j["nodes"] = nodes;
    return j;
}

inline json failure_to_json(const FailureReason& f) {
    json j;
    j["schema"] = 1;
    j["failure"] = failure_name(f.tag);
    switch (f.tag) {
        case FailureReason::Tag::NotAtoral:
            j["toral_witness"] = f.toral_witness;
            j["ell"] = f.ell;
            break;
        case FailureReason::Tag::ObstructedByMilnorDiff:
            j["kappa"] = f.kappa;
            j["ell"] = f.ell;
            j["witness"] = chain_to_json(f.witness);
            break;
        case FailureReason::Tag::ObstructedByBockstein:
            j["ell"] = f.ell;
            j["witness"] = chain_to_json(f.witness);
            break;
        case FailureReason::Tag::Incomplete:
            j["residual"] = chain_to_json(f.witness);
            break;
    }
    if (!f.detail.empty()) j["detail"] = f.detail;
    return j;
}

// ---------------------------------------------------------------------------
// Request dispatch.

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

namespace detail {

inline long max_degree_cap() {
    const char* env = std::getenv("PSC_MAX_DEGREE");
    if (!env || !*env) return 24;
    try {
        return std::stol(env);
    } catch (...) {
        return 24;
    }
}

inline std::vector<long> parse_alphas(const std::string& s) {
    std::vector<long> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stol(item));
    }
    return out;
}

inline std::vector<std::vector<long>> parse_matrix(const std::string& s) {
    std::vector<std::vector<long>> rows;
    std::stringstream ss(s);
    std::string row;
    while (std::getline(ss, row, ';')) rows.push_back(parse_alphas(row));
    return rows;
}

inline json report_wrap(const json& request, const json& result) {
    json j;
    j["schema"] = 1;
    j["request"] = request;
    j["result"] = result;
    j["version"] = PSC_VERSION;
    j["determinism_seed"] = 0;
    // timings are not measured into the report: identical requests must
    // produce byte-identical output
    j["timing_ms"] = nullptr;
    return j;
}

inline std::string factors_text(const std::vector<Int>& fs) {
    std::string out = "[";
    for (size_t i = 0; i < fs.size(); ++i) {
        if (i) out += ",";
        out += fs[i].get_str();
    }
    return out + "]";
}

}  // namespace detail

/// Runs one request; never prints or exits by itself.
inline CliResult run_cli(const std::vector<std::string>& args) {
    CliResult res;
    std::ostringstream out;

    // tiny deterministic flag parser: --name value pairs after the verbs
    std::vector<std::string> verbs;
    std::map<std::string, std::string> opt;
    std::map<std::string, bool> flag;
    for (size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) == 0) {
            std::string name = a.substr(2);
            if (name == "json" || name == "no-assume-bordism") {
                flag[name] = true;
            } else if (i + 1 < args.size()) {
                opt[name] = args[++i];
            } else {
                res.err = "missing value for --" + name + "\n";
                res.code = 2;
                return res;
            }
        } else {
            verbs.push_back(a);
        }
    }

    auto opt_long = [&](const std::string& name, long dflt) {
        auto it = opt.find(name);
        return it == opt.end() ? dflt : std::stol(it->second);
    };
    auto need = [&](const std::string& name) -> const std::string& {
        auto it = opt.find(name);
        if (it == opt.end()) throw input_error("missing required option --" + name);
        return it->second;
    };
    bool want_json = flag.count("json") > 0;

    json request;
    request["argv"] = args;

    try {
        if (verbs.empty()) throw input_error("usage: psc <homology|operate|certify> ...");
        const std::string& cmd = verbs[0];
        long cap = detail::max_degree_cap();

        auto make_spec = [&]() {
            long p = opt_long("p", 3);
            auto alphas = detail::parse_alphas(need("alphas"));
            return GroupSpec(p, alphas);
        };
        auto make_ring = [&]() {
            auto it = opt.find("ring");
            if (it == opt.end() || it->second == "z" || it->second == "Z")
                return Ring::integers();
            if (it->second.rfind("mod:", 0) == 0) return Ring::mod(std::stol(it->second.substr(4)));
            throw input_error("unknown ring (use z or mod:<ell>)");
        };

        if (cmd == "homology") {
            GroupSpec spec = make_spec();
            Ring ring = make_ring();
            long d_from, d_to;
            if (opt.count("degrees")) {
                const std::string& r = opt["degrees"];
                auto colon = r.find(':');
                if (colon == std::string::npos)
                    throw input_error("--degrees expects <from>:<to>");
                d_from = std::stol(r.substr(0, colon));
                d_to = std::stol(r.substr(colon + 1));
            } else {
                d_from = d_to = opt_long("degree", -1);
                if (d_from < 0) throw input_error("missing required option --degree");
            }
            if (d_to > cap)
                throw input_error("degree exceeds PSC_MAX_DEGREE (" + std::to_string(cap) + ")");
            json results = json::array();
            for (long d = d_from; d <= d_to; ++d) {
                auto h = homology(spec, d, ring);
                if (want_json) {
                    json r;
                    r["degree"] = d;
                    json fs = json::array();
                    for (const auto& f : h.invariant_factors) fs.push_back(f.get_str());
                    r["invariant_factors"] = fs;
                    r["order"] = homology_order(h).get_str();
                    json reps = json::array();
                    for (const auto& rep : h.representatives) reps.push_back(render_chain(rep));
                    r["representatives"] = reps;
                    results.push_back(r);
                } else {
                    out << "degree " << d << ": factors "
                        << detail::factors_text(h.invariant_factors) << " representatives [";
                    for (size_t i = 0; i < h.representatives.size(); ++i) {
                        if (i) out << ", ";
                        out << render_chain(h.representatives[i]);
                    }
                    out << "]\n";
                }
            }
            if (want_json) out << detail::report_wrap(request, results).dump(2) << "\n";
        } else if (cmd == "operate") {
            if (verbs.size() < 2) throw input_error("usage: psc operate <op> ...");
            const std::string& op = verbs[1];
            Chain result;
            if (op == "milnor") {
                GroupSpec spec = make_spec();
                long kappa = opt_long("kappa", 1), ell = opt_long("ell", 1);
                Chain c = parse_chain(need("chain"), spec, Ring::mod(ell));
                if (c.degree > cap) throw input_error("degree exceeds PSC_MAX_DEGREE");
                result = apply_op(milnor_diff(spec, kappa, ell, c.degree), c);
            } else if (op == "bockstein") {
                GroupSpec spec = make_spec();
                long ell = opt_long("ell", 1);
                Chain c = parse_chain(need("chain"), spec, Ring::mod(ell));
                if (c.degree > cap) throw input_error("degree exceeds PSC_MAX_DEGREE");
                result = apply_op(bockstein(spec, ell, c.degree), c);
            } else if (op == "diagonal") {
                long p = opt_long("p", 3);
                long alpha = opt_long("alpha", 1), ell = opt_long("ell", 1);
                long d = opt_long("degree", -1);
                if (d < 0) throw input_error("missing required option --degree");
                if (d > cap) throw input_error("degree exceeds PSC_MAX_DEGREE");
                GroupSpec s1(p, {alpha});
                Chain cd(s1, Ring::mod(ell), d);
                cd.add_term(BasisElem({d}), Int(1));
                result = apply_op(diagonal(p, alpha, ell, d), cd);
            } else if (op == "induced") {
                long p = opt_long("p", 3);
                CyclicHom h{opt_long("alpha", 1), opt_long("beta", 1), Int(opt_long("lambda", 1))};
                long d = opt_long("degree", -1);
                if (d < 0) throw input_error("missing required option --degree");
                if (d > cap) throw input_error("degree exceeds PSC_MAX_DEGREE");
                Ring ring = make_ring();
                GroupSpec s1(p, {h.alpha});
                Chain cd(s1, ring, d);
                cd.add_term(BasisElem({d}), Int(1));
                result = apply_op(induced_cyclic_map(p, h, d, ring), cd);
            } else if (op == "pushforward") {
                long p = opt_long("p", 3);
                const std::string& form = need("form");
                if (form == "f_gamma" || form == "f_swap") {
                    long a1 = opt_long("a1", 1), a2 = opt_long("a2", 1);
                    GroupSpec s1(p, {form == "f_gamma" ? a1 : a2});
                    Ring ring = make_ring();
                    Chain c = parse_chain(need("chain"), s1, ring);
                    if (c.degree > cap) throw input_error("degree exceeds PSC_MAX_DEGREE");
                    OpMatrix m = (form == "f_gamma")
                                     ? pushforward_f_gamma(p, opt_long("gamma", 1), a1, a2,
                                                           c.degree, ring)
                                     : pushforward_f_swap(p, a1, a2, c.degree, ring);
                    result = apply_op(m, c);
                } else if (form == "matrix") {
                    long alpha = opt_long("alpha", 1);
                    auto M = detail::parse_matrix(need("matrix"));
                    if (M.empty()) throw input_error("empty matrix");
                    GroupSpec src(p, std::vector<long>((long)M[0].size(), alpha));
                    Chain c = parse_chain(need("chain"), src, Ring::mod(1));
                    if (c.degree > cap) throw input_error("degree exceeds PSC_MAX_DEGREE");
                    result = apply_op(matrix_hom_pushforward(p, alpha, M, c.degree), c);
                } else {
                    throw input_error("unknown pushforward form (f_gamma|f_swap|matrix)");
                }
            } else {
                throw input_error("unknown operation: " + op);
            }
            if (want_json) {
                out << detail::report_wrap(request, chain_to_json(result)).dump(2) << "\n";
            } else {
                out << render_chain(result) << "\n";
            }
        } else if (cmd == "certify") {
            GroupSpec spec = make_spec();
            Chain h = parse_chain(need("chain"), spec, Ring::integers());
            if (h.degree > cap) throw input_error("degree exceeds PSC_MAX_DEGREE");
            bool assume = flag.count("no-assume-bordism") == 0;
            auto r = certify_atoral_bordism(spec, h, assume);
            if (std::holds_alternative<Certificate>(r)) {
                const auto& cert = std::get<Certificate>(r);
                if (!verify_certificate(cert))
                    throw input_error("internal error: emitted certificate failed verification");
                out << detail::report_wrap(request, certificate_to_json(cert)).dump(2) << "\n";
            } else {
                out << detail::report_wrap(request, failure_to_json(std::get<FailureReason>(r)))
                           .dump(2)
                    << "\n";
                res.code = 1;
            }
        } else {
            throw input_error("unknown command: " + cmd);
        }
    } catch (const std::exception& e) {
        res.err = std::string(e.what()) + "\n";
        res.code = 2;
        return res;
    }
    res.out = out.str();
    return res;
}

}  // namespace psc
