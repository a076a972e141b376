#ifndef ADIC_SCENARIO_HPP
#define ADIC_SCENARIO_HPP

#include <atomic>
#include <chrono>
#include <fstream>
#include <future>
#include <thread>
#include <variant>

#include "adic/report.hpp"

namespace adic {

/* Scenario files: plain-text key-value blocks with explicit matrix
 * literals. One ring block; named sequences, modules and towers; a task
 * list executed in declaration order. Polynomial literals sit in square
 * brackets and use integers, variable names, + - * ^ and parentheses. */

struct Token {
    std::string text;
    int line = 1, col = 1;
};

class Tokenizer {
public:
    explicit Tokenizer(const std::string& src) : s_(src) {}

    std::vector<Token> all()
    {
        std::vector<Token> out;
        while (true) {
            skip();
            if (pos_ >= s_.size())
                break;
            Token t;
            t.line = line_;
            t.col = col_;
            char c = s_[pos_];
            if (c == '{' || c == '}') {
                t.text = std::string(1, c);
                advance();
            } else if (c == '[') {
                // bracketed polynomial literal
                advance();
                std::string lit;
                int depth = 1;
                while (pos_ < s_.size() && depth > 0) {
                    char d = s_[pos_];
                    if (d == '[')
                        ++depth;
                    if (d == ']') {
                        --depth;
                        if (depth == 0) {
                            advance();
                            break;
                        }
                    }
                    lit += d;
                    advance();
                }
                if (depth != 0)
                    throw ParseError("unterminated '[' literal", t.line, t.col);
                t.text = "[" + lit + "]";
            } else {
                while (pos_ < s_.size() && !std::isspace((unsigned char)s_[pos_]) &&
                       s_[pos_] != '{' && s_[pos_] != '}' && s_[pos_] != '[' &&
                       s_[pos_] != '#')
                    t.text += s_[pos_], advance();
            }
            if (!t.text.empty())
                out.push_back(t);
        }
        return out;
    }

private:
    std::string s_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;

    void advance()
    {
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else
            ++col_;
        ++pos_;
    }
    void skip()
    {
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (c == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n')
                    advance();
            } else if (std::isspace((unsigned char)c))
                advance();
            else
                break;
        }
    }
};

template <class K>
struct Scenario {
    Ring<K> ring;
    std::map<std::string, ElementSequence<K>> sequences;
    std::map<std::string, FpModule<K>> modules;
    struct TowerSpec {
        FpModule<K> module;
        Matrix<K> transition;
    };
    std::map<std::string, TowerSpec> towers;
    struct Task {
        std::string kind;
        std::map<std::string, std::string> params;
        int line = 0;
    };
    std::vector<Task> tasks;
    std::string canonical; // canonical serialization for hashing
};

struct RunOptions {
    std::uint32_t level = 4;
    std::int64_t d0 = -4, d1 = 2;
    std::uint64_t seed = 0;
    std::size_t resolution_length = 0; // 0 = default
    unsigned jobs = 1;
    std::optional<TermOrderKind> order; // default when the ring omits it
};

namespace detail {

inline bool is_keyword(const std::string& s)
{
    static const char* kws[] = {"field",  "vars",   "weights", "quotient",
                                "order",  "seq",    "module",  "tower",
                                "task",   "gens",   "degrees", "rel"};
    for (auto* k : kws)
        if (s == k)
            return true;
    return false;
}

class ScenParser {
public:
    ScenParser(std::vector<Token> toks, const RunOptions& opt)
        : t_(std::move(toks)), opt_(opt)
    {
    }

    template <class K>
    Scenario<K> parse(const K& field_hint);

private:
    std::vector<Token> t_;
    std::size_t i_ = 0;
    RunOptions opt_;

    [[noreturn]] void fail(const std::string& msg)
    {
        int line = i_ < t_.size() ? t_[i_].line : (t_.empty() ? 1 : t_.back().line);
        int col = i_ < t_.size() ? t_[i_].col : 1;
        throw ParseError(msg, line, col);
    }
    bool done() const { return i_ >= t_.size(); }
    const Token& peek()
    {
        if (done())
            fail("unexpected end of scenario");
        return t_[i_];
    }
    Token next()
    {
        auto tok = peek();
        ++i_;
        return tok;
    }
    void expect(const std::string& s)
    {
        if (peek().text != s)
            fail("expected '" + s + "', found '" + peek().text + "'");
        ++i_;
    }
    bool is_literal(const std::string& s)
    {
        return s.size() >= 2 && s.front() == '[' && s.back() == ']';
    }
    std::string literal_body(const std::string& s)
    {
        return s.substr(1, s.size() - 2);
    }
};

template <class K>
Scenario<K> ScenParser::parse(const K&)
{
    Scenario<K> sc;
    // ring block first
    expect("ring");
    expect("{");
    std::string field_kind = "Q";
    std::uint64_t prime = 2;
    std::vector<std::string> vars;
    std::vector<std::uint32_t> weights;
    std::vector<std::string> quotient;
    TermOrderKind ord = opt_.order.value_or(TermOrderKind::Grevlex);
    while (peek().text != "}") {
        auto key = next().text;
        if (key == "field") {
            field_kind = next().text;
            if (field_kind == "Fp")
                prime = std::stoull(next().text);
            else if (field_kind != "Q")
                fail("unknown field '" + field_kind + "' (use Q or Fp p)");
        } else if (key == "vars") {
            while (!done() && peek().text != "}" && !is_keyword(peek().text))
                vars.push_back(next().text);
        } else if (key == "weights") {
            while (!done() && peek().text != "}" && std::isdigit((unsigned char)peek().text[0]))
                weights.push_back((std::uint32_t)std::stoul(next().text));
        } else if (key == "quotient") {
            while (!done() && is_literal(peek().text))
                quotient.push_back(literal_body(next().text));
        } else if (key == "order") {
            auto o = next().text;
            if (o == "grevlex")
                ord = TermOrderKind::Grevlex;
            else if (o == "lex")
                ord = TermOrderKind::Lex;
            else
                fail("unknown term order '" + o + "'");
        } else
            fail("unknown ring key '" + key + "'");
    }
    expect("}");
    if (vars.empty())
        fail("ring block needs at least one variable");

    if constexpr (std::is_same_v<K, PrimeField>) {
        if (field_kind != "Fp")
            fail("scenario field disagrees with engine instantiation");
        K field(prime);
        std::vector<Poly<K>> qpolys;
        for (auto& q : quotient)
            qpolys.push_back(parse_poly_raw(field, vars, q, ord));
        sc.ring = make_ring(field, vars, weights, qpolys, ord);
    } else {
        K field{};
        std::vector<Poly<K>> qpolys;
        for (auto& q : quotient)
            qpolys.push_back(parse_poly_raw(field, vars, q, ord));
        sc.ring = make_ring(field, vars, weights, qpolys, ord);
    }

    while (!done()) {
        auto kw = next().text;
        if (kw == "seq") {
            auto name = next().text;
            std::vector<RElt<K>> es;
            while (!done() && is_literal(peek().text))
                es.push_back(parse_elt(sc.ring, literal_body(next().text)));
            if (es.empty())
                fail("sequence '" + name + "' has no elements");
            sc.sequences.emplace(name, ElementSequence<K>(sc.ring, es));
        } else if (kw == "module") {
            auto name = next().text;
            expect("{");
            std::size_t gens = 0;
            std::optional<std::vector<std::int64_t>> degrees;
            Matrix<K> rels;
            while (peek().text != "}") {
                auto key = next().text;
                if (key == "gens")
                    gens = std::stoul(next().text);
                else if (key == "degrees") {
                    std::vector<std::int64_t> dd;
                    while (!done() && peek().text != "}" &&
                           (std::isdigit((unsigned char)peek().text[0]) ||
                            peek().text[0] == '-'))
                        dd.push_back(std::stoll(next().text));
                    degrees = dd;
                } else if (key == "rel") {
                    Column<K> col;
                    while (!done() && is_literal(peek().text))
                        col.push_back(
                            parse_elt(sc.ring, literal_body(next().text)));
                    rels.push_back(col);
                } else
                    fail("unknown module key '" + key + "'");
            }
            expect("}");
            if (gens == 0)
                fail("module '" + name + "' needs gens");
            for (auto& c : rels)
                if (c.size() != gens)
                    fail("relation column of module '" + name +
                         "' has wrong height");
            if (!degrees && sc.ring->graded())
                degrees = std::vector<std::int64_t>(gens, 0);
            sc.modules.emplace(name, make_module(sc.ring, gens, rels, degrees));
        } else if (kw == "tower") {
            auto name = next().text;
            expect("{");
            std::string modname;
            Matrix<K> trans;
            while (peek().text != "}") {
                auto key = next().text;
                if (key == "module")
                    modname = next().text;
                else if (key == "transition") {
                    Column<K> col;
                    while (!done() && is_literal(peek().text))
                        col.push_back(
                            parse_elt(sc.ring, literal_body(next().text)));
                    trans.push_back(col);
                } else
                    fail("unknown tower key '" + key + "'");
            }
            expect("}");
            if (!sc.modules.count(modname))
                fail("tower '" + name + "' references unknown module");
            sc.towers.emplace(
                name, typename Scenario<K>::TowerSpec{sc.modules.at(modname),
                                                      trans});
        } else if (kw == "task") {
            typename Scenario<K>::Task task;
            task.kind = next().text;
            task.line = i_ > 0 ? t_[i_ - 1].line : 1;
            expect("{");
            while (peek().text != "}") {
                auto key = next().text;
                std::string val = next().text;
                // window takes two values; bracketed values may repeat
                if (key == "window") {
                    task.params["d0"] = val;
                    task.params["d1"] = next().text;
                } else {
                    while (is_literal(val) && !done() &&
                           is_literal(peek().text))
                        val += "|" + next().text;
                    task.params[key] = val;
                }
            }
            expect("}");
            sc.tasks.push_back(task);
        } else
            fail("unknown top-level keyword '" + kw + "'");
    }
    return sc;
}

} // namespace detail

template <class K>
Scenario<K> parse_scenario(const std::string& text, const RunOptions& opt,
                           const K& field_hint = K{})
{
    auto toks = Tokenizer(text).all();
    detail::ScenParser p(std::move(toks), opt);
    auto sc = p.template parse<K>(field_hint);
    sc.canonical = text;
    return sc;
}

/* ---- task runner ---- */

namespace detail {

template <class K>
ElementSequence<K> need_seq(const Scenario<K>& sc,
                            const std::map<std::string, std::string>& params,
                            const std::string& key)
{
    auto it = params.find(key);
    if (it == params.end())
        throw ParseError("task needs parameter '" + key + "'");
    auto s = sc.sequences.find(it->second);
    if (s == sc.sequences.end())
        throw ParseError("unknown sequence '" + it->second + "'");
    return s->second;
}

template <class K>
Complex<K> need_module_complex(const Scenario<K>& sc,
                               const std::map<std::string, std::string>& p,
                               const std::string& key)
{
    auto it = p.find(key);
    if (it == p.end())
        throw ParseError("task needs parameter '" + key + "'");
    auto m = sc.modules.find(it->second);
    if (m == sc.modules.end())
        throw ParseError("unknown module '" + it->second + "'");
    return one_term_complex(m->second, 0);
}

inline std::uint32_t param_u32(const std::map<std::string, std::string>& p,
                               const std::string& key, std::uint32_t defv)
{
    auto it = p.find(key);
    if (it == p.end())
        return defv;
    long v = std::stol(it->second);
    if (v < 0 || v > 64)
        throw ParseError("parameter '" + key + "' out of bounds");
    return (std::uint32_t)v;
}

inline std::int64_t param_i64(const std::map<std::string, std::string>& p,
                              const std::string& key, std::int64_t defv)
{
    auto it = p.find(key);
    if (it == p.end())
        return defv;
    return std::stoll(it->second);
}

} // namespace detail

template <class K>
Json run_task(const Scenario<K>& sc, const typename Scenario<K>::Task& task,
              const RunOptions& opt)
{
    using namespace detail;
    Json out;
    out["name"] = task.kind;
    Json params;
    for (auto& [k, v] : task.params)
        params[k] = v;
    out["params"] = params;
    auto t0 = std::chrono::steady_clock::now();
    std::string verdict = "pass";
    Json details;

    auto J = param_u32(task.params, "level", opt.level);
    auto d0 = param_i64(task.params, "d0", opt.d0);
    auto d1 = param_i64(task.params, "d1", opt.d1);

    if (task.kind == "wpr_check") {
        auto cert = wpr_check(need_seq(sc, task.params, "seq"), J);
        details = json_of(cert);
        verdict = cert.certified ? "pass" : "undetermined";
    } else if (task.kind == "pro_zero_check") {
        auto it = task.params.find("tower");
        if (it == task.params.end() || !sc.towers.count(it->second))
            throw ParseError("pro_zero_check needs a tower");
        auto& spec = sc.towers.at(it->second);
        ModuleTower<K> t;
        t.direction = Direction::Inverse;
        for (std::uint32_t i = 0; i < J; ++i)
            t.levels.push_back(spec.module);
        for (std::uint32_t i = 0; i + 1 < J; ++i)
            t.transitions.push_back(
                ModuleMap<K>(spec.module, spec.module, spec.transition));
        auto cert = pro_zero_check(t);
        if (!pro_zero_reverify(t, cert))
            throw std::logic_error("pro-zero certificate failed re-check");
        details = json_of(cert);
        verdict = cert.certified ? "pass" : "undetermined";
    } else if (task.kind == "torsion_submodule") {
        auto seq = need_seq(sc, task.params, "seq");
        auto m = need_module_complex(sc, task.params, "module");
        auto t = torsion_submodule(m.component(0), seq, std::max(J, 8u));
        details["stabilizationLevel"] = t.stabilization_level;
        details["torsionGens"] = t.torsion.gens;
        details["isWholeModule"] = map_is_iso(t.inclusion);
        details["isZero"] = module_is_zero(t.torsion);
    } else if (task.kind == "radical_equal") {
        auto a = need_seq(sc, task.params, "seqA");
        auto b = need_seq(sc, task.params, "seqB");
        auto v = radical_equal(sc.ring, a.elems, b.elems);
        details["equal"] = v.equal;
        if (!v.equal) {
            details["witness"] = v.witness;
            verdict = "fail";
        }
    } else if (task.kind == "koszul_tower") {
        auto seq = need_seq(sc, task.params, "seq");
        auto t = koszul_tower(seq, J);
        Json ranks = Json::array();
        for (auto& lvl : t.tower.levels) {
            Json rr = Json::array();
            for (int k = complex_inf(lvl); k <= complex_sup(lvl); ++k)
                rr.push_back(lvl.component(k).gens);
            ranks.push_back(rr);
        }
        details["rankProfiles"] = ranks;
    } else if (task.kind == "w_quasi_iso") {
        auto seq = need_seq(sc, task.params, "seq");
        Json lv = Json::array();
        bool all = true;
        for (std::uint32_t j = 1; j <= J; ++j) {
            auto q = is_quasi_iso(w_map(seq, j));
            all = all && q.is_quasi_iso;
            lv.push_back(json_of_quasi_iso(q));
        }
        details["levels"] = lv;
        verdict = all ? "pass" : "fail";
    } else if (task.kind == "completion_tower") {
        auto seq = need_seq(sc, task.params, "seq");
        auto m = need_module_complex(sc, task.params, "module");
        auto ct = completion_tower(seq, m, J);
        if (sc.ring->graded()) {
            Json table;
            for (std::int64_t d = d0; d <= d1; ++d) {
                Json row = Json::array();
                for (auto& lvl : ct.tower.levels)
                    row.push_back(slice_cohomology(lvl, 0, d).dim);
                table[std::to_string(d)] = row;
            }
            details["h0DimsPerDegree"] = table;
        }
        details["levels"] = J;
    } else if (task.kind == "rgamma_table" || task.kind == "llambda_table") {
        auto seq = need_seq(sc, task.params, "seq");
        auto m = need_module_complex(sc, task.params, "module");
        if (!sc.ring->graded())
            throw ParseError("graded regime required for tables");
        SliceStore<K> store;
        Json table;
        if (task.kind == "rgamma_table") {
            auto rg = rgamma(m, seq, J, opt.resolution_length);
            std::vector<const Complex<K>*> lv;
            std::vector<const ComplexMap<K>*> tv;
            for (auto& c : rg.system.levels)
                lv.push_back(&c);
            for (auto& t : rg.system.transitions)
                tv.push_back(&t);
            for (int k = complex_inf(rg.res.complex);
                 k <= complex_sup(rg.res.complex) + (int)seq.size(); ++k)
                for (std::int64_t d = d0; d <= d1; ++d) {
                    auto cell =
                        stable_scan(store, lv, tv, Direction::Direct, k, d);
                    Json cj;
                    cj["dims"] = cell.dims;
                    cj["stable"] = cell.stabilized;
                    if (cell.stabilized) {
                        cj["stableDim"] = cell.stable_dim;
                        cj["stabilizationLevel"] = cell.stable_index + 1;
                    }
                    table[std::to_string(k) + "," + std::to_string(d)] = cj;
                }
        } else {
            auto ll = llambda(m, seq, J, opt.resolution_length);
            std::vector<const Complex<K>*> lv;
            std::vector<const ComplexMap<K>*> tv;
            for (auto& c : ll.tower.levels)
                lv.push_back(&c);
            for (auto& t : ll.tower.transitions)
                tv.push_back(&t);
            for (int k = complex_inf(ll.res.complex) - (int)seq.size();
                 k <= complex_sup(ll.res.complex); ++k)
                for (std::int64_t d = d0; d <= d1; ++d) {
                    ll.require_valid(k);
                    auto cell =
                        stable_scan(store, lv, tv, Direction::Inverse, k, d);
                    Json cj;
                    cj["dims"] = cell.dims;
                    cj["stable"] = cell.stabilized;
                    if (cell.stabilized) {
                        cj["stableDim"] = cell.stable_dim;
                        cj["stabilizationLevel"] = cell.stable_index + 1;
                    }
                    table[std::to_string(k) + "," + std::to_string(d)] = cj;
                }
        }
        details["cells"] = table;
    } else if (task.kind == "idempotence_verify") {
        auto seq = need_seq(sc, task.params, "seq");
        auto m = need_module_complex(sc, task.params, "module");
        auto rep = idempotence_verify(m, seq, J, d0, d1);
        details["rgammaSide"] = json_of(rep.rgamma_side);
        details["llambdaSide"] = json_of(rep.llambda_side);
        details["principalKernel"] = json_of(rep.principal_kernel);
        verdict = rep.pass() ? "pass" : "fail";
    } else if (task.kind == "torsion_char_verify") {
        auto seq = need_seq(sc, task.params, "seq");
        auto m = need_module_complex(sc, task.params, "module");
        auto rep = torsion_char_verify(m, seq, J);
        details["report"] = json_of(rep.report);
        details["onset"] = rep.onset;
        verdict = rep.report.verdict;
    } else if (task.kind == "mgm_verify") {
        auto seq = need_seq(sc, task.params, "seq");
        auto m = need_module_complex(sc, task.params, "module");
        auto rep = mgm_verify(m, seq, J, d0, d1);
        details["llambdaSigma"] = json_of(rep.llambda_sigma);
        details["rgammaTau"] = json_of(rep.rgamma_tau);
        details["roundTrip"] = json_of(rep.round_trip);
        verdict = rep.pass() ? "pass" : "fail";
    } else if (task.kind == "gm_duality_verify") {
        auto seq = need_seq(sc, task.params, "seq");
        auto m = need_module_complex(sc, task.params, "moduleM");
        auto nx = need_module_complex(sc, task.params, "moduleN");
        auto rep = gm_duality_verify(m, nx, seq, J, d0, d1);
        details["map1"] = json_of(rep.map1);
        details["map2"] = json_of(rep.map2);
        details["map3"] = json_of(rep.map3);
        details["map4"] = json_of(rep.map4);
        details["rho"] = json_of(rep.rho);
        verdict = rep.pass() ? "pass" : "fail";
    } else if (task.kind == "permanence_verify") {
        auto a = need_seq(sc, task.params, "seqA");
        auto b = need_seq(sc, task.params, "seqB");
        auto rep = permanence_verify(a, b, J, d0, d1);
        details["radicalEqual"] = rep.radical_ok;
        details["report"] = json_of(rep.report);
        verdict = rep.report.verdict == "hypothesis fails"
                      ? "fail"
                      : (rep.report.pass ? "pass" : "fail");
        if (rep.report.verdict == "hypothesis fails")
            details["witness"] = rep.report.notes;
    } else if (task.kind == "base_change_verify") {
        // source ring: a free polynomial ring over the same field, with
        // comma-separated variables and one bracketed image per variable
        auto itv = task.params.find("sourceVars");
        auto iti = task.params.find("images");
        auto ita = task.params.find("seqA");
        if (itv == task.params.end() || iti == task.params.end() ||
            ita == task.params.end())
            throw ParseError("base_change_verify needs sourceVars, images, seqA");
        std::vector<std::string> svars;
        {
            std::string cur;
            for (char c : itv->second) {
                if (c == ',') {
                    svars.push_back(cur);
                    cur.clear();
                } else
                    cur += c;
            }
            if (!cur.empty())
                svars.push_back(cur);
        }
        std::vector<std::uint32_t> sweights;
        if (sc.ring->graded())
            sweights.assign(svars.size(), 1);
        auto src_ring = make_ring(sc.ring->field, svars, sweights, {},
                                  sc.ring->ord);
        auto split_literals = [&](const std::string& joined) {
            std::vector<std::string> out;
            std::string cur;
            for (char c : joined) {
                if (c == '|') {
                    out.push_back(cur);
                    cur.clear();
                } else
                    cur += c;
            }
            if (!cur.empty())
                out.push_back(cur);
            for (auto& x : out)
                if (x.size() >= 2 && x.front() == '[' && x.back() == ']')
                    x = x.substr(1, x.size() - 2);
            return out;
        };
        std::vector<Poly<K>> images;
        for (auto& is2 : split_literals(iti->second))
            images.push_back(
                parse_poly_raw(sc.ring->field, sc.ring->vars, is2,
                               sc.ring->ord));
        RingMap<K> f(src_ring, sc.ring, images);
        std::vector<RElt<K>> aelems;
        for (auto& as : split_literals(ita->second))
            aelems.push_back(parse_elt(src_ring, as));
        ElementSequence<K> seq_a(src_ring, aelems);
        auto seq_b = need_seq(sc, task.params, "seqB");
        auto m = need_module_complex(sc, task.params, "module");
        auto rep = base_change_verify(f, seq_a, seq_b, m, J, d0, d1);
        details["radicalEqual"] = rep.radical_ok;
        details["report"] = json_of(rep.report);
        verdict = rep.report.verdict == "hypothesis fails"
                      ? "fail"
                      : (rep.report.pass ? "pass" : "fail");
    } else if (task.kind == "cone_triangle_verify") {
        auto seq = need_seq(sc, task.params, "seq");
        Json lv = Json::array();
        bool all = true;
        for (std::uint32_t j = 1; j <= J; ++j) {
            auto rep = cone_triangle_verify(seq, j);
            all = all && rep.pass;
            Json e;
            e["level"] = j;
            e["pass"] = rep.pass;
            e["notes"] = rep.notes;
            lv.push_back(e);
        }
        details["levels"] = lv;
        verdict = all ? "pass" : "fail";
    } else if (task.kind == "complete_char_verify") {
        auto seq = need_seq(sc, task.params, "seq");
        auto m = need_module_complex(sc, task.params, "module");
        auto rep = complete_char_verify(m, seq, J);
        details["complete"] = rep.complete;
        details["criteriaAgree"] = rep.agree;
        details["torsionSide"] = json_of(rep.torsion_side);
        details["tauSide"] = json_of(rep.tau_side);
        details["cechSide"] = json_of(rep.cech_side);
        if (!rep.witness.empty())
            details["witness"] = rep.witness;
        verdict = rep.agree ? "pass" : "fail";
        details["verdict"] = rep.verdict;
    } else {
        throw ParseError("unknown task '" + task.kind + "'", task.line, 1);
    }

    auto t1 = std::chrono::steady_clock::now();
    out["verdict"] = verdict;
    out["details"] = details;
    out["timeMs"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    return out;
}

template <class K>
Json run_scenario(const Scenario<K>& sc, const RunOptions& opt)
{
    Json rep;
    rep["engine"] = "adicalc";
    rep["version"] = engine_version();
    rep["field"] = sc.ring->field.name();
    rep["ring"] = sc.ring->key;
    rep["seed"] = opt.seed;
    rep["inputHash"] = [&] {
        std::ostringstream os;
        os << std::hex << fnv1a(sc.canonical + "#" + std::to_string(opt.seed));
        return os.str();
    }();

    std::vector<Json> results(sc.tasks.size());
    if (opt.jobs <= 1) {
        for (std::size_t i = 0; i < sc.tasks.size(); ++i)
            results[i] = run_task(sc, sc.tasks[i], opt);
    } else {
        std::vector<std::future<Json>> futs(sc.tasks.size());
        std::atomic<std::size_t> nextidx{0};
        auto worker = [&]() {
            for (;;) {
                std::size_t i = nextidx.fetch_add(1);
                if (i >= sc.tasks.size())
                    break;
                std::promise<Json> p;
                futs[i] = p.get_future();
                try {
                    p.set_value(run_task(sc, sc.tasks[i], opt));
                } catch (...) {
                    p.set_exception(std::current_exception());
                }
            }
        };
        // simple deterministic fan-out: results assembled in declaration order
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < opt.jobs; ++t)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
        for (std::size_t i = 0; i < sc.tasks.size(); ++i)
            results[i] = futs[i].get();
    }

    Json tasks = Json::array();
    std::size_t passed = 0, failed = 0, na = 0, undet = 0;
    for (auto& r : results) {
        std::string v = r["verdict"];
        if (v == "pass")
            ++passed;
        else if (v == "not-applicable")
            ++na;
        else if (v == "undetermined")
            ++undet;
        else
            ++failed;
        tasks.push_back(r);
    }
    rep["tasks"] = tasks;
    Json summary;
    summary["total"] = sc.tasks.size();
    summary["passed"] = passed;
    summary["failed"] = failed;
    summary["notApplicable"] = na;
    summary["undetermined"] = undet;
    rep["summary"] = summary;
    rep["exit"] = (failed == 0 && undet == 0) ? 0 : 1;
    return rep;
}

} // namespace adic

#endif
