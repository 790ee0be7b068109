#include "secat/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "secat/dsl.hpp"
#include "secat/examples.hpp"
#include "secat/report.hpp"
#include "secat/secondary.hpp"
#include "secat/steenrod.hpp"
#include "secat/weights.hpp"

namespace secat::cli {

namespace {

using f2::BitVec;
using report::json;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const dsl::Document::ModuleDecl& need_module(const dsl::Document& doc,
                                             const std::string& name) {
    const auto* m = doc.find_module(name);
    if (!m) throw std::runtime_error("no module named " + name);
    return *m;
}

const dsl::Document::MapDecl& need_map(const dsl::Document& doc, const std::string& name) {
    const auto* m = doc.find_map(name);
    if (!m) throw std::runtime_error("no map named " + name);
    return *m;
}

const dsl::Document::DiagramDecl& need_diagram(const dsl::Document& doc,
                                               const std::string& name) {
    const auto* d = doc.find_diagram(name);
    if (!d) throw std::runtime_error("no diagram named " + name);
    return *d;
}

// Emit either the accumulated text or the JSON payload.
void emit(std::ostream& out, bool as_json, const std::string& text, const json& payload) {
    if (as_json)
        out << payload.dump(2) << "\n";
    else
        out << text;
}

struct Text {
    std::string s;
    void operator()(const std::string& line) { s += line + "\n"; }
};

// ---- polynomial parsing for `action` ----

steenrod::Poly parse_poly(const std::string& text, const std::vector<std::string>& names,
                          const std::vector<int>& degrees) {
    auto find_var = [&](const std::string& n) -> std::size_t {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == n) return i;
        throw std::runtime_error("unknown variable " + n + " (declare it with --var)");
    };
    steenrod::Poly p = steenrod::Poly::zero(degrees);
    std::string compact;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
    std::stringstream terms(compact);
    std::string term;
    while (std::getline(terms, term, '+')) {
        if (term.empty()) throw std::runtime_error("empty term in polynomial");
        std::vector<int> expo(names.size(), 0);
        bool is_one = term == "1";
        if (!is_one) {
            std::stringstream factors(term);
            std::string factor;
            while (std::getline(factors, factor, '*')) {
                auto caret = factor.find('^');
                std::string name = factor.substr(0, caret);
                int e = 1;
                if (caret != std::string::npos) e = std::stoi(factor.substr(caret + 1));
                if (e < 0) throw std::runtime_error("negative exponent");
                expo[find_var(name)] += e;
            }
        }
        p = steenrod::add(p, steenrod::Poly::monomial(degrees, expo));
    }
    return p;
}

std::string poly_str(const steenrod::Poly& p, const std::vector<std::string>& names) {
    if (p.monomials.empty()) return "0";
    std::string s;
    for (const auto& m : p.monomials) {
        std::string t;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (!t.empty()) t += "*";
            t += names[i];
            if (m[i] > 1) t += "^" + std::to_string(m[i]);
        }
        if (t.empty()) t = "1";
        if (!s.empty()) s += " + ";
        s += t;
    }
    return s;
}

// ---- shared validation pass ----

bool validate_document(const dsl::Document& doc, Text& say, json& payload) {
    bool ok = true;
    json jv = json::object();
    for (const auto& m : doc.modules) {
        mod::ValidityReport r = m.has_products ? mod::validate_algebra(m.compiled)
                                               : mod::validate_module(m.compiled.module);
        bool good = r.admissible();
        say("module " + m.name + ": " + (good ? "ok" : r.to_string()));
        jv["module " + m.name] = good ? "ok" : r.to_string();
        ok = ok && good;
    }
    for (const auto& mp : doc.maps) {
        const auto& src = need_module(doc, mp.from).compiled.module;
        const auto& tgt = need_module(doc, mp.to).compiled.module;
        mod::ValidityReport r = mod::validate_map(mp.compiled, src, tgt, true);
        bool good = r.admissible();
        say("map " + mp.name + ": " + (good ? "ok" : r.to_string()));
        jv["map " + mp.name] = good ? "ok" : r.to_string();
        ok = ok && good;
    }
    for (const auto& dd : doc.diagrams) {
        auto diagram = doc.build_diagram(dd);
        mod::ValidityReport r = secondary::validate_diagram(diagram);
        bool good = r.admissible();
        std::string note = good ? "ok (" + std::to_string(r.admissible_resolutions.size()) +
                                      "/" + std::to_string(diagram.resolution_count()) +
                                      " resolutions admissible)"
                                : r.to_string();
        say("diagram " + dd.name + ": " + note);
        jv["diagram " + dd.name] = note;
        ok = ok && good;
    }
    payload["validate"] = jv;
    return ok;
}

// Class label -> (degree, unit vector) within a module; demands an exact label.
std::pair<int, BitVec> locate(const mod::SteenrodModule& m, const std::string& label) {
    auto loc = m.find_label(label);
    if (!loc) throw std::runtime_error("no basis element " + label + " in " + m.name);
    return {loc->first, BitVec::unit(m.dim(loc->first), loc->second)};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact mod-2 cohomology bounds for sectional category"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "emit a machine-readable JSON payload");

    int rc = 0;

    // validate FILE
    std::string v_file;
    auto* v = app.add_subcommand("validate", "check modules, maps and diagrams in a file");
    v->add_flag("--json", as_json);
    v->add_option("file", v_file, "input file, or - for stdin")->required();
    v->callback([&] {
        std::string text = read_input(v_file);
        json payload = report::base("validate", text);
        Text say;
        dsl::Document doc = dsl::parse(text);
        bool ok = validate_document(doc, say, payload);
        say(ok ? "ok" : "INVALID");
        payload["ok"] = ok;
        emit(out, as_json, say.s, payload);
        rc = ok ? 0 : 1;
    });

    // adem WORD
    std::vector<std::string> a_word;
    auto* a = app.add_subcommand("adem", "admissible normal form of a Steenrod word");
    a->add_flag("--json", as_json);
    a->add_option("word", a_word, "e.g. Sq2 Sq2")->required()->expected(-1);
    a->callback([&] {
        std::string joined;
        for (const auto& w : a_word) joined += (joined.empty() ? "" : " ") + w;
        auto word = steenrod::parse_word(joined);
        auto nf = steenrod::adem_rewrite(word);
        json payload = report::base("adem", joined);
        payload["input"] = steenrod::to_string(word);
        payload["normal_form"] = steenrod::to_string(nf);
        emit(out, as_json, steenrod::to_string(word) + " = " + steenrod::to_string(nf) + "\n",
             payload);
    });

    // action WORD POLY --var name=deg ...
    std::string ac_word;
    std::string ac_poly;
    std::vector<std::string> ac_vars;
    auto* ac = app.add_subcommand("action", "Steenrod action on a truncated-free polynomial");
    ac->add_flag("--json", as_json);
    ac->add_option("word", ac_word, "e.g. \"Sq2 Sq1\"")->required();
    ac->add_option("poly", ac_poly, "e.g. x^2*y + y")->required();
    ac->add_option("--var", ac_vars, "variable as name=degree, in order")->required();
    ac->callback([&] {
        std::vector<std::string> names;
        std::vector<int> degrees;
        for (const auto& spec : ac_vars) {
            auto eq = spec.find('=');
            if (eq == std::string::npos) throw std::runtime_error("--var expects name=degree");
            names.push_back(spec.substr(0, eq));
            degrees.push_back(std::stoi(spec.substr(eq + 1)));
        }
        auto word = steenrod::parse_word(ac_word);
        auto p = parse_poly(ac_poly, names, degrees);
        auto q = steenrod::poly_action(word, p);
        json payload = report::base("action", ac_word + " | " + ac_poly);
        payload["word"] = steenrod::to_string(word);
        payload["input"] = poly_str(p, names);
        payload["result"] = poly_str(q, names);
        emit(out, as_json,
             steenrod::to_string(word) + " (" + poly_str(p, names) + ") = " +
                 poly_str(q, names) + "\n",
             payload);
    });

    // dims GENS MAXDEG
    std::string dm_gens;
    int dm_max = 0;
    auto* dm = app.add_subcommand("dims", "word counts of a free tensor algebra by degree");
    dm->add_flag("--json", as_json);
    dm->add_option("generators", dm_gens, "comma-separated degrees, e.g. 2,7")->required();
    dm->add_option("maxdeg", dm_max, "top degree")->required();
    dm->callback([&] {
        std::vector<int> gens;
        std::stringstream ss(dm_gens);
        std::string tok;
        while (std::getline(ss, tok, ',')) gens.push_back(std::stoi(tok));
        auto counts = mod::tensor_algebra_dims(gens, dm_max);
        json payload = report::base("dims", dm_gens + " " + std::to_string(dm_max));
        payload["generators"] = gens;
        payload["counts"] = counts;
        Text say;
        for (std::size_t d = 0; d < counts.size(); ++d)
            say(std::to_string(d) + ": " + std::to_string(counts[d]));
        emit(out, as_json, say.s, payload);
    });

    // wgt FILE MAP...
    std::string w_file;
    std::vector<std::string> w_maps;
    auto* w = app.add_subcommand("wgt", "weight bounds from a list q(0)*, q(1)*, ... of maps");
    w->add_flag("--json", as_json);
    w->add_option("file", w_file)->required();
    w->add_option("maps", w_maps, "map names, k-th entry is q(k)*")->required()->expected(-1);
    w->callback([&] {
        std::string text = read_input(w_file);
        dsl::Document doc = dsl::parse(text);
        std::vector<weights::MapWithModules> list;
        for (const auto& name : w_maps) {
            const auto& mp = need_map(doc, name);
            list.push_back({mp.compiled, need_module(doc, mp.from).compiled.module,
                            need_module(doc, mp.to).compiled.module});
        }
        auto wr = weights::weight_report(list);
        json payload = report::base("wgt", text);
        Text say;
        json je = json::array();
        bool definite = true;
        for (const auto& e : wr.entries) {
            std::string retr = e.retraction_definite
                                   ? (e.retraction_sat ? "SAT" : "UNSAT")
                                   : "mixed across ambiguity resolutions";
            say("q(" + std::to_string(e.k) + ")* = " + e.map_name + ": " +
                (e.injective ? "injective" : "not injective") + ", retraction " + retr);
            je.push_back({{"k", e.k},
                          {"map", e.map_name},
                          {"injective", e.injective},
                          {"retraction", retr}});
            definite = definite && e.retraction_definite;
        }
        say(wr.wgt ? "wgt >= " + std::to_string(*wr.wgt) + " and q(" +
                         std::to_string(*wr.wgt) + ")* injective => wgt = " +
                         std::to_string(*wr.wgt)
                   : "wgt >= " + std::to_string(wr.wgt_lower) +
                         " (no injective map in the list)");
        say(wr.mwgt_upper ? "Mwgt >= " + std::to_string(wr.mwgt_lower) +
                                ", retraction at k = " + std::to_string(*wr.mwgt_upper) +
                                " => Mwgt <= " + std::to_string(*wr.mwgt_upper) +
                                " given this data"
                          : "Mwgt >= " + std::to_string(wr.mwgt_lower));
        for (const auto& warn : wr.warnings) say("warning: " + warn);
        payload["entries"] = je;
        payload["wgt"] = wr.wgt ? json(*wr.wgt) : json(nullptr);
        payload["wgt_lower"] = wr.wgt_lower;
        payload["mwgt_lower"] = wr.mwgt_lower;
        payload["mwgt_upper"] = wr.mwgt_upper ? json(*wr.mwgt_upper) : json(nullptr);
        payload["warnings"] = wr.warnings;
        emit(out, as_json, say.s, payload);
        rc = definite ? 0 : 2;
    });

    // nilker FILE MAP
    std::string n_file, n_map;
    auto* n = app.add_subcommand("nilker", "nilpotency of the kernel ideal of a map");
    n->add_flag("--json", as_json);
    n->add_option("file", n_file)->required();
    n->add_option("map", n_map)->required();
    n->callback([&] {
        std::string text = read_input(n_file);
        dsl::Document doc = dsl::parse(text);
        const auto& mp = need_map(doc, n_map);
        int nk = weights::nil_ker(mp.compiled, need_module(doc, mp.from).compiled,
                                  need_module(doc, mp.to).compiled);
        json payload = report::base("nilker", text);
        payload["map"] = n_map;
        payload["nil_ker"] = nk;
        emit(out, as_json, "nil-ker(" + n_map + ") = " + std::to_string(nk) + "\n", payload);
    });

    // retraction FILE MAP [--all-completions]
    std::string r_file, r_map;
    bool r_all = false;
    auto* r = app.add_subcommand("retraction", "solve for an equivariant retraction of a map");
    r->add_flag("--json", as_json);
    r->add_option("file", r_file)->required();
    r->add_option("map", r_map)->required();
    r->add_flag("--all-completions", r_all, "report every ambiguity resolution separately");
    r->callback([&] {
        std::string text = read_input(r_file);
        dsl::Document doc = dsl::parse(text);
        const auto& mp = need_map(doc, r_map);
        const auto& src = need_module(doc, mp.from).compiled.module;
        const auto& tgt = need_module(doc, mp.to).compiled.module;
        auto outc = weights::retraction_exists(mp.compiled, src, tgt);
        json payload = report::base("retraction", text);
        payload["map"] = r_map;
        Text say;
        json jr = json::array();
        for (const auto& c : outc.per_resolution) {
            json jc = {{"resolution", c.resolution}, {"sat", c.sat}};
            std::string line = "resolution " + std::to_string(c.resolution) + ": " +
                               (c.sat ? "SAT" : "UNSAT");
            if (!c.sat) {
                if (!c.chain.empty()) {
                    line += "; " + c.chain;
                    jc["chain"] = c.chain;
                } else {
                    line += "; rank witness " + std::to_string(c.rank_a) + " < " +
                            std::to_string(c.rank_aug);
                    jc["rank_a"] = c.rank_a;
                    jc["rank_aug"] = c.rank_aug;
                }
            }
            if (r_all || outc.per_resolution.size() == 1) say(line);
            jr.push_back(jc);
        }
        std::string verdict = outc.all_sat()     ? "SAT for every ambiguity resolution"
                              : outc.all_unsat() ? "UNSAT for every ambiguity resolution"
                                                 : "mixed across ambiguity resolutions";
        say(verdict);
        payload["resolutions"] = jr;
        payload["verdict"] = verdict;
        emit(out, as_json, say.s, payload);
        rc = outc.mixed() ? 2 : 0;
    });

    // delta FILE DIAGRAM CLASS
    std::string d_file, d_diag, d_class;
    auto* d = app.add_subcommand("delta", "secondary operation Delta on a class of C");
    d->add_flag("--json", as_json);
    d->add_option("file", d_file)->required();
    d->add_option("diagram", d_diag)->required();
    d->add_option("class", d_class, "basis label in the C node")->required();
    d->callback([&] {
        std::string text = read_input(d_file);
        dsl::Document doc = dsl::parse(text);
        auto diagram = doc.build_diagram(need_diagram(doc, d_diag));
        auto vr = secondary::validate_diagram(diagram);
        if (!vr.admissible()) throw std::runtime_error("invalid diagram: " + vr.to_string());
        json payload = report::base("delta", text);
        payload["diagram"] = d_diag;
        payload["class"] = d_class;
        Text say;
        json jr = json::array();
        bool any_indefinite = false;
        for (std::size_t ri : vr.admissible_resolutions) {
            auto conc = diagram.materialize(ri);
            auto [deg, x] = locate(conc.C, d_class);
            auto res = secondary::delta(conc, deg, x);
            json jc = {{"resolution", ri}, {"defined", res.defined}};
            std::string line = "resolution " + std::to_string(ri) + ": ";
            if (!res.defined) {
                line += "undefined (" + res.failure + ")";
                jc["failure"] = res.failure;
                any_indefinite = true;
            } else {
                std::string val = conc.SX.describe(deg + 4, res.value);
                line += "Delta(" + d_class + ") = " + val + " mod im B (dim " +
                        std::to_string(res.im_B.dim()) + ")" +
                        (res.lift_independent ? ", lift-independent" : "");
                jc["value"] = val;
                jc["nonzero"] = res.nonzero();
                jc["indeterminacy_dim"] = res.im_B.dim();
                jc["lift_independent"] = res.lift_independent;
            }
            say(line);
            jr.push_back(jc);
        }
        payload["resolutions"] = jr;
        emit(out, as_json, say.s, payload);
        rc = any_indefinite ? 2 : 0;
    });

    // certify FILE DIAGRAM CLASS --base --via --target [--k] [--invariant]
    std::string c_file, c_diag, c_class, c_base, c_via, c_target, c_inv = "secat";
    int c_k = 1;
    auto* c = app.add_subcommand("certify",
                                 "secondary-obstruction certificate: Swgt >= k+1");
    c->add_flag("--json", as_json);
    c->add_option("file", c_file)->required();
    c->add_option("diagram", c_diag)->required();
    c->add_option("class", c_class, "basis label in the C node")->required();
    c->add_option("--base", c_base, "base module of the fibred-join map")->required();
    c->add_option("--via", c_via, "the map q(k)* out of the base")->required();
    c->add_option("--target", c_target, "label in the base hit by Phi")->required();
    c->add_option("--k", c_k, "join stage (default 1)");
    c->add_option("--invariant", c_inv, "secat or cat")
        ->check(CLI::IsMember({"secat", "cat"}));
    c->callback([&] {
        std::string text = read_input(c_file);
        dsl::Document doc = dsl::parse(text);
        auto diagram = doc.build_diagram(need_diagram(doc, c_diag));
        auto vr = secondary::validate_diagram(diagram);
        if (!vr.admissible()) throw std::runtime_error("invalid diagram: " + vr.to_string());
        const auto& base = need_module(doc, c_base).compiled.module;
        const auto& qk = need_map(doc, c_via).compiled;
        auto [udeg, u] = locate(base, c_target);
        json payload = report::base("certify", text);
        payload["diagram"] = c_diag;
        payload["class"] = c_class;
        Text say;
        bool established = true;
        json jr = json::array();
        secondary::ObstructionReport last;
        for (std::size_t ri : vr.admissible_resolutions) {
            auto conc = diagram.materialize(ri);
            auto [deg, x] = locate(conc.C, c_class);
            if (udeg != deg + 3)
                throw std::runtime_error("--target must live three degrees above the class");
            auto rep = secondary::swgt_certificate(base, qk, c_k, conc, deg, x, u);
            rep.resolution = ri;
            bool est = rep.verdict == secondary::ObstructionReport::Verdict::Established;
            if (est && !secondary::replay_certificate(rep, base, qk, conc, x))
                throw std::logic_error("certificate replay failed");
            say("resolution " + std::to_string(ri) + ": " +
                (est ? "established; " : "inconclusive; ") + rep.message);
            jr.push_back({{"resolution", ri},
                          {"established", est},
                          {"message", rep.message},
                          {"provenance", rep.provenance}});
            established = established && est;
            last = rep;
        }
        if (established) {
            for (const auto& p : last.provenance) say("input assertion: " + p);
            say("Swgt >= " + std::to_string(c_k + 1) + " => " + c_inv + " >= " +
                std::to_string(c_k + 1));
        }
        payload["resolutions"] = jr;
        payload["established"] = established;
        payload["bound"] = established ? json(c_k + 1) : json(nullptr);
        payload["invariant"] = c_inv;
        emit(out, as_json, say.s, payload);
        rc = established ? 0 : 2;
    });

    // example NAME
    std::string e_name;
    auto* e = app.add_subcommand("example", "run a shipped end-to-end computation");
    e->add_flag("--json", as_json);
    e->add_option("name", e_name, "twistor or twocell")
        ->required()
        ->check(CLI::IsMember({"twistor", "twocell"}));
    e->callback([&] {
        auto res = e_name == "twistor" ? examples::run_twistor() : examples::run_twocell();
        emit(out, as_json, res.text, res.payload);
        rc = res.exit_code;
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& ex) {
        return app.exit(ex, out, err);
    } catch (const dsl::ParseError& ex) {
        err << "parse error: " << ex.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return 1;
    }
    return rc;
}

}  // namespace secat::cli
