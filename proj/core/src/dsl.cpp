#include "secat/dsl.hpp"

#include <algorithm>
#include <sstream>

namespace secat::dsl {

using f2::BitMatrix;
using f2::BitVec;

namespace {

std::vector<std::string> tokenize(std::string line) {
    for (const char* pat : {"->", "=", "{", "}", "|"}) {
        std::string p(pat), spaced = " " + p + " ";
        std::size_t pos = 0;
        while ((pos = line.find(p, pos)) != std::string::npos) {
            // "=" must not split the "->" we just spaced; "-" is not "="
            line.replace(pos, p.size(), spaced);
            pos += spaced.size();
        }
    }
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string t;
    while (ss >> t) out.push_back(t);
    return out;
}

int parse_int(const std::string& t, int line, const char* what) {
    try {
        std::size_t used = 0;
        int v = std::stoi(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, std::string("expected ") + what + ", got '" + t + "'");
    }
}

// expr := 0 | label { + label }
std::vector<std::string> parse_expr(const std::vector<std::string>& toks, std::size_t& i,
                                    int line) {
    std::vector<std::string> out;
    if (i >= toks.size()) throw ParseError(line, "expected expression");
    if (toks[i] == "0") {
        ++i;
        return out;
    }
    out.push_back(toks[i++]);
    while (i + 1 < toks.size() && toks[i] == "+") {
        out.push_back(toks[i + 1]);
        i += 2;
    }
    return out;
}

struct ModuleBuilder {
    Document::ModuleDecl decl;
    int line_declared = 0;

    std::pair<int, std::size_t> locate(const std::string& label, int line) const {
        auto loc = decl.compiled.module.find_label(label);
        if (!loc)
            throw ParseError(line, "unknown label '" + label + "' in module " + decl.name);
        return *loc;
    }

    BitVec compile_expr(const std::vector<std::string>& labels, int degree, int line) const {
        const mod::SteenrodModule& m = decl.compiled.module;
        BitVec v(m.dim(degree));
        for (const auto& l : labels) {
            auto loc = locate(l, line);
            if (loc.first != degree)
                throw ParseError(line, "label '" + l + "' has degree " +
                                           std::to_string(loc.first) + ", expected " +
                                           std::to_string(degree));
            v.flip(loc.second);
        }
        return v;
    }
};

}  // namespace

Document parse(const std::string& text) {
    Document doc;
    std::istringstream input(text);
    std::string raw;
    int line = 0;

    ModuleBuilder* mb = nullptr;
    std::vector<ModuleBuilder> builders;
    Document::MapDecl* mapd = nullptr;
    Document::DiagramDecl* diag = nullptr;

    auto module_index = [&](const std::string& name) -> const ModuleBuilder* {
        for (const auto& b : builders)
            if (b.decl.name == name) return &b;
        return nullptr;
    };

    auto finish_map = [&](Document::MapDecl& md, int at) {
        const ModuleBuilder* sb = module_index(md.from);
        const ModuleBuilder* tb = module_index(md.to);
        const mod::SteenrodModule& src = sb->decl.compiled.module;
        const mod::SteenrodModule& tgt = tb->decl.compiled.module;
        std::vector<std::string> missing;
        for (int d = 0; d <= src.max_degree; ++d)
            for (const auto& l : src.basis[d])
                if (std::none_of(md.lines.begin(), md.lines.end(),
                                 [&](const auto& p) { return p.first == l; }))
                    missing.push_back(l);
        if (!missing.empty())
            throw ParseError(at, "map " + md.name + " is missing entries for: " + missing[0]);
        md.compiled.name = md.name;
        md.compiled.source_name = md.from;
        md.compiled.target_name = md.to;
        md.compiled.shift = md.shift;
        for (const auto& [label, value] : md.lines) {
            auto loc = src.find_label(label);
            int d = loc->first;
            if (d + md.shift > tgt.max_degree) continue;  // only "0" allowed; checked on read
            auto it = md.compiled.mats.find(d);
            if (it == md.compiled.mats.end())
                it = md.compiled.mats.emplace(d, BitMatrix(tgt.dim(d + md.shift), src.dim(d)))
                         .first;
            BitVec v(tgt.dim(d + md.shift));
            for (const auto& l : value) {
                auto tl = tgt.find_label(l);
                v.flip(tl->second);
            }
            it->second.set_col(loc->second, v);
        }
    };

    while (std::getline(input, raw)) {
        ++line;
        std::string comment;
        std::string body = raw;
        if (auto h = body.find('#'); h != std::string::npos) {
            comment = body.substr(h + 1);
            body = body.substr(0, h);
            // trim
            auto b = comment.find_first_not_of(" \t");
            auto e = comment.find_last_not_of(" \t\r");
            comment = b == std::string::npos ? "" : comment.substr(b, e - b + 1);
            if (comment.find('[') != std::string::npos)
                doc.provenance_notes.push_back(comment);
        }
        auto toks = tokenize(body);
        if (toks.empty()) continue;
        const std::string& kw = toks[0];

        if (mb) {
            mod::SteenrodModule& m = mb->decl.compiled.module;
            if (kw == "END") {
                doc.modules.push_back(mb->decl);
                mb = nullptr;
            } else if (kw == "GEN") {
                if (toks.size() != 3) throw ParseError(line, "GEN label degree");
                int d = parse_int(toks[2], line, "degree");
                if (d < 0 || d > m.max_degree)
                    throw ParseError(line, "generator degree out of range");
                if (m.find_label(toks[1]))
                    throw ParseError(line, "duplicate label '" + toks[1] + "'");
                m.basis[d].push_back(toks[1]);
                mb->decl.gens.emplace_back(toks[1], d);
            } else if (kw == "SQ") {
                if (toks.size() < 5 || toks[3] != "=")
                    throw ParseError(line, "SQ k label = expr");
                int k = parse_int(toks[1], line, "k");
                if (k < 1) throw ParseError(line, "SQ exponent must be >= 1");
                auto [d, col] = mb->locate(toks[2], line);
                if (d + k > m.max_degree)
                    throw ParseError(line, "SQ target degree " + std::to_string(d + k) +
                                               " exceeds MAXDEG");
                std::size_t i = 4;
                auto value = parse_expr(toks, i, line);
                if (i != toks.size()) throw ParseError(line, "trailing tokens after SQ value");
                for (const auto& sd : mb->decl.sqs)
                    if (sd.k == k && sd.label == toks[2])
                        throw ParseError(line, "duplicate SQ entry");
                BitVec v = mb->compile_expr(value, d + k, line);
                auto key = std::make_pair(k, d);
                auto it = m.sq.find(key);
                if (it == m.sq.end())
                    it = m.sq.emplace(key, BitMatrix(m.dim(d + k), m.dim(d))).first;
                it->second.set_col(col, v);
                mb->decl.sqs.push_back({k, toks[2], value});
            } else if (kw == "MUL") {
                if (toks.size() < 5 || toks[3] != "=")
                    throw ParseError(line, "MUL l1 l2 = expr");
                auto [d1, i1] = mb->locate(toks[1], line);
                auto [d2, i2] = mb->locate(toks[2], line);
                if (d1 + d2 > m.max_degree)
                    throw ParseError(line, "product degree exceeds MAXDEG");
                std::size_t i = 4;
                auto value = parse_expr(toks, i, line);
                if (i != toks.size()) throw ParseError(line, "trailing tokens after MUL value");
                BitVec v = mb->compile_expr(value, d1 + d2, line);
                auto& mul = mb->decl.compiled.mul;
                auto ins = [&](int da, int db, std::size_t ia, std::size_t ib) {
                    auto it = mul.find({da, db});
                    if (it == mul.end())
                        it = mul.emplace(std::make_pair(da, db),
                                         BitMatrix(m.dim(da + db), m.dim(da) * m.dim(db)))
                                 .first;
                    it->second.set_col(ia * m.dim(db) + ib, v);
                };
                ins(d1, d2, i1, i2);
                ins(d2, d1, i2, i1);  // graded commutativity, mod 2
                mb->decl.has_products = true;
                mb->decl.compiled.has_products = true;
                mb->decl.muls.push_back({toks[1], toks[2], value});
            } else if (kw == "AMBIG") {
                // AMBIG SQ k label IN { expr | expr ... }
                if (toks.size() < 8 || toks[1] != "SQ" || toks[4] != "IN" || toks[5] != "{")
                    throw ParseError(line, "AMBIG SQ k label IN { expr | expr }");
                int k = parse_int(toks[2], line, "k");
                auto [d, col] = mb->locate(toks[3], line);
                if (d + k > m.max_degree)
                    throw ParseError(line, "AMBIG target degree exceeds MAXDEG");
                for (const auto& sd : mb->decl.sqs)
                    if (sd.k == k && sd.label == toks[3])
                        throw ParseError(line, "AMBIG conflicts with an explicit SQ entry");
                Document::AmbigDecl ad{k, toks[3], {}};
                mod::AmbiguitySlot slot{k, d, col, toks[3], {}};
                std::size_t i = 6;
                while (true) {
                    auto value = parse_expr(toks, i, line);
                    ad.alternatives.push_back(value);
                    slot.alternatives.push_back(mb->compile_expr(value, d + k, line));
                    if (i >= toks.size()) throw ParseError(line, "unterminated AMBIG list");
                    if (toks[i] == "}") {
                        ++i;
                        break;
                    }
                    if (toks[i] != "|") throw ParseError(line, "expected '|' or '}'");
                    ++i;
                }
                if (i != toks.size()) throw ParseError(line, "trailing tokens after AMBIG");
                if (slot.alternatives.size() < 2)
                    throw ParseError(line, "AMBIG needs at least two alternatives");
                m.slots.push_back(std::move(slot));
                mb->decl.ambigs.push_back(std::move(ad));
            } else if (kw == "ASSERT") {
                if (toks.size() != 5 || toks[1] != "NONZERO" || toks[2] != "SQ")
                    throw ParseError(line, "ASSERT NONZERO SQ k label");
                int k = parse_int(toks[3], line, "k");
                auto [d, col] = mb->locate(toks[4], line);
                (void)d;
                (void)col;
                std::string prov = comment.find('[') != std::string::npos ? "# " + comment : "";
                m.asserts.push_back({k, toks[4], prov});
                mb->decl.asserts.push_back({k, toks[4], prov});
            } else {
                throw ParseError(line, "unexpected directive '" + kw + "' inside MODULE");
            }
            continue;
        }

        if (mapd) {
            if (kw == "END") {
                finish_map(*mapd, line);
                mapd = nullptr;
                continue;
            }
            if (toks.size() < 3 || toks[1] != "->")
                throw ParseError(line, "expected 'label -> expr' inside MAP");
            const ModuleBuilder* sb = module_index(mapd->from);
            const ModuleBuilder* tb = module_index(mapd->to);
            auto loc = sb->decl.compiled.module.find_label(toks[0]);
            if (!loc)
                throw ParseError(line, "unknown source label '" + toks[0] + "'");
            std::size_t i = 2;
            auto value = parse_expr(toks, i, line);
            if (i != toks.size()) throw ParseError(line, "trailing tokens after map entry");
            for (const auto& [l, v] : mapd->lines)
                if (l == toks[0]) throw ParseError(line, "duplicate map entry for '" + l + "'");
            int tdeg = loc->first + mapd->shift;
            if (tdeg > tb->decl.compiled.module.max_degree) {
                if (!value.empty())
                    throw ParseError(line, "target degree " + std::to_string(tdeg) +
                                               " exceeds the target's MAXDEG; only 0 allowed");
            } else {
                for (const auto& l : value) {
                    auto tl = tb->decl.compiled.module.find_label(l);
                    if (!tl)
                        throw ParseError(line, "unknown target label '" + l + "'");
                    if (tl->first != tdeg)
                        throw ParseError(line, "label '" + l + "' has degree " +
                                                   std::to_string(tl->first) + ", expected " +
                                                   std::to_string(tdeg));
                }
            }
            mapd->lines.emplace_back(toks[0], value);
            continue;
        }

        if (diag) {
            if (kw == "END") {
                diag = nullptr;
            } else if (kw == "NODES") {
                std::size_t i = 1;
                while (i + 3 <= toks.size()) {
                    if (toks[i + 1] != "=") throw ParseError(line, "NODES Y=mod C=mod ...");
                    const std::string& key = toks[i];
                    const std::string& val = toks[i + 2];
                    if (key == "Y")
                        diag->Y = val;
                    else if (key == "C")
                        diag->C = val;
                    else if (key == "SX")
                        diag->SX = val;
                    else if (key == "SY")
                        diag->SY = val;
                    else
                        throw ParseError(line, "unknown node '" + key + "'");
                    i += 3;
                }
                if (i != toks.size()) throw ParseError(line, "malformed NODES line");
            } else if (kw == "MAPS") {
                std::size_t i = 1;
                while (i + 3 <= toks.size()) {
                    if (toks[i + 1] != "=")
                        throw ParseError(line, "MAPS jstar=map taustar=map sfstar=map");
                    const std::string& key = toks[i];
                    const std::string& val = toks[i + 2];
                    if (key == "jstar")
                        diag->jstar = val;
                    else if (key == "taustar")
                        diag->taustar = val;
                    else if (key == "sfstar")
                        diag->sfstar = val;
                    else
                        throw ParseError(line, "unknown diagram map '" + key + "'");
                    i += 3;
                }
                if (i != toks.size()) throw ParseError(line, "malformed MAPS line");
            } else if (kw == "EXACT") {
                diag->exact = true;
            } else {
                throw ParseError(line, "unexpected directive '" + kw + "' inside DIAGRAM");
            }
            continue;
        }

        if (kw == "MODULE") {
            if (toks.size() != 4 || toks[2] != "MAXDEG")
                throw ParseError(line, "MODULE name MAXDEG D");
            if (module_index(toks[1]))
                throw ParseError(line, "duplicate module '" + toks[1] + "'");
            builders.emplace_back();
            mb = &builders.back();
            mb->line_declared = line;
            mb->decl.name = toks[1];
            mb->decl.max_degree = parse_int(toks[3], line, "MAXDEG");
            if (mb->decl.max_degree < 0) throw ParseError(line, "MAXDEG must be >= 0");
            mb->decl.compiled.module.name = toks[1];
            mb->decl.compiled.module.max_degree = mb->decl.max_degree;
            mb->decl.compiled.module.basis.assign(mb->decl.max_degree + 1, {});
        } else if (kw == "MAP") {
            if (toks.size() != 8 || toks[2] != "FROM" || toks[4] != "TO" || toks[6] != "SHIFT")
                throw ParseError(line, "MAP name FROM mod TO mod SHIFT s");
            for (const auto& m : doc.maps)
                if (m.name == toks[1]) throw ParseError(line, "duplicate map '" + toks[1] + "'");
            if (!module_index(toks[3]))
                throw ParseError(line, "unknown source module '" + toks[3] + "'");
            if (!module_index(toks[5]))
                throw ParseError(line, "unknown target module '" + toks[5] + "'");
            doc.maps.emplace_back();
            mapd = &doc.maps.back();
            mapd->name = toks[1];
            mapd->from = toks[3];
            mapd->to = toks[5];
            mapd->shift = parse_int(toks[7], line, "SHIFT");
            if (mapd->shift < 0) throw ParseError(line, "SHIFT must be >= 0");
        } else if (kw == "DIAGRAM") {
            if (toks.size() != 2) throw ParseError(line, "DIAGRAM name");
            for (const auto& d : doc.diagrams)
                if (d.name == toks[1])
                    throw ParseError(line, "duplicate diagram '" + toks[1] + "'");
            doc.diagrams.emplace_back();
            diag = &doc.diagrams.back();
            diag->name = toks[1];
        } else {
            throw ParseError(line, "unexpected top-level directive '" + kw + "'");
        }
    }
    if (mb) throw ParseError(line, "unterminated MODULE " + mb->decl.name);
    if (mapd) throw ParseError(line, "unterminated MAP " + mapd->name);
    if (diag) throw ParseError(line, "unterminated DIAGRAM " + diag->name);
    return doc;
}

const Document::ModuleDecl* Document::find_module(const std::string& name) const {
    for (const auto& m : modules)
        if (m.name == name) return &m;
    return nullptr;
}

const Document::MapDecl* Document::find_map(const std::string& name) const {
    for (const auto& m : maps)
        if (m.name == name) return &m;
    return nullptr;
}

const Document::DiagramDecl* Document::find_diagram(const std::string& name) const {
    for (const auto& d : diagrams)
        if (d.name == name) return &d;
    return nullptr;
}

secondary::CofiberDiagram Document::build_diagram(const DiagramDecl& d) const {
    auto node = [&](const std::string& name, const char* role) -> const ModuleDecl& {
        const ModuleDecl* m = find_module(name);
        if (!m)
            throw std::runtime_error("diagram " + d.name + ": unknown " + role + " module '" +
                                     name + "'");
        return *m;
    };
    auto mp = [&](const std::string& name, const std::string& from, const std::string& to,
                  const char* role) -> const MapDecl& {
        const MapDecl* m = find_map(name);
        if (!m)
            throw std::runtime_error("diagram " + d.name + ": unknown map '" + name + "'");
        if (m->from != from || m->to != to || m->shift != 0)
            throw std::runtime_error("diagram " + d.name + ": map " + name +
                                     " does not run " + from + " -> " + to +
                                     " with shift 0 (required for " + role + ")");
        return *m;
    };
    secondary::CofiberDiagram out;
    out.name = d.name;
    out.Y = node(d.Y, "Y").compiled.module;
    out.C = node(d.C, "C").compiled.module;
    out.SX = node(d.SX, "SX").compiled.module;
    out.SY = node(d.SY, "SY").compiled.module;
    out.jstar = mp(d.jstar, d.C, d.Y, "jstar").compiled;
    out.taustar = mp(d.taustar, d.SX, d.C, "taustar").compiled;
    out.sfstar = mp(d.sfstar, d.SY, d.SX, "sfstar").compiled;
    out.exact = d.exact;
    return out;
}

namespace {

std::string expr_str(const std::vector<std::string>& labels) {
    if (labels.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) s += " + ";
        s += labels[i];
    }
    return s;
}

}  // namespace

std::string serialize(const Document& doc) {
    std::string out;
    for (const auto& m : doc.modules) {
        out += "MODULE " + m.name + " MAXDEG " + std::to_string(m.max_degree) + "\n";
        for (const auto& [label, deg] : m.gens)
            out += "  GEN " + label + " " + std::to_string(deg) + "\n";
        for (const auto& s : m.sqs)
            out += "  SQ " + std::to_string(s.k) + " " + s.label + " = " + expr_str(s.value) +
                   "\n";
        for (const auto& p : m.muls)
            out += "  MUL " + p.l1 + " " + p.l2 + " = " + expr_str(p.value) + "\n";
        for (const auto& a : m.ambigs) {
            out += "  AMBIG SQ " + std::to_string(a.k) + " " + a.label + " IN { ";
            for (std::size_t i = 0; i < a.alternatives.size(); ++i) {
                if (i) out += " | ";
                out += expr_str(a.alternatives[i]);
            }
            out += " }\n";
        }
        for (const auto& a : m.asserts) {
            out += "  ASSERT NONZERO SQ " + std::to_string(a.k) + " " + a.label;
            if (!a.provenance.empty()) out += "  " + a.provenance;
            out += "\n";
        }
        out += "END\n\n";
    }
    for (const auto& m : doc.maps) {
        out += "MAP " + m.name + " FROM " + m.from + " TO " + m.to + " SHIFT " +
               std::to_string(m.shift) + "\n";
        for (const auto& [label, value] : m.lines)
            out += "  " + label + " -> " + expr_str(value) + "\n";
        out += "END\n\n";
    }
    for (const auto& d : doc.diagrams) {
        out += "DIAGRAM " + d.name + "\n";
        out += "  NODES Y=" + d.Y + " C=" + d.C + " SX=" + d.SX + " SY=" + d.SY + "\n";
        out += "  MAPS jstar=" + d.jstar + " taustar=" + d.taustar + " sfstar=" + d.sfstar +
               "\n";
        if (d.exact) out += "  EXACT\n";
        out += "END\n\n";
    }
    return out;
}

}  // namespace secat::dsl
