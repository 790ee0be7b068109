#include "secat/module.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace secat::mod {

using steenrod::AdmissibleSum;
using steenrod::SqWord;

int SteenrodModule::dim(int d) const {
    if (d < 0 || d > max_degree) return 0;
    return static_cast<int>(basis[d].size());
}

int SteenrodModule::total_dim() const {
    int n = 0;
    for (int d = 0; d <= max_degree; ++d) n += dim(d);
    return n;
}

BitMatrix SteenrodModule::sq_matrix(int k, int d) const {
    if (k < 1) throw std::invalid_argument("sq_matrix: k must be >= 1");
    if (d < 0 || d + k > max_degree)
        throw std::out_of_range("sq_matrix: degree " + std::to_string(d + k) +
                                " outside module " + name);
    auto it = sq.find({k, d});
    if (it != sq.end()) return it->second;
    return BitMatrix(dim(d + k), dim(d));
}

BitMatrix SteenrodModule::word_matrix(const SqWord& w, int d) const {
    BitMatrix m = BitMatrix::identity(dim(d));
    int cur = d;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        m = sq_matrix(*it, cur) * m;
        cur += *it;
    }
    return m;
}

BitMatrix SteenrodModule::op_matrix(const AdmissibleSum& s, int d) const {
    if (s.terms.empty())
        throw std::invalid_argument("op_matrix: zero operation has no degree");
    int deg = steenrod::degree(s.terms[0]);
    BitMatrix out(dim(d + deg), dim(d));
    for (const SqWord& w : s.terms) {
        if (steenrod::degree(w) != deg)
            throw std::invalid_argument("op_matrix: inhomogeneous sum");
        out = out + word_matrix(w, d);
    }
    return out;
}

std::optional<std::pair<int, std::size_t>> SteenrodModule::find_label(
    const std::string& label) const {
    for (int d = 0; d <= max_degree; ++d)
        for (std::size_t i = 0; i < basis[d].size(); ++i)
            if (basis[d][i] == label) return std::make_pair(d, i);
    return std::nullopt;
}

std::string SteenrodModule::describe(int d, const BitVec& v) const {
    if (v.is_zero()) return "0";
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v.get(i)) continue;
        if (!s.empty()) s += " + ";
        s += basis[d][i];
    }
    return s;
}

std::size_t SteenrodModule::resolution_count() const {
    std::size_t n = 1;
    for (const auto& s : slots) n *= s.alternatives.size();
    return n;
}

std::vector<Resolution> SteenrodModule::all_resolutions() const {
    std::vector<Resolution> out;
    Resolution cur(slots.size(), 0);
    while (true) {
        out.push_back(cur);
        std::size_t i = 0;
        for (; i < slots.size(); ++i) {
            if (++cur[i] < slots[i].alternatives.size()) break;
            cur[i] = 0;
        }
        if (i == slots.size()) break;
    }
    if (slots.empty()) out.resize(1);
    return out;
}

SteenrodModule SteenrodModule::materialize(const Resolution& r) const {
    if (r.size() != slots.size())
        throw std::invalid_argument("materialize: resolution size mismatch");
    SteenrodModule out = *this;
    out.slots.clear();
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const AmbiguitySlot& s = slots[i];
        auto key = std::make_pair(s.k, s.degree);
        auto it = out.sq.find(key);
        if (it == out.sq.end())
            it = out.sq.emplace(key, BitMatrix(dim(s.degree + s.k), dim(s.degree))).first;
        it->second.set_col(s.column, s.alternatives.at(r[i]));
    }
    return out;
}

bool ValidityReport::admissible() const {
    if (issues.empty()) return true;
    for (const auto& i : issues)
        if (i.resolution < 0) return false;
    return !admissible_resolutions.empty();
}

std::string ValidityReport::to_string() const {
    if (issues.empty()) return "valid";
    std::string s;
    for (const auto& i : issues) {
        if (!s.empty()) s += '\n';
        if (i.resolution >= 0) s += "[resolution " + std::to_string(i.resolution) + "] ";
        s += i.message;
    }
    return s;
}

namespace {

void check_structure(const SteenrodModule& m, ValidityReport& rep) {
    auto issue = [&](const std::string& msg) {
        rep.issues.push_back({ValidityIssue::Kind::Structural, m.name + ": " + msg, -1});
    };
    if (static_cast<int>(m.basis.size()) != m.max_degree + 1) {
        issue("basis table does not cover degrees 0.." + std::to_string(m.max_degree));
        return;
    }
    std::set<std::string> seen;
    for (int d = 0; d <= m.max_degree; ++d)
        for (const auto& l : m.basis[d])
            if (!seen.insert(l).second) issue("duplicate basis label '" + l + "'");
    for (const auto& [key, mat] : m.sq) {
        auto [k, d] = key;
        if (k < 1 || d < 0 || d + k > m.max_degree) {
            issue("sq entry (" + std::to_string(k) + "," + std::to_string(d) + ") out of range");
            continue;
        }
        if (static_cast<int>(mat.rows()) != m.dim(d + k) ||
            static_cast<int>(mat.cols()) != m.dim(d))
            issue("sq matrix (" + std::to_string(k) + "," + std::to_string(d) +
                  ") has wrong shape");
    }
    for (const auto& s : m.slots) {
        if (s.degree < 0 || s.degree + s.k > m.max_degree ||
            s.column >= static_cast<std::size_t>(m.dim(s.degree))) {
            issue("ambiguity slot for '" + s.label + "' out of range");
            continue;
        }
        if (s.alternatives.empty()) issue("ambiguity slot for '" + s.label + "' is empty");
        for (const auto& alt : s.alternatives)
            if (static_cast<int>(alt.size()) != m.dim(s.degree + s.k))
                issue("ambiguity alternative for '" + s.label + "' has wrong length");
    }
    for (const auto& a : m.asserts) {
        auto loc = m.find_label(a.label);
        if (!loc)
            issue("assert references unknown label '" + a.label + "'");
        else if (loc->first + a.k > m.max_degree)
            issue("assert on Sq" + std::to_string(a.k) + " '" + a.label +
                  "' targets a degree outside the module");
    }
}

void check_laws(const SteenrodModule& concrete, const std::string& name, int res,
                ValidityReport& rep) {
    auto issue = [&](ValidityIssue::Kind kind, const std::string& msg) {
        rep.issues.push_back({kind, name + ": " + msg, res});
    };
    const int D = concrete.max_degree;
    for (const auto& [key, mat] : concrete.sq) {
        auto [k, d] = key;
        if (k > d && !mat.is_zero())
            issue(ValidityIssue::Kind::Instability,
                  "instability violated: Sq" + std::to_string(k) + " nonzero on degree " +
                      std::to_string(d));
    }
    // Every inadmissible pair in range must match its Adem normal form.
    for (int d = 0; d <= D; ++d) {
        if (concrete.dim(d) == 0) continue;
        for (int b = 1; b + d <= D; ++b) {
            for (int a = 1; a < 2 * b && a + b + d <= D; ++a) {
                BitMatrix lhs = concrete.sq_matrix(a, d + b) * concrete.sq_matrix(b, d);
                AdmissibleSum nf = steenrod::adem_rewrite(SqWord{a, b});
                BitMatrix rhs = nf.is_zero() ? BitMatrix(concrete.dim(d + a + b), concrete.dim(d))
                                             : concrete.op_matrix(nf, d);
                if (!(lhs == rhs))
                    issue(ValidityIssue::Kind::Adem,
                          "Adem relation Sq" + std::to_string(a) + " Sq" + std::to_string(b) +
                              " violated from degree " + std::to_string(d));
            }
        }
    }
    for (const auto& a : concrete.asserts) {
        auto loc = concrete.find_label(a.label);
        if (!loc || loc->first + a.k > D) continue;  // reported structurally
        BitVec v = concrete.sq_matrix(a.k, loc->first).col(loc->second);
        if (v.is_zero())
            issue(ValidityIssue::Kind::Assert,
                  "asserted nonzero Sq" + std::to_string(a.k) + " '" + a.label + "' is zero");
    }
}

}  // namespace

ValidityReport validate_module(const SteenrodModule& m) {
    ValidityReport rep;
    check_structure(m, rep);
    if (!rep.issues.empty()) return rep;
    auto resolutions = m.all_resolutions();
    for (std::size_t r = 0; r < resolutions.size(); ++r) {
        std::size_t before = rep.issues.size();
        check_laws(m.materialize(resolutions[r]), m.name,
                   m.has_slots() ? static_cast<int>(r) : -1, rep);
        if (rep.issues.size() == before) rep.admissible_resolutions.push_back(r);
    }
    return rep;
}

BitVec UnstableAlgebra::multiply(int d1, const BitVec& x, int d2, const BitVec& y) const {
    const SteenrodModule& m = module;
    // the algebra models a complete cohomology, so products past the top are zero
    if (d1 + d2 > m.max_degree) return BitVec(0);
    int dims = m.dim(d1), dimt = m.dim(d2), dimo = m.dim(d1 + d2);
    BitVec out(dimo);
    if (dims == 0 || dimt == 0 || dimo == 0 || x.is_zero() || y.is_zero()) return out;
    auto it = mul.find({d1, d2});
    if (it == mul.end()) {
        if (d1 == 0) return x.get(0) ? y : BitVec(dimo);
        if (d2 == 0) return y.get(0) ? x : BitVec(dimo);
        if (dimo == 0) return out;
        throw std::runtime_error("multiply: missing product table (" + std::to_string(d1) +
                                 "," + std::to_string(d2) + ") in " + m.name);
    }
    for (int i = 0; i < dims; ++i)
        if (x.get(i))
            for (int j = 0; j < dimt; ++j)
                if (y.get(j)) out ^= it->second.col(i * dimt + j);
    return out;
}

ValidityReport validate_algebra(const UnstableAlgebra& a) {
    ValidityReport rep = validate_module(a.module);
    if (!rep.admissible()) return rep;
    const SteenrodModule& m = a.module;
    const int D = m.max_degree;
    auto issue = [&](const std::string& msg) {
        rep.issues.push_back({ValidityIssue::Kind::Algebra, m.name + ": " + msg, -1});
    };
    std::size_t module_issues = rep.issues.size();
    if (m.dim(0) != 1) {
        issue("algebra needs a one-dimensional degree 0");
        return rep;
    }
    for (const auto& [key, mat] : a.mul) {
        auto [d1, d2] = key;
        if (d1 + d2 > D || static_cast<int>(mat.rows()) != m.dim(d1 + d2) ||
            static_cast<int>(mat.cols()) != m.dim(d1) * m.dim(d2)) {
            issue("product table (" + std::to_string(d1) + "," + std::to_string(d2) +
                  ") has wrong shape");
            return rep;
        }
    }
    for (int d1 = 1; d1 <= D; ++d1)
        for (int d2 = 1; d1 + d2 <= D; ++d2)
            if (m.dim(d1) > 0 && m.dim(d2) > 0 && m.dim(d1 + d2) > 0 &&
                !a.mul.count({d1, d2}))
                issue("missing product table (" + std::to_string(d1) + "," +
                      std::to_string(d2) + ")");
    if (rep.issues.size() > module_issues) return rep;
    auto basis_vec = [&](int d, int i) { return BitVec::unit(m.dim(d), i); };
    // Commutativity and unit on all pairs in range.
    for (int d1 = 0; d1 <= D; ++d1)
        for (int d2 = 0; d1 + d2 <= D; ++d2)
            for (int i = 0; i < m.dim(d1); ++i)
                for (int j = 0; j < m.dim(d2); ++j) {
                    BitVec xy = a.multiply(d1, basis_vec(d1, i), d2, basis_vec(d2, j));
                    BitVec yx = a.multiply(d2, basis_vec(d2, j), d1, basis_vec(d1, i));
                    if (!(xy == yx))
                        issue("product not commutative on " + m.label_at(d1, i) + ", " +
                              m.label_at(d2, j));
                    if (d1 == 0 && i == 0 && !(xy == basis_vec(d2, j)))
                        issue("unit law fails on " + m.label_at(d2, j));
                }
    // Associativity on basis triples.
    for (int d1 = 1; d1 <= D; ++d1)
        for (int d2 = 1; d1 + d2 <= D; ++d2)
            for (int d3 = 1; d1 + d2 + d3 <= D; ++d3)
                for (int i = 0; i < m.dim(d1); ++i)
                    for (int j = 0; j < m.dim(d2); ++j)
                        for (int k = 0; k < m.dim(d3); ++k) {
                            BitVec l = a.multiply(d1 + d2,
                                                  a.multiply(d1, basis_vec(d1, i), d2, basis_vec(d2, j)),
                                                  d3, basis_vec(d3, k));
                            BitVec r = a.multiply(d1, basis_vec(d1, i), d2 + d3,
                                                  a.multiply(d2, basis_vec(d2, j), d3, basis_vec(d3, k)));
                            if (!(l == r)) issue("product not associative");
                        }
    // Top-square and Cartan, per admissible resolution.
    auto resolutions = m.all_resolutions();
    std::vector<std::size_t> surviving;
    for (std::size_t ri : rep.admissible_resolutions) {
        SteenrodModule conc = m.materialize(resolutions[ri]);
        std::size_t before = rep.issues.size();
        int res = m.has_slots() ? static_cast<int>(ri) : -1;
        for (int d = 1; 2 * d <= D; ++d)
            for (int i = 0; i < m.dim(d); ++i) {
                BitVec sq_top = conc.sq_matrix(d, d).col(i);
                BitVec square = a.multiply(d, basis_vec(d, i), d, basis_vec(d, i));
                if (!(sq_top == square))
                    rep.issues.push_back({ValidityIssue::Kind::Algebra,
                                          m.name + ": top square fails on " + m.label_at(d, i), res});
            }
        for (int k = 1; k <= D; ++k)
            for (int d1 = 0; d1 <= D; ++d1)
                for (int d2 = 0; d1 + d2 + k <= D; ++d2)
                    for (int i = 0; i < m.dim(d1); ++i)
                        for (int j = 0; j < m.dim(d2); ++j) {
                            BitVec lhs = conc.sq_matrix(k, d1 + d2)
                                             .apply(a.multiply(d1, basis_vec(d1, i), d2, basis_vec(d2, j)));
                            BitVec rhs(m.dim(d1 + d2 + k));
                            for (int p = 0; p <= k; ++p) {
                                int q = k - p;
                                BitVec sx = p ? conc.sq_matrix(p, d1).col(i) : basis_vec(d1, i);
                                BitVec sy = q ? conc.sq_matrix(q, d2).col(j) : basis_vec(d2, j);
                                rhs ^= a.multiply(d1 + p, sx, d2 + q, sy);
                            }
                            if (!(lhs == rhs))
                                rep.issues.push_back(
                                    {ValidityIssue::Kind::Algebra,
                                     m.name + ": Cartan fails for Sq" + std::to_string(k) + " on " +
                                         m.label_at(d1, i) + ", " + m.label_at(d2, j), res});
                        }
        if (rep.issues.size() == before) surviving.push_back(ri);
    }
    rep.admissible_resolutions = surviving;
    return rep;
}

BitMatrix ModuleMap::matrix(int d, const SteenrodModule& src, const SteenrodModule& tgt) const {
    auto it = mats.find(d);
    if (it != mats.end()) return it->second;
    return BitMatrix(tgt.dim(d + shift), src.dim(d));
}

ValidityReport validate_map(const ModuleMap& f, const SteenrodModule& src,
                            const SteenrodModule& tgt, bool check_equivariance) {
    ValidityReport rep;
    auto issue = [&](ValidityIssue::Kind k, const std::string& msg, int res) {
        rep.issues.push_back({k, "map " + f.name + ": " + msg, res});
    };
    if (f.shift < 0) issue(ValidityIssue::Kind::Structural, "negative degree shift", -1);
    for (const auto& [d, mat] : f.mats) {
        if (d < 0 || d > src.max_degree || d + f.shift > tgt.max_degree) {
            issue(ValidityIssue::Kind::Structural,
                  "matrix at degree " + std::to_string(d) + " out of range", -1);
            continue;
        }
        if (static_cast<int>(mat.rows()) != tgt.dim(d + f.shift) ||
            static_cast<int>(mat.cols()) != src.dim(d))
            issue(ValidityIssue::Kind::Structural,
                  "matrix at degree " + std::to_string(d) + " has wrong shape", -1);
    }
    if (!rep.issues.empty() || !check_equivariance) return rep;

    auto sres = src.all_resolutions();
    auto tres = tgt.all_resolutions();
    for (std::size_t si = 0; si < sres.size(); ++si) {
        SteenrodModule cs = src.materialize(sres[si]);
        for (std::size_t ti = 0; ti < tres.size(); ++ti) {
            SteenrodModule ct = tgt.materialize(tres[ti]);
            int res = (src.has_slots() || tgt.has_slots())
                          ? static_cast<int>(si * tres.size() + ti)
                          : -1;
            std::size_t before = rep.issues.size();
            for (int k = 1; k <= src.max_degree; ++k)
                for (int d = 0; d + k <= src.max_degree; ++d) {
                    if (d + f.shift + k > tgt.max_degree) continue;
                    BitMatrix lhs = f.matrix(d + k, src, tgt) * cs.sq_matrix(k, d);
                    BitMatrix rhs = ct.sq_matrix(k, d + f.shift) * f.matrix(d, src, tgt);
                    if (!(lhs == rhs))
                        issue(ValidityIssue::Kind::Map,
                              "does not commute with Sq" + std::to_string(k) + " from degree " +
                                  std::to_string(d), res);
                }
            if (rep.issues.size() == before) rep.admissible_resolutions.push_back(si * tres.size() + ti);
        }
    }
    return rep;
}

// ---- constructors ----

namespace {

std::string power_label(const std::string& gen, int n) {
    if (n == 0) return "one";
    if (n == 1) return gen;
    return gen + std::to_string(n);
}

}  // namespace

UnstableAlgebra truncated_polynomial_algebra(int gen_degree, int height) {
    if (gen_degree != 1 && gen_degree != 2 && gen_degree != 4)
        throw std::invalid_argument("truncated_polynomial_algebra: generator degree must be 1, 2 or 4");
    if (height < 2)
        throw std::invalid_argument("truncated_polynomial_algebra: height must be >= 2");
    const int g = gen_degree, h = height;
    std::string gen = g == 1 ? "x" : (g == 2 ? "b" : "a");
    UnstableAlgebra alg;
    SteenrodModule& m = alg.module;
    m.name = "P" + std::to_string(g) + "h" + std::to_string(h);
    m.max_degree = g * (h - 1);
    m.basis.assign(m.max_degree + 1, {});
    for (int n = 0; n <= h - 1; ++n) m.basis[g * n].push_back(power_label(gen, n));
    for (int n = 1; n <= h - 1; ++n)
        for (int i = 1; n + i <= h - 1; ++i) {
            BitMatrix mat(1, 1);
            mat.set(0, 0, steenrod::binom_mod2(n, i));
            m.sq[{g * i, g * n}] = mat;
        }
    alg.has_products = true;
    for (int n = 0; n <= h - 1; ++n)
        for (int p = 0; n + p <= h - 1; ++p) {
            BitMatrix mat(1, 1);
            mat.set(0, 0, true);
            alg.mul[{g * n, g * p}] = mat;
        }
    return alg;
}

UnstableAlgebra sphere(int n) {
    if (n < 1) throw std::invalid_argument("sphere: n must be >= 1");
    UnstableAlgebra alg;
    SteenrodModule& m = alg.module;
    m.name = "S" + std::to_string(n);
    m.max_degree = n;
    m.basis.assign(n + 1, {});
    m.basis[0].push_back("one");
    m.basis[n].push_back("s" + std::to_string(n));
    alg.has_products = true;
    BitMatrix unit(1, 1);
    unit.set(0, 0, true);
    alg.mul[{0, 0}] = unit;
    alg.mul[{0, n}] = unit;
    alg.mul[{n, 0}] = unit;
    return alg;
}

SteenrodModule suspension(const SteenrodModule& m) {
    SteenrodModule out;
    out.name = "S" + m.name;
    out.max_degree = m.max_degree + 1;
    out.basis.assign(out.max_degree + 1, {});
    for (int d = 1; d <= m.max_degree; ++d)
        for (const auto& l : m.basis[d]) out.basis[d + 1].push_back("s" + l);
    for (const auto& [key, mat] : m.sq) {
        auto [k, d] = key;
        if (d >= 1) out.sq[{k, d + 1}] = mat;
    }
    for (const auto& s : m.slots) {
        if (s.degree < 1) continue;
        AmbiguitySlot t = s;
        t.degree = s.degree + 1;
        t.label = "s" + s.label;
        out.slots.push_back(std::move(t));
    }
    for (const auto& a : m.asserts)
        out.asserts.push_back({a.k, "s" + a.label, a.provenance});
    return out;
}

namespace {

std::string tensor_label(const std::string& a, const std::string& b) {
    if (a == "one") return b;
    if (b == "one") return a;
    return a + "*" + b;
}

}  // namespace

SteenrodModule tensor_product(const SteenrodModule& m, const SteenrodModule& n) {
    if (m.has_slots() || n.has_slots())
        throw std::invalid_argument("tensor_product: inputs must be slot-free");
    SteenrodModule out;
    out.name = m.name + "x" + n.name;
    out.max_degree = m.max_degree + n.max_degree;
    out.basis.assign(out.max_degree + 1, {});
    // index offset of block (i, d-i) within degree d
    auto block_offset = [&](int d, int i) {
        int off = 0;
        for (int p = 0; p < i; ++p) {
            int q = d - p;
            if (p <= m.max_degree && q >= 0 && q <= n.max_degree)
                off += m.dim(p) * n.dim(q);
        }
        return off;
    };
    for (int d = 0; d <= out.max_degree; ++d)
        for (int i = 0; i <= std::min(d, m.max_degree); ++i) {
            int j = d - i;
            if (j > n.max_degree) continue;
            for (const auto& a : m.basis[i])
                for (const auto& b : n.basis[j])
                    out.basis[d].push_back(tensor_label(a, b));
        }
    for (int k = 1; k <= out.max_degree; ++k)
        for (int d = 0; d + k <= out.max_degree; ++d) {
            if (out.dim(d) == 0 || out.dim(d + k) == 0) continue;
            BitMatrix mat(out.dim(d + k), out.dim(d));
            for (int i = 0; i <= std::min(d, m.max_degree); ++i) {
                int j = d - i;
                if (j > n.max_degree) continue;
                int src_off = block_offset(d, i);
                for (int ai = 0; ai < m.dim(i); ++ai)
                    for (int bj = 0; bj < n.dim(j); ++bj) {
                        int col = src_off + ai * n.dim(j) + bj;
                        for (int p = 0; p <= k; ++p) {
                            int q = k - p;
                            // squares past a factor's top degree vanish: the
                            // factor models a complete cohomology
                            if (i + p > m.max_degree || j + q > n.max_degree) continue;
                            BitVec sx = p ? m.sq_matrix(p, i).col(ai)
                                          : BitVec::unit(m.dim(i), ai);
                            BitVec sy = q ? n.sq_matrix(q, j).col(bj)
                                          : BitVec::unit(n.dim(j), bj);
                            if (sx.is_zero() || sy.is_zero()) continue;
                            int tgt_off = block_offset(d + k, i + p);
                            for (std::size_t r = 0; r < sx.size(); ++r)
                                if (sx.get(r))
                                    for (std::size_t s = 0; s < sy.size(); ++s)
                                        if (sy.get(s))
                                            mat.set(tgt_off + r * n.dim(j + q) + s, col,
                                                    !mat.get(tgt_off + r * n.dim(j + q) + s, col));
                        }
                    }
            }
            if (!mat.is_zero()) out.sq[{k, d}] = mat;
        }
    return out;
}

UnstableAlgebra tensor_algebra(const UnstableAlgebra& a, const UnstableAlgebra& b) {
    UnstableAlgebra out;
    out.module = tensor_product(a.module, b.module);
    out.has_products = true;
    const SteenrodModule& m = out.module;
    const SteenrodModule& ma = a.module;
    const SteenrodModule& mb = b.module;
    auto block_offset = [&](int d, int i) {
        int off = 0;
        for (int p = 0; p < i; ++p) {
            int q = d - p;
            if (p <= ma.max_degree && q >= 0 && q <= mb.max_degree)
                off += ma.dim(p) * mb.dim(q);
        }
        return off;
    };
    for (int d1 = 0; d1 <= m.max_degree; ++d1)
        for (int d2 = 0; d1 + d2 <= m.max_degree; ++d2) {
            if (m.dim(d1) == 0 || m.dim(d2) == 0 || m.dim(d1 + d2) == 0) continue;
            BitMatrix mat(m.dim(d1 + d2), m.dim(d1) * m.dim(d2));
            for (int i1 = 0; i1 <= std::min(d1, ma.max_degree); ++i1) {
                int j1 = d1 - i1;
                if (j1 > mb.max_degree) continue;
                for (int i2 = 0; i2 <= std::min(d2, ma.max_degree); ++i2) {
                    int j2 = d2 - i2;
                    if (j2 > mb.max_degree) continue;
                    if (i1 + i2 > ma.max_degree || j1 + j2 > mb.max_degree) continue;
                    for (int a1 = 0; a1 < ma.dim(i1); ++a1)
                        for (int b1 = 0; b1 < mb.dim(j1); ++b1)
                            for (int a2 = 0; a2 < ma.dim(i2); ++a2)
                                for (int b2 = 0; b2 < mb.dim(j2); ++b2) {
                                    BitVec pa = a.multiply(i1, BitVec::unit(ma.dim(i1), a1), i2,
                                                           BitVec::unit(ma.dim(i2), a2));
                                    BitVec pb = b.multiply(j1, BitVec::unit(mb.dim(j1), b1), j2,
                                                           BitVec::unit(mb.dim(j2), b2));
                                    if (pa.is_zero() || pb.is_zero()) continue;
                                    int col = (block_offset(d1, i1) + a1 * mb.dim(j1) + b1) * m.dim(d2) +
                                              block_offset(d2, i2) + a2 * mb.dim(j2) + b2;
                                    int tgt_off = block_offset(d1 + d2, i1 + i2);
                                    for (std::size_t r = 0; r < pa.size(); ++r)
                                        if (pa.get(r))
                                            for (std::size_t s = 0; s < pb.size(); ++s)
                                                if (pb.get(s)) {
                                                    int row = tgt_off +
                                                              static_cast<int>(r) * mb.dim(j1 + j2) +
                                                              static_cast<int>(s);
                                                    mat.set(row, col, !mat.get(row, col));
                                                }
                                }
                }
            }
            out.mul[{d1, d2}] = mat;
        }
    return out;
}

SteenrodModule thom_module(const UnstableAlgebra& base, const std::vector<BitVec>& w,
                           int shift) {
    const SteenrodModule& bm = base.module;
    if (bm.has_slots())
        throw std::invalid_argument("thom_module: base must be slot-free");
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!w[i].is_zero() && static_cast<int>(w[i].size()) != bm.dim(static_cast<int>(i) + 1))
            throw std::invalid_argument("thom_module: w_" + std::to_string(i + 1) +
                                        " has the wrong degree");
    SteenrodModule out;
    out.name = "Thom" + std::to_string(shift) + "(" + bm.name + ")";
    out.max_degree = bm.max_degree + shift;
    out.basis.assign(out.max_degree + 1, {});
    for (int d = 0; d <= bm.max_degree; ++d)
        for (const auto& l : bm.basis[d])
            out.basis[d + shift].push_back(l == "one" ? "U" : l + "U");
    auto sw = [&](int j) -> BitVec {
        // w_j as a vector in base degree j; w_0 is the unit
        if (j == 0) return BitVec::unit(bm.dim(0), 0);
        if (j <= static_cast<int>(w.size()) && !w[j - 1].is_zero()) return w[j - 1];
        return BitVec(bm.dim(j));
    };
    for (int k = 1; k <= out.max_degree; ++k)
        for (int d = 0; d + k <= bm.max_degree; ++d) {
            if (bm.dim(d) == 0 || bm.dim(d + k) == 0) continue;
            BitMatrix mat(bm.dim(d + k), bm.dim(d));
            for (int c = 0; c < bm.dim(d); ++c) {
                BitVec acc(bm.dim(d + k));
                for (int i = 0; i <= k; ++i) {
                    int j = k - i;
                    if (i > d && i > 0) continue;  // instability in the base
                    BitVec sx = i ? bm.sq_matrix(i, d).col(c) : BitVec::unit(bm.dim(d), c);
                    BitVec wj = sw(j);
                    if (sx.is_zero() || wj.is_zero()) continue;
                    acc ^= base.multiply(d + i, sx, j, wj);
                }
                mat.set_col(c, acc);
            }
            if (!mat.is_zero()) out.sq[{k, d + shift}] = mat;
        }
    return out;
}

namespace {

using Word = std::vector<std::size_t>;

void enumerate_words(const DualTensorAlgebraSpec& spec, int degree, Word& cur,
                     std::vector<Word>& out) {
    if (degree == 0) {
        out.push_back(cur);
        return;
    }
    for (std::size_t g = 0; g < spec.generators.size(); ++g) {
        int gd = spec.generators[g].degree;
        if (gd > degree) continue;
        cur.push_back(g);
        enumerate_words(spec, degree - gd, cur, out);
        cur.pop_back();
    }
}

int word_degree(const DualTensorAlgebraSpec& spec, const Word& w) {
    int d = 0;
    for (auto g : w) d += spec.generators[g].degree;
    return d;
}

// Sq^k_* on a word, by the Cartan formula for Pontryagin products.
std::set<Word> dual_sq(const DualTensorAlgebraSpec& spec, int k, const Word& w,
                       std::map<std::pair<int, Word>, std::set<Word>>& memo) {
    if (w.empty()) {
        std::set<Word> out;
        if (k == 0) out.insert(w);
        return out;
    }
    if (k == 0) return {w};
    auto key = std::make_pair(k, w);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t g = w.front();
    Word rest(w.begin() + 1, w.end());
    std::set<Word> acc;
    auto toggle = [&](Word t) {
        auto [it, inserted] = acc.insert(std::move(t));
        if (!inserted) acc.erase(it);
    };
    for (int i = 0; i <= k; ++i) {
        std::vector<Word> heads;
        if (i == 0) {
            heads.push_back({g});
        } else {
            auto it = spec.dual_action.find({i, g});
            if (it == spec.dual_action.end()) continue;
            heads = it->second;
        }
        std::set<Word> tails = dual_sq(spec, k - i, rest, memo);
        for (const Word& h : heads)
            for (const Word& t : tails) {
                Word joined = h;
                joined.insert(joined.end(), t.begin(), t.end());
                toggle(std::move(joined));
            }
    }
    memo[key] = acc;
    return acc;
}

}  // namespace

SteenrodModule dual_tensor_algebra(const DualTensorAlgebraSpec& spec) {
    for (const auto& g : spec.generators)
        if (g.degree < 1)
            throw std::invalid_argument("dual_tensor_algebra: generator degrees must be >= 1");
    for (const auto& [key, words] : spec.dual_action) {
        auto [k, g] = key;
        for (const Word& w : words)
            if (word_degree(spec, w) != spec.generators.at(g).degree - k)
                throw std::invalid_argument("dual_tensor_algebra: dual action must lower degree by k");
    }
    SteenrodModule out;
    out.name = "T";
    for (const auto& g : spec.generators) out.name += "_" + g.name + std::to_string(g.degree);
    out.max_degree = spec.truncation;
    out.basis.assign(out.max_degree + 1, {});
    std::vector<std::vector<Word>> words(out.max_degree + 1);
    std::vector<std::map<Word, std::size_t>> index(out.max_degree + 1);
    for (int d = 0; d <= out.max_degree; ++d) {
        Word cur;
        enumerate_words(spec, d, cur, words[d]);
        for (std::size_t i = 0; i < words[d].size(); ++i) {
            index[d][words[d][i]] = i;
            std::string label;
            for (auto g : words[d][i]) label += spec.generators[g].name;
            if (label.empty()) label = "one";
            out.basis[d].push_back(label);
        }
    }
    std::map<std::pair<int, Word>, std::set<Word>> memo;
    for (int k = 1; k <= out.max_degree; ++k)
        for (int d = 0; d + k <= out.max_degree; ++d) {
            if (words[d].empty() || words[d + k].empty()) continue;
            // sq(k,d)[row y, col w] = coefficient of w in Sq^k_*(y)
            BitMatrix mat(static_cast<std::size_t>(words[d + k].size()),
                          static_cast<std::size_t>(words[d].size()));
            for (std::size_t y = 0; y < words[d + k].size(); ++y)
                for (const Word& t : dual_sq(spec, k, words[d + k][y], memo)) {
                    auto it = index[d].find(t);
                    if (it == index[d].end())
                        throw std::logic_error("dual_tensor_algebra: dual action left the degree");
                    mat.set(y, it->second, !mat.get(y, it->second));
                }
            if (!mat.is_zero()) out.sq[{k, d}] = mat;
        }
    return out;
}

SteenrodModule loop_suspension(const SteenrodModule& m) {
    SteenrodModule out = suspension(m);
    out.name = "G1" + m.name;
    return out;
}

std::vector<long long> tensor_algebra_dims(const std::vector<int>& gen_degrees,
                                           int max_degree) {
    std::vector<long long> dims(max_degree + 1, 0);
    dims[0] = 1;
    for (int d = 1; d <= max_degree; ++d)
        for (int g : gen_degrees)
            if (g >= 1 && g <= d) dims[d] += dims[d - g];
    return dims;
}

bool structurally_equal(const SteenrodModule& a, const SteenrodModule& b) {
    if (a.has_slots() || b.has_slots())
        throw std::invalid_argument("structurally_equal: inputs must be slot-free");
    if (a.max_degree != b.max_degree) return false;
    for (int d = 0; d <= a.max_degree; ++d)
        if (a.dim(d) != b.dim(d)) return false;
    for (int k = 1; k <= a.max_degree; ++k)
        for (int d = 0; d + k <= a.max_degree; ++d)
            if (!(a.sq_matrix(k, d) == b.sq_matrix(k, d))) return false;
    return true;
}

}  // namespace secat::mod
