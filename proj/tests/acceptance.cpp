// Acceptance gate: one pass/fail line per shipped guarantee, nonzero exit on
// any failure. Each criterion is checked from primitives, not from cached
// pipeline state.
#include <cstdint>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "secat/dsl.hpp"
#include "secat/examples.hpp"
#include "secat/secondary.hpp"
#include "secat/steenrod.hpp"
#include "secat/weights.hpp"

using namespace secat;
using f2::BitMatrix;
using f2::BitVec;

namespace {

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

// ---- criterion 1: Adem rewriting vs the polynomial-action oracle ----

void partitions(int n, int max_part, std::vector<int>& cur,
                std::vector<std::vector<int>>& out) {
    if (n == 0) {
        out.push_back(cur);
        return;
    }
    for (int p = std::min(n, max_part); p >= 1; --p) {
        cur.push_back(p);
        partitions(n - p, p, cur, out);
        cur.pop_back();
    }
}

bool criterion1() {
    using namespace steenrod;
    if (to_string(adem_rewrite({2, 2})) != "Sq3 Sq1") return false;
    if (to_string(adem_rewrite({1, 2})) != "Sq3") return false;
    std::vector<int> degs(12, 1);
    // Sorted exponent vectors cover every monomial orbit; the action and the
    // rewriting are both equivariant under permuting the variables, and the
    // randomized block below exercises unsorted monomials directly.
    std::vector<std::vector<int>> reps;
    for (int m = 0; m <= 12; ++m) {
        std::vector<int> cur;
        partitions(m, 12, cur, reps);
    }
    for (const auto& part : reps) {
        std::vector<int> expo(12, 0);
        for (std::size_t i = 0; i < part.size(); ++i) expo[i] = part[i];
        Poly mono = Poly::monomial(degs, expo);
        for (int a = 1; a <= 11; ++a)
            for (int b = 1; a + b <= 12; ++b)
                if (!(poly_action(SqWord{a, b}, mono) ==
                      poly_action(adem_rewrite({a, b}), mono)))
                    return false;
    }
    std::mt19937 rng(101);
    for (int trial = 0; trial < 150; ++trial) {
        std::vector<int> expo(12, 0);
        int budget = static_cast<int>(rng() % 13);
        while (budget > 0) {
            int v = static_cast<int>(rng() % 12);
            ++expo[v];
            --budget;
        }
        Poly mono = Poly::monomial(degs, expo);
        int a = 1 + static_cast<int>(rng() % 11);
        int b = 1 + static_cast<int>(rng() % (12 - a));
        if (!(poly_action(SqWord{a, b}, mono) == poly_action(adem_rewrite({a, b}), mono)))
            return false;
    }
    return true;
}

// ---- shared fixtures ----

dsl::Document& twistor() {
    static dsl::Document doc = dsl::parse(examples::twistor_text());
    return doc;
}

dsl::Document& twocell() {
    static dsl::Document doc = dsl::parse(examples::twocell_text());
    return doc;
}

// ---- criterion 2: the twistor Mwgt lemma ----

bool criterion2() {
    auto& doc = twistor();
    const auto& hp2 = doc.find_module("HP2")->compiled.module;
    const auto& cp5 = doc.find_module("CP5")->compiled.module;
    const auto& e1 = doc.find_module("E1")->compiled.module;
    const auto& qstar = doc.find_map("qstar")->compiled;
    const auto& q1star = doc.find_map("q1star")->compiled;
    auto ret = weights::retraction_exists(qstar, hp2, cp5);
    if (!ret.all_unsat() || ret.per_resolution.size() != 1) return false;
    if (ret.per_resolution[0].chain !=
        "a = s(i(a)) = s(Sq2 b) = Sq2(s(b)) = Sq2(0) = 0, contradicting a != 0")
        return false;
    auto ret1 = weights::retraction_exists(q1star, hp2, e1);
    if (ret1.per_resolution.size() != 2 || !ret1.all_sat()) return false;
    auto wr = weights::weight_report({{qstar, hp2, cp5}, {q1star, hp2, e1}});
    return wr.wgt && *wr.wgt == 0 && wr.mwgt_lower == 1 && wr.mwgt_upper &&
           *wr.mwgt_upper == 1;
}

// ---- criterion 3: the twistor Swgt certificate ----

bool criterion3() {
    auto& doc = twistor();
    auto diagram = doc.build_diagram(*doc.find_diagram("TwistorDelta"));
    auto vr = secondary::validate_diagram(diagram);
    if (!vr.admissible() || vr.admissible_resolutions.size() != 1) return false;
    auto d = diagram.materialize(vr.admissible_resolutions[0]);
    if (secondary::indeterminacy(d.Y, 5).dim() != 0) return false;
    auto loc = d.C.find_label("bU");
    BitVec x = BitVec::unit(d.C.dim(5), loc->second);
    auto delta = secondary::delta(d, 5, x);
    if (!delta.nonzero() || !delta.lift_independent) return false;
    auto phi = secondary::phi_nontrivial(d, 5, x);
    if (phi.verdict != secondary::PhiResult::Verdict::Nonzero) return false;
    const auto& base = doc.find_module("HP2")->compiled.module;
    const auto& q1star = doc.find_map("q1star")->compiled;
    BitVec u = BitVec::unit(base.dim(8), base.find_label("a2")->second);
    if (!(q1star.matrix(8, base, d.Y).apply(u) == phi.phi_value)) return false;
    auto rep = secondary::swgt_certificate(base, q1star, 1, d, 5, x, u);
    if (rep.verdict != secondary::ObstructionReport::Verdict::Established) return false;
    if (rep.swgt_bound != 2) return false;
    auto run = examples::run_twistor();
    return run.exit_code == 0 &&
           contains(run.text,
                    "2 = secat(q) = Swgt(q;F2) > Mwgt(q;F2) = 1 > wgt(q;F2) = 0") &&
           contains(run.text, "Swgt >= 2 => secat >= 2") &&
           run.text.ends_with("secat >= 2\n");
}

// ---- criterion 4: dimension bookkeeping with flagged discrepancies ----

bool criterion4() {
    auto d27 = mod::tensor_algebra_dims({2, 7}, 9);
    auto d57 = mod::tensor_algebra_dims({5, 7}, 12);
    if (!(d27[2] == 1 && d27[4] == 1 && d27[6] == 1 && d27[7] == 1 && d27[8] == 1))
        return false;
    // degrees 5,6,7 are H^6, H^7, H^8 of the loop suspension, the ones the
    // argument uses; degree 8 itself carries no word
    if (!(d57[5] == 1 && d57[6] == 0 && d57[7] == 1 && d57[8] == 0)) return false;
    if (d27[9] != 2 || d57[12] != 2) return false;
    auto run = examples::run_twocell();
    return contains(run.text, "discrepancy") && contains(run.text, "9 of T(a2,b7)") &&
           contains(run.text, "12 of T(a5,b7)");
}

// ---- criterion 5: the two-cell pipeline ----

bool criterion5() {
    auto run = examples::run_twocell();
    return run.exit_code == 0 && contains(run.text, "injective => wgt(X;F2) = 1") &&
           contains(run.text, "retraction for iota: SAT") &&
           contains(run.text, "Sq2_*(a^3) = 0") &&
           contains(run.text, "Delta(c5) = zb9 != 0") &&
           contains(run.text, "Phi(c5 via jstar) = y8") &&
           contains(run.text, "Kono-Kozima") && run.text.ends_with("cat >= 2\n");
}

// ---- criterion 6: solver vs exhaustive enumeration ----

bool oracle_retraction(const mod::ModuleMap& i, const mod::SteenrodModule& src,
                       const mod::SteenrodModule& tgt) {
    int top = std::min(src.max_degree, tgt.max_degree);
    struct Slot {
        int d, r, c;
    };
    std::vector<Slot> bits;
    for (int d = 0; d <= top; ++d)
        for (int r = 0; r < src.dim(d); ++r)
            for (int c = 0; c < tgt.dim(d); ++c) bits.push_back({d, r, c});
    if (bits.size() > 18) throw std::runtime_error("oracle: search space too large");
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << bits.size()); ++mask) {
        std::map<int, BitMatrix> s;
        for (int d = 0; d <= top; ++d) s.emplace(d, BitMatrix(src.dim(d), tgt.dim(d)));
        for (std::size_t b = 0; b < bits.size(); ++b)
            if ((mask >> b) & 1) s.at(bits[b].d).set(bits[b].r, bits[b].c, true);
        bool ok = true;
        for (int d = 0; d <= top && ok; ++d) {
            if (src.dim(d) == 0) continue;
            ok = s.at(d) * i.matrix(d, src, tgt) == BitMatrix::identity(src.dim(d));
        }
        for (int k = 1; k <= top && ok; ++k)
            for (int d = 0; d + k <= top && ok; ++d) {
                if (src.dim(d + k) == 0) continue;
                BitMatrix lhs = s.at(d + k) * tgt.sq_matrix(k, d);
                BitMatrix rhs = src.dim(d) > 0 ? src.sq_matrix(k, d) * s.at(d)
                                               : BitMatrix(src.dim(d + k), tgt.dim(d));
                ok = lhs == rhs;
            }
        if (ok) return true;
    }
    return false;
}

bool agrees_with_oracle(const mod::ModuleMap& map, const mod::SteenrodModule& src,
                        const mod::SteenrodModule& tgt) {
    auto outcome = weights::retraction_exists(map, src, tgt);
    std::size_t idx = 0;
    for (const auto& sr : src.all_resolutions()) {
        auto cs = src.materialize(sr);
        for (const auto& tr : tgt.all_resolutions()) {
            auto ct = tgt.materialize(tr);
            if (outcome.per_resolution.at(idx).sat != oracle_retraction(map, cs, ct))
                return false;
            ++idx;
        }
    }
    return true;
}

mod::SteenrodModule random_module(std::mt19937& rng) {
    for (;;) {
        mod::SteenrodModule m;
        m.name = "R";
        m.max_degree = 3 + static_cast<int>(rng() % 2);
        m.basis.assign(m.max_degree + 1, {});
        int total = 0;
        for (int d = 0; d <= m.max_degree; ++d) {
            int dim = static_cast<int>(rng() % 2) + static_cast<int>(rng() % 2);
            dim = std::min(dim, 4 - total);
            for (int i = 0; i < dim; ++i)
                m.basis[d].push_back("g" + std::to_string(d) + "_" + std::to_string(i));
            total += dim;
        }
        for (int k = 1; k <= m.max_degree; ++k)
            for (int d = k; d + k <= m.max_degree; ++d) {
                if (m.dim(d) == 0 || m.dim(d + k) == 0 || rng() % 2) continue;
                BitMatrix mat(m.dim(d + k), m.dim(d));
                for (std::size_t r = 0; r < mat.rows(); ++r)
                    for (std::size_t c = 0; c < mat.cols(); ++c) mat.set(r, c, rng() % 2);
                if (!mat.is_zero()) m.sq[{k, d}] = mat;
            }
        if (mod::validate_module(m).ok()) return m;
    }
}

bool criterion6() {
    struct Pair {
        const char* map;
        dsl::Document* doc;
    };
    std::vector<Pair> corpus = {{"qstar", &twistor()},
                                {"q1star", &twistor()},
                                {"q0star", &twocell()},
                                {"iota", &twocell()}};
    for (const auto& p : corpus) {
        const auto& mp = *p.doc->find_map(p.map);
        const auto& src = p.doc->find_module(mp.from)->compiled.module;
        const auto& tgt = p.doc->find_module(mp.to)->compiled.module;
        if (!agrees_with_oracle(mp.compiled, src, tgt)) return false;
    }
    std::mt19937 rng(90210);
    int done = 0;
    while (done < 30) {
        auto src = random_module(rng);
        auto tgt = random_module(rng);
        int top = std::min(src.max_degree, tgt.max_degree);
        std::size_t bits = 0;
        for (int d = 0; d <= top; ++d)
            bits += static_cast<std::size_t>(src.dim(d)) * tgt.dim(d);
        if (bits > 18) continue;
        mod::ModuleMap i;
        i.name = "i";
        for (int d = 0; d <= top; ++d) {
            if (src.dim(d) == 0 || tgt.dim(d) == 0) continue;
            BitMatrix mat(tgt.dim(d), src.dim(d));
            for (std::size_t r = 0; r < mat.rows(); ++r)
                for (std::size_t c = 0; c < mat.cols(); ++c) mat.set(r, c, rng() % 2);
            i.mats[d] = mat;
        }
        if (!agrees_with_oracle(i, src, tgt)) return false;
        ++done;
    }
    return true;
}

// ---- criterion 7: standalone property suites ----

bool delta_properties(const secondary::CofiberDiagram& d, int i) {
    auto [a1, a2] = secondary::op_A(d, i);
    BitMatrix stacked(a1.rows() + a2.rows(), a1.cols());
    for (std::size_t r = 0; r < a1.rows(); ++r) stacked.set_row(r, a1.row(r));
    for (std::size_t r = 0; r < a2.rows(); ++r) stacked.set_row(a1.rows() + r, a2.row(r));
    auto domain = f2::enumerate(f2::kernel_basis(stacked));
    for (const BitVec& x : domain) {
        auto rx = secondary::delta(d, i, x);
        if (!rx.defined || !rx.lift_independent) return false;
        for (const BitVec& y : domain) {
            auto ry = secondary::delta(d, i, y);
            auto rxy = secondary::delta(d, i, x ^ y);
            if (!rxy.defined) return false;
            if (!f2::coset_reduce(rx.im_B, rx.value ^ ry.value ^ rxy.value).is_zero())
                return false;
        }
    }
    return true;
}

bool roundtrip(const std::string& text) {
    dsl::Document doc = dsl::parse(text);
    dsl::Document again = dsl::parse(dsl::serialize(doc));
    if (doc.modules.size() != again.modules.size() || doc.maps.size() != again.maps.size() ||
        doc.diagrams.size() != again.diagrams.size())
        return false;
    for (std::size_t i = 0; i < doc.modules.size(); ++i) {
        const auto& a = doc.modules[i].compiled.module;
        const auto& b = again.modules[i].compiled.module;
        if (a.basis != b.basis || a.sq != b.sq || a.max_degree != b.max_degree) return false;
        if (doc.modules[i].compiled.mul != again.modules[i].compiled.mul) return false;
    }
    for (std::size_t i = 0; i < doc.maps.size(); ++i)
        if (doc.maps[i].compiled.mats != again.maps[i].compiled.mats) return false;
    return true;
}

bool criterion7() {
    auto dtw = twistor().build_diagram(*twistor().find_diagram("TwistorDelta"));
    auto vtw = secondary::validate_diagram(dtw);
    auto ctw = dtw.materialize(vtw.admissible_resolutions.at(0));
    auto dtc = twocell().build_diagram(*twocell().find_diagram("TwoCellDelta"));
    auto ctc = dtc.materialize(0);
    if (!delta_properties(ctw, 5) || !delta_properties(ctc, 5)) return false;

    const auto& hp2 = twistor().find_module("HP2")->compiled.module;
    const auto& q1star = twistor().find_map("q1star")->compiled;
    BitVec xtw = BitVec::unit(ctw.C.dim(5), ctw.C.find_label("bU")->second);
    BitVec utw = BitVec::unit(hp2.dim(8), hp2.find_label("a2")->second);
    auto rtw = secondary::swgt_certificate(hp2, q1star, 1, ctw, 5, xtw, utw);
    if (!secondary::replay_certificate(rtw, hp2, q1star, ctw, xtw)) return false;

    const auto& hx = twocell().find_module("HX")->compiled.module;
    const auto& iota = twocell().find_map("iota")->compiled;
    BitVec xtc = BitVec::unit(ctc.C.dim(5), ctc.C.find_label("c5")->second);
    BitVec utc = BitVec::unit(hx.dim(8), hx.find_label("x8")->second);
    auto rtc = secondary::swgt_certificate(hx, iota, 1, ctc, 5, xtc, utc);
    if (!secondary::replay_certificate(rtc, hx, iota, ctc, xtc)) return false;

    return roundtrip(examples::twistor_text()) && roundtrip(examples::twocell_text());
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        bool (*run)();
    };
    std::vector<Criterion> criteria = {
        {"Adem rewriting matches the polynomial-action oracle", criterion1},
        {"twistor Mwgt lemma: chain, SAT verdicts and wgt = 0", criterion2},
        {"twistor Swgt certificate and conclusion chain", criterion3},
        {"tensor-algebra dimension bookkeeping with flagged discrepancies", criterion4},
        {"two-cell pipeline reproduces cat >= 2", criterion5},
        {"retraction solver agrees with exhaustive enumeration", criterion6},
        {"property suites: delta laws, certificate replay, parser round-trip", criterion7},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        bool ok = false;
        try {
            ok = criteria[i].run();
        } catch (const std::exception& e) {
            std::cout << "criterion " << (i + 1) << " raised: " << e.what() << "\n";
        }
        std::cout << "criterion " << (i + 1) << " (" << criteria[i].name << "): "
                  << (ok ? "PASS" : "FAIL") << "\n";
        if (!ok) ++failures;
    }
    return failures;
}
