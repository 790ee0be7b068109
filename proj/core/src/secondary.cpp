#include "secat/secondary.hpp"

#include <stdexcept>

namespace secat::secondary {

using mod::Resolution;
using mod::ValidityIssue;

bool CofiberDiagram::has_slots() const {
    return Y.has_slots() || C.has_slots() || SX.has_slots() || SY.has_slots();
}

std::size_t CofiberDiagram::resolution_count() const {
    return Y.resolution_count() * C.resolution_count() * SX.resolution_count() *
           SY.resolution_count();
}

CofiberDiagram CofiberDiagram::materialize(std::size_t combined) const {
    std::size_t nsy = SY.resolution_count();
    std::size_t nsx = SX.resolution_count();
    std::size_t nc = C.resolution_count();
    std::size_t isy = combined % nsy;
    combined /= nsy;
    std::size_t isx = combined % nsx;
    combined /= nsx;
    std::size_t ic = combined % nc;
    combined /= nc;
    std::size_t iy = combined;
    if (iy >= Y.resolution_count())
        throw std::out_of_range("materialize: resolution index out of range");
    CofiberDiagram out = *this;
    out.Y = Y.materialize(Y.all_resolutions()[iy]);
    out.C = C.materialize(C.all_resolutions()[ic]);
    out.SX = SX.materialize(SX.all_resolutions()[isx]);
    out.SY = SY.materialize(SY.all_resolutions()[isy]);
    return out;
}

namespace {

void check_concrete_diagram(const CofiberDiagram& c, int res, ValidityReport& rep) {
    auto take = [&](ValidityReport sub) {
        for (auto& i : sub.issues) {
            i.resolution = res;
            rep.issues.push_back(std::move(i));
        }
    };
    take(mod::validate_module(c.Y));
    take(mod::validate_module(c.C));
    take(mod::validate_module(c.SX));
    take(mod::validate_module(c.SY));
    take(mod::validate_map(c.jstar, c.C, c.Y, true));
    take(mod::validate_map(c.taustar, c.SX, c.C, true));
    take(mod::validate_map(c.sfstar, c.SY, c.SX, true));
    auto issue = [&](ValidityIssue::Kind kind, const std::string& msg) {
        rep.issues.push_back({kind, c.name + ": " + msg, res});
    };
    for (int d = 0; d <= c.C.max_degree; ++d) {
        if (d <= c.Y.max_degree && d <= c.SX.max_degree) {
            if (!(c.jstar.matrix(d, c.C, c.Y) * c.taustar.matrix(d, c.SX, c.C)).is_zero())
                issue(ValidityIssue::Kind::Exactness,
                      "jstar∘taustar nonzero in degree " + std::to_string(d));
        }
    }
    for (int d = 0; d <= c.SX.max_degree; ++d) {
        if (d <= c.C.max_degree && d <= c.SY.max_degree) {
            if (!(c.taustar.matrix(d, c.SX, c.C) * c.sfstar.matrix(d, c.SY, c.SX)).is_zero())
                issue(ValidityIssue::Kind::Exactness,
                      "taustar∘sfstar nonzero in degree " + std::to_string(d));
        }
    }
    if (c.exact) {
        for (int d = 0; d <= c.C.max_degree; ++d) {
            if (d > c.Y.max_degree || d > c.SX.max_degree) continue;
            auto im = f2::image_basis(c.taustar.matrix(d, c.SX, c.C));
            auto ker = f2::kernel_basis(c.jstar.matrix(d, c.C, c.Y));
            if (!(im == ker))
                issue(ValidityIssue::Kind::Exactness,
                      "im(taustar) != ker(jstar) in C degree " + std::to_string(d));
        }
        for (int d = 0; d <= c.SX.max_degree; ++d) {
            if (d > c.C.max_degree || d > c.SY.max_degree) continue;
            auto im = f2::image_basis(c.sfstar.matrix(d, c.SY, c.SX));
            auto ker = f2::kernel_basis(c.taustar.matrix(d, c.SX, c.C));
            if (!(im == ker))
                issue(ValidityIssue::Kind::Exactness,
                      "im(sfstar) != ker(taustar) in SX degree " + std::to_string(d));
        }
    }
}

}  // namespace

ValidityReport validate_diagram(const CofiberDiagram& d) {
    ValidityReport rep;
    std::size_t n = d.resolution_count();
    for (std::size_t r = 0; r < n; ++r) {
        std::size_t before = rep.issues.size();
        check_concrete_diagram(d.materialize(r), d.has_slots() ? static_cast<int>(r) : -1,
                               rep);
        if (rep.issues.size() == before) rep.admissible_resolutions.push_back(r);
    }
    return rep;
}

namespace {

void require_concrete(const CofiberDiagram& d, const char* who) {
    if (d.has_slots())
        throw std::invalid_argument(std::string(who) +
                                    ": diagram must be materialized (slot-free)");
}

}  // namespace

std::pair<BitMatrix, BitMatrix> op_A(const CofiberDiagram& d, int i) {
    require_concrete(d, "op_A");
    if (i < 0 || i + 2 > d.C.max_degree || i + 2 > d.Y.max_degree)
        throw std::out_of_range("op_A: degree out of range");
    BitMatrix a1 = d.jstar.matrix(i + 1, d.C, d.Y) * d.C.sq_matrix(1, i);
    BitMatrix a2 = d.jstar.matrix(i + 2, d.C, d.Y) * d.C.sq_matrix(2, i);
    return {a1, a2};
}

BitMatrix op_B(const CofiberDiagram& d, int i) {
    require_concrete(d, "op_B");
    if (i < 0 || i + 4 > d.SX.max_degree)
        throw std::out_of_range("op_B: degree out of range");
    int n1 = d.SY.dim(i + 1), n2 = d.SY.dim(i + 2);
    BitMatrix out(d.SX.dim(i + 4), n1 + n2);
    for (int c = 0; c < n1; ++c) {
        BitVec u = d.sfstar.matrix(i + 1, d.SY, d.SX).col(c);
        out.set_col(c, d.SX.sq_matrix(3, i + 1).apply(u));
    }
    for (int c = 0; c < n2; ++c) {
        BitVec v = d.sfstar.matrix(i + 2, d.SY, d.SX).col(c);
        out.set_col(n1 + c, d.SX.sq_matrix(2, i + 2).apply(v));
    }
    return out;
}

Subspace indeterminacy(const SteenrodModule& m, int d) {
    if (d < 0 || d + 3 > m.max_degree)
        throw std::out_of_range("indeterminacy: degree out of range");
    auto im3 = f2::image_basis(m.sq_matrix(3, d));
    auto im2 = f2::image_basis(m.sq_matrix(2, d + 1));
    return f2::sum(im3, im2);
}

DeltaResult delta(const CofiberDiagram& d, int i, const BitVec& x) {
    require_concrete(d, "delta");
    DeltaResult res;
    res.degree = i;
    if (i < 0 || i + 2 > d.C.max_degree || i + 2 > d.Y.max_degree ||
        i + 4 > d.SX.max_degree)
        throw std::out_of_range("delta: degree out of range");
    if (static_cast<int>(x.size()) != d.C.dim(i))
        throw std::invalid_argument("delta: class has wrong length");
    auto [a1, a2] = op_A(d, i);
    if (!a1.apply(x).is_zero() || !a2.apply(x).is_zero()) {
        res.failure = "class is not in ker A";
        return res;
    }
    BitVec s1 = d.C.sq_matrix(1, i).apply(x);
    BitVec s2 = d.C.sq_matrix(2, i).apply(x);
    auto l1 = f2::solve(d.taustar.matrix(i + 1, d.SX, d.C), s1);
    auto l2 = f2::solve(d.taustar.matrix(i + 2, d.SX, d.C), s2);
    if (!l1.sat() || !l2.sat()) {
        res.failure = "lift through taustar failed: exactness data is inconsistent";
        return res;
    }
    res.w1 = *l1.solution;
    res.w2 = *l2.solution;
    res.raw = d.SX.sq_matrix(3, i + 1).apply(res.w1) ^
              d.SX.sq_matrix(2, i + 2).apply(res.w2);
    res.im_B = f2::image_basis(op_B(d, i));
    res.value = f2::coset_reduce(res.im_B, res.raw);
    // Any two lifts differ by kernel elements; their Δ contribution must die
    // in coker B.
    res.lift_independent = true;
    auto k1 = f2::kernel_basis(d.taustar.matrix(i + 1, d.SX, d.C));
    auto k2 = f2::kernel_basis(d.taustar.matrix(i + 2, d.SX, d.C));
    for (const BitVec& v1 : f2::enumerate(k1))
        for (const BitVec& v2 : f2::enumerate(k2)) {
            BitVec diff = d.SX.sq_matrix(3, i + 1).apply(v1) ^
                          d.SX.sq_matrix(2, i + 2).apply(v2);
            if (!res.im_B.contains(diff)) res.lift_independent = false;
        }
    res.defined = true;
    return res;
}

PhiResult phi_nontrivial(const CofiberDiagram& d, int i, const BitVec& x) {
    require_concrete(d, "phi_nontrivial");
    PhiResult res;
    res.delta = delta(d, i, x);
    if (!res.delta.defined) {
        res.detail = res.delta.failure;
        return res;
    }
    if (res.delta.value.is_zero()) {
        res.verdict = PhiResult::Verdict::NoInformation;
        res.detail = "Delta = 0: the test is one-sided, no conclusion about Phi";
        return res;
    }
    if (i + 3 > d.Y.max_degree) {
        res.detail = "Y does not model degree " + std::to_string(i + 3);
        return res;
    }
    BitMatrix j = d.jstar.matrix(i, d.C, d.Y);
    if (d.C.dim(i) != d.Y.dim(i) ||
        f2::rank(j) != static_cast<std::size_t>(d.Y.dim(i))) {
        res.detail = "jstar is not an isomorphism in degree " + std::to_string(i);
        return res;
    }
    res.y = j.apply(x);
    res.chain.push_back("y = jstar(" + d.C.describe(i, x) + ") = " +
                        d.Y.describe(i, res.y));
    BitMatrix sf = d.sfstar.matrix(i + 4, d.SY, d.SX);
    if (f2::rank(sf) != static_cast<std::size_t>(d.SY.dim(i + 4))) {
        res.detail = "sfstar is not injective in degree " + std::to_string(i + 4);
        return res;
    }
    if (d.SY.dim(i + 4) != d.Y.dim(i + 3)) {
        res.detail = "suspension correspondence SY_{i+4} = Y_{i+3} fails (dims differ)";
        return res;
    }
    // Solve sfstar(u) = Delta modulo im B: augment sf with the columns of B.
    BitMatrix b = op_B(d, i);
    BitMatrix aug(d.SX.dim(i + 4), sf.cols() + b.cols());
    for (std::size_t c = 0; c < sf.cols(); ++c) aug.set_col(c, sf.col(c));
    for (std::size_t c = 0; c < b.cols(); ++c) aug.set_col(sf.cols() + c, b.col(c));
    auto sol = f2::solve(aug, res.delta.raw);
    if (!sol.sat()) {
        res.verdict = PhiResult::Verdict::Inconclusive;
        res.detail = "Delta is not in the image of sfstar modulo im B";
        return res;
    }
    BitVec u(d.SY.dim(i + 4));
    for (int c = 0; c < d.SY.dim(i + 4); ++c) u.set(c, sol.solution->get(c));
    if (u.is_zero()) {
        res.verdict = PhiResult::Verdict::Inconclusive;
        res.detail = "Delta lies in im B after all: no nonzero pullback";
        return res;
    }
    res.chain.push_back("sfstar(" + d.SY.describe(i + 4, u) + ") = Delta = " +
                        d.SX.describe(i + 4, res.delta.value) + " (mod im B)");
    // Positional desuspension SY_{i+4} -> Y_{i+3}.
    res.phi_value = BitVec(d.Y.dim(i + 3));
    for (int c = 0; c < d.Y.dim(i + 3); ++c) res.phi_value.set(c, u.get(c));
    res.chain.push_back("Phi(y) = " + d.Y.describe(i + 3, res.phi_value) +
                        " via the suspension correspondence");
    res.indet = indeterminacy(d.Y, i);
    if (f2::coset_reduce(res.indet, res.phi_value).is_zero()) {
        res.verdict = PhiResult::Verdict::Inconclusive;
        res.detail = "Phi(y) lies in the indeterminacy subspace";
        return res;
    }
    res.verdict = PhiResult::Verdict::Nonzero;
    return res;
}

namespace {

std::vector<std::string> collect_provenance(const CofiberDiagram& d) {
    std::vector<std::string> out;
    for (const SteenrodModule* m : {&d.Y, &d.C, &d.SX, &d.SY})
        for (const auto& a : m->asserts)
            if (!a.provenance.empty())
                out.push_back(m->name + ": Sq" + std::to_string(a.k) + " " + a.label +
                              " != 0  " + a.provenance);
    return out;
}

}  // namespace

ObstructionReport swgt_certificate(const SteenrodModule& base, const ModuleMap& qk_star,
                                   int k, const CofiberDiagram& d, int i, const BitVec& x,
                                   const BitVec& u) {
    require_concrete(d, "swgt_certificate");
    ObstructionReport rep;
    rep.diagram_name = d.name;
    rep.degree = i;
    rep.class_label = d.C.describe(i, x);
    rep.provenance = collect_provenance(d);
    rep.phi = phi_nontrivial(d, i, x);
    if (rep.phi.verdict != PhiResult::Verdict::Nonzero) {
        rep.message = "Phi not established nonzero: " + rep.phi.detail;
        return rep;
    }
    rep.u = u;
    if (static_cast<int>(u.size()) != base.dim(i + 3) || u.is_zero()) {
        rep.message = "certificate class u must be a nonzero element of the base in degree " +
                      std::to_string(i + 3);
        return rep;
    }
    if (i + 3 > base.max_degree) {
        rep.message = "base does not model degree " + std::to_string(i + 3);
        return rep;
    }
    BitVec qu = qk_star.matrix(i + 3, base, d.Y).apply(u);
    rep.phi_matches_qk =
        f2::coset_reduce(rep.phi.indet, qu ^ rep.phi.phi_value).is_zero();
    if (!rep.phi_matches_qk) {
        rep.message = "Phi(y) does not match qk_star(" + base.describe(i + 3, u) +
                      "): input inconsistency";
        return rep;
    }
    rep.base_zero_at_i = base.dim(i) == 0;
    rep.base_indet_zero = indeterminacy(base, i).dim() == 0;
    if (!rep.base_zero_at_i) {
        rep.message = "base is nonzero in degree " + std::to_string(i) +
                      ": retraction value s(y) is not forced to vanish";
        return rep;
    }
    if (!rep.base_indet_zero) {
        rep.message = "base indeterminacy in degree " + std::to_string(i) + " is nonzero";
        return rep;
    }
    rep.verdict = ObstructionReport::Verdict::Established;
    rep.swgt_bound = k + 1;
    std::string b = std::to_string(k + 1);
    rep.message = base.describe(i + 3, u) + " = s(qk(" + base.describe(i + 3, u) +
                  ")) = s(Phi(y)) = Phi(s(y)) = Phi(0) = 0, a contradiction: no " +
                  "retraction commuting with Phi exists => Swgt >= " + b +
                  " => secat >= " + b;
    return rep;
}

bool replay_certificate(const ObstructionReport& rep, const SteenrodModule& base,
                        const ModuleMap& qk_star, const CofiberDiagram& d,
                        const BitVec& x) {
    if (rep.verdict != ObstructionReport::Verdict::Established) return false;
    int i = rep.degree;
    const DeltaResult& dl = rep.phi.delta;
    // 1. x in ker A
    if (!(d.jstar.matrix(i + 1, d.C, d.Y) * d.C.sq_matrix(1, i)).apply(x).is_zero())
        return false;
    if (!(d.jstar.matrix(i + 2, d.C, d.Y) * d.C.sq_matrix(2, i)).apply(x).is_zero())
        return false;
    // 2. the stored lifts really lift (Sq1 x, Sq2 x)
    if (!(d.taustar.matrix(i + 1, d.SX, d.C).apply(dl.w1) ==
          d.C.sq_matrix(1, i).apply(x)))
        return false;
    if (!(d.taustar.matrix(i + 2, d.SX, d.C).apply(dl.w2) ==
          d.C.sq_matrix(2, i).apply(x)))
        return false;
    // 3. Delta value from the lifts, reduced mod im B, nonzero
    BitVec raw = d.SX.sq_matrix(3, i + 1).apply(dl.w1) ^
                 d.SX.sq_matrix(2, i + 2).apply(dl.w2);
    if (!(raw == dl.raw)) return false;
    std::vector<BitVec> bcols;
    for (int c = 0; c < d.SY.dim(i + 1); ++c)
        bcols.push_back(d.SX.sq_matrix(3, i + 1).apply(
            d.sfstar.matrix(i + 1, d.SY, d.SX).col(c)));
    for (int c = 0; c < d.SY.dim(i + 2); ++c)
        bcols.push_back(d.SX.sq_matrix(2, i + 2).apply(
            d.sfstar.matrix(i + 2, d.SY, d.SX).col(c)));
    auto imb = f2::span(d.SX.dim(i + 4), bcols);
    if (!(imb == dl.im_B)) return false;
    BitVec value = f2::coset_reduce(imb, raw);
    if (!(value == dl.value) || value.is_zero()) return false;
    // 4. identifications
    BitMatrix j = d.jstar.matrix(i, d.C, d.Y);
    if (d.C.dim(i) != d.Y.dim(i) || f2::rank(j) != static_cast<std::size_t>(d.Y.dim(i)))
        return false;
    if (!(j.apply(x) == rep.phi.y)) return false;
    BitMatrix sf = d.sfstar.matrix(i + 4, d.SY, d.SX);
    if (f2::rank(sf) != static_cast<std::size_t>(d.SY.dim(i + 4))) return false;
    if (d.SY.dim(i + 4) != d.Y.dim(i + 3)) return false;
    BitVec susp(d.SY.dim(i + 4));
    for (int c = 0; c < d.SY.dim(i + 4); ++c) susp.set(c, rep.phi.phi_value.get(c));
    if (!imb.contains(sf.apply(susp) ^ raw)) return false;
    // 5. nonzero mod indeterminacy of Y
    auto indet = f2::sum(f2::image_basis(d.Y.sq_matrix(3, i)),
                         f2::image_basis(d.Y.sq_matrix(2, i + 1)));
    if (!(indet == rep.phi.indet)) return false;
    if (f2::coset_reduce(indet, rep.phi.phi_value).is_zero()) return false;
    // 6. base-side hypotheses
    BitVec qu = qk_star.matrix(i + 3, base, d.Y).apply(rep.u);
    if (rep.u.is_zero()) return false;
    if (!f2::coset_reduce(indet, qu ^ rep.phi.phi_value).is_zero()) return false;
    if (base.dim(i) != 0) return false;
    if (f2::sum(f2::image_basis(base.sq_matrix(3, i)),
                f2::image_basis(base.sq_matrix(2, i + 1)))
            .dim() != 0)
        return false;
    return true;
}

std::vector<ForcedEntryCheck> confirm_forced_entries(const CofiberDiagram& d) {
    require_concrete(d, "confirm_forced_entries");
    std::vector<ForcedEntryCheck> out;
    const char* names[4] = {"Y", "C", "SX", "SY"};
    for (int node = 0; node < 4; ++node) {
        auto pick = [&](CofiberDiagram& dd) -> SteenrodModule& {
            switch (node) {
                case 0: return dd.Y;
                case 1: return dd.C;
                case 2: return dd.SX;
                default: return dd.SY;
            }
        };
        CofiberDiagram probe = d;
        const SteenrodModule& m = pick(probe);
        for (const auto& a : m.asserts) {
            ForcedEntryCheck check;
            check.node = names[node];
            check.label = a.label;
            check.k = a.k;
            check.provenance = a.provenance;
            auto loc = m.find_label(a.label);
            if (!loc || loc->first + a.k > m.max_degree) {
                check.detail = "assert target outside the model";
                out.push_back(check);
                continue;
            }
            auto [deg, col] = *loc;
            BitVec stored = m.sq_matrix(a.k, deg).col(col);
            int tdim = m.dim(deg + a.k);
            std::vector<BitVec> survivors;
            for (unsigned long long bits = 1; bits < (1ull << tdim); ++bits) {
                BitVec v(tdim);
                for (int b = 0; b < tdim; ++b) v.set(b, (bits >> b) & 1);
                CofiberDiagram trial = d;
                SteenrodModule& tm = pick(trial);
                auto key = std::make_pair(a.k, deg);
                auto it = tm.sq.find(key);
                if (it == tm.sq.end())
                    it = tm.sq.emplace(key, BitMatrix(tdim, m.dim(deg))).first;
                it->second.set_col(col, v);
                if (validate_diagram(trial).ok()) survivors.push_back(v);
            }
            if (survivors.size() == 1 && survivors[0] == stored) {
                check.confirmed = true;
                check.detail = "unique consistent nonzero value " +
                               m.describe(deg + a.k, stored);
            } else if (survivors.empty()) {
                check.detail = "no nonzero value is consistent with the diagram";
            } else {
                check.detail = std::to_string(survivors.size()) +
                               " consistent nonzero values; forcing fails";
            }
            out.push_back(check);
        }
    }
    return out;
}

}  // namespace secat::secondary
