#include "secat/weights.hpp"

#include <algorithm>
#include <stdexcept>

namespace secat::weights {

bool RetractionOutcome::all_sat() const {
    if (per_resolution.empty()) return false;
    return std::all_of(per_resolution.begin(), per_resolution.end(),
                       [](const RetractionCertificate& c) { return c.sat; });
}

bool RetractionOutcome::all_unsat() const {
    if (per_resolution.empty()) return false;
    return std::all_of(per_resolution.begin(), per_resolution.end(),
                       [](const RetractionCertificate& c) { return !c.sat; });
}

bool is_injective(const ModuleMap& f, const SteenrodModule& src, const SteenrodModule& tgt) {
    for (int d = 0; d <= src.max_degree; ++d) {
        if (src.dim(d) == 0) continue;
        if (f2::rank(f.matrix(d, src, tgt)) < static_cast<std::size_t>(src.dim(d)))
            return false;
    }
    return true;
}

int nil_ker(const ModuleMap& f, const UnstableAlgebra& src, const UnstableAlgebra& tgt) {
    if (f.shift != 0) throw std::invalid_argument("nil_ker: map must have shift 0");
    const SteenrodModule& m = src.module;
    const int D = m.max_degree;
    // kernel ideal, degreewise
    std::vector<f2::Subspace> ker(D + 1);
    for (int d = 1; d <= D; ++d)
        ker[d] = f2::kernel_basis(f.matrix(d, m, tgt.module));
    auto nonzero = [&](const std::vector<f2::Subspace>& p) {
        for (int d = 1; d <= D; ++d)
            if (p[d].dim() > 0) return true;
        return false;
    };
    std::vector<f2::Subspace> power = ker;
    if (!nonzero(power)) return 0;
    int nil = 1;
    while (nil < D) {
        std::vector<f2::Subspace> next(D + 1);
        for (int d = 1; d <= D; ++d) {
            std::vector<BitVec> gens;
            for (int d1 = 1; d1 < d; ++d1) {
                int d2 = d - d1;
                for (const BitVec& x : ker[d1].basis)
                    for (const BitVec& y : power[d2].basis)
                        gens.push_back(src.multiply(d1, x, d2, y));
            }
            next[d] = f2::span(m.dim(d), gens);
        }
        if (!nonzero(next)) break;
        power = std::move(next);
        ++nil;
    }
    return nil;
}

namespace {

// Variable layout for the unknown section s: N -> M.
struct VarLayout {
    std::vector<int> offset;  // per degree; -1 where no variables
    std::size_t total = 0;

    int index(int d, int r, int c, const SteenrodModule& tgt) const {
        return offset[d] + r * tgt.dim(d) + c;
    }
};

VarLayout layout(const SteenrodModule& src, const SteenrodModule& tgt) {
    VarLayout l;
    int top = std::min(src.max_degree, tgt.max_degree);
    l.offset.assign(top + 1, -1);
    for (int d = 0; d <= top; ++d) {
        if (src.dim(d) == 0 || tgt.dim(d) == 0) continue;
        l.offset[d] = static_cast<int>(l.total);
        l.total += static_cast<std::size_t>(src.dim(d)) * tgt.dim(d);
    }
    return l;
}

// Look for a one-line contradiction: a basis element v of N in
// a degree where M vanishes, with Sq^k(v) = i(x) for some nonzero x; then
// x = s(i(x)) = s(Sq^k v) = Sq^k(s v) = Sq^k(0) = 0.
void minimize_chain(const ModuleMap& i, const SteenrodModule& src, const SteenrodModule& tgt,
                    RetractionCertificate& cert) {
    int top = std::min(src.max_degree, tgt.max_degree);
    for (int e = 0; e <= top; ++e) {
        if (src.dim(e) != 0 || tgt.dim(e) == 0) continue;
        for (int k = 1; e + k <= top; ++k) {
            if (src.dim(e + k) == 0) continue;
            BitMatrix sq = tgt.sq_matrix(k, e);
            for (int c = 0; c < tgt.dim(e); ++c) {
                BitVec w = sq.col(c);
                if (w.is_zero()) continue;
                f2::SolveResult sol = f2::solve(i.matrix(e + k, src, tgt), w);
                if (!sol.sat() || sol.solution->is_zero()) continue;
                std::string x = src.describe(e + k, *sol.solution);
                std::string v = tgt.label_at(e, c);
                std::string op = "Sq" + std::to_string(k);
                cert.chain = x + " = s(i(" + x + ")) = s(" + op + " " + v + ") = " + op +
                             "(s(" + v + ")) = " + op + "(0) = 0, contradicting " + x +
                             " != 0";
                cert.chain_k = k;
                cert.chain_witness = x;
                return;
            }
        }
    }
}

RetractionCertificate solve_one(const ModuleMap& i, const SteenrodModule& src,
                                const SteenrodModule& tgt) {
    VarLayout vars = layout(src, tgt);
    int top = std::min(src.max_degree, tgt.max_degree);
    std::vector<BitVec> rows;
    std::vector<bool> rhs;
    // s∘i = id on every degree of the source.
    for (int d = 0; d <= top; ++d) {
        int dm = src.dim(d);
        if (dm == 0) continue;
        BitMatrix id_ = i.matrix(d, src, tgt);
        for (int p = 0; p < dm; ++p)
            for (int q = 0; q < dm; ++q) {
                BitVec row(vars.total);
                if (vars.offset[d] >= 0)
                    for (int c = 0; c < tgt.dim(d); ++c)
                        if (id_.get(c, q)) row.flip(vars.index(d, p, c, tgt));
                rows.push_back(std::move(row));
                rhs.push_back(p == q);
            }
    }
    // s∘Sq^k = Sq^k∘s wherever both sides are in the model.
    for (int k = 1; k <= top; ++k)
        for (int d = 0; d + k <= top; ++d) {
            if (tgt.dim(d) == 0 || src.dim(d + k) == 0) continue;
            BitMatrix sqn = tgt.sq_matrix(k, d);
            BitMatrix sqm = src.sq_matrix(k, d);
            for (int p = 0; p < src.dim(d + k); ++p)
                for (int q = 0; q < tgt.dim(d); ++q) {
                    BitVec row(vars.total);
                    if (vars.offset[d + k] >= 0)
                        for (int c = 0; c < tgt.dim(d + k); ++c)
                            if (sqn.get(c, q)) row.flip(vars.index(d + k, p, c, tgt));
                    if (vars.offset[d] >= 0)
                        for (int c = 0; c < src.dim(d); ++c)
                            if (sqm.get(p, c)) row.flip(vars.index(d, c, q, tgt));
                    if (row.is_zero()) continue;
                    rows.push_back(std::move(row));
                    rhs.push_back(false);
                }
        }
    BitMatrix sys(rows.size(), vars.total);
    BitVec target(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        sys.set_row(r, rows[r]);
        target.set(r, rhs[r]);
    }
    f2::SolveResult sol = f2::solve(sys, target);
    RetractionCertificate cert;
    cert.rank_a = sol.rank_a;
    cert.rank_aug = sol.rank_aug;
    if (!sol.sat()) {
        minimize_chain(i, src, tgt, cert);
        return cert;
    }
    cert.sat = true;
    for (int d = 0; d <= top; ++d) {
        if (src.dim(d) == 0) continue;
        BitMatrix s(src.dim(d), tgt.dim(d));
        if (vars.offset[d] >= 0)
            for (int r = 0; r < src.dim(d); ++r)
                for (int c = 0; c < tgt.dim(d); ++c)
                    s.set(r, c, sol.solution->get(vars.index(d, r, c, tgt)));
        cert.section[d] = std::move(s);
    }
    // Re-verify independently of the solver.
    for (int d = 0; d <= top; ++d) {
        if (src.dim(d) == 0) continue;
        if (!(cert.section.at(d) * i.matrix(d, src, tgt) == BitMatrix::identity(src.dim(d))))
            throw std::logic_error("retraction_exists: certificate fails s∘i = id");
    }
    for (int k = 1; k <= top; ++k)
        for (int d = 0; d + k <= top; ++d) {
            if (src.dim(d + k) == 0) continue;
            BitMatrix lhs = cert.section.at(d + k) * tgt.sq_matrix(k, d);
            BitMatrix rhs2 = src.dim(d) > 0
                                 ? src.sq_matrix(k, d) * cert.section.at(d)
                                 : BitMatrix(src.dim(d + k), tgt.dim(d));
            if (!(lhs == rhs2))
                throw std::logic_error("retraction_exists: certificate fails equivariance");
        }
    return cert;
}

}  // namespace

RetractionOutcome retraction_exists(const ModuleMap& i, const SteenrodModule& src,
                                    const SteenrodModule& tgt) {
    if (i.shift != 0) throw std::invalid_argument("retraction_exists: map must have shift 0");
    RetractionOutcome out;
    auto sres = src.all_resolutions();
    auto tres = tgt.all_resolutions();
    for (std::size_t si = 0; si < sres.size(); ++si) {
        SteenrodModule cs = src.materialize(sres[si]);
        for (std::size_t ti = 0; ti < tres.size(); ++ti) {
            SteenrodModule ct = tgt.materialize(tres[ti]);
            RetractionCertificate cert = solve_one(i, cs, ct);
            cert.resolution = si * tres.size() + ti;
            out.per_resolution.push_back(std::move(cert));
        }
    }
    return out;
}

WeightReport weight_report(const std::vector<MapWithModules>& maps) {
    WeightReport rep;
    for (std::size_t k = 0; k < maps.size(); ++k) {
        const MapWithModules& mm = maps[k];
        WeightReport::Entry e;
        e.map_name = mm.map.name;
        e.k = static_cast<int>(k);
        e.injective = is_injective(mm.map, mm.source, mm.target);
        e.retraction = retraction_exists(mm.map, mm.source, mm.target);
        if (e.retraction.all_sat()) {
            e.retraction_sat = true;
            e.retraction_definite = true;
        } else if (e.retraction.all_unsat()) {
            e.retraction_sat = false;
            e.retraction_definite = true;
        }
        rep.entries.push_back(std::move(e));
    }
    bool inj_seen = false, sat_seen = false;
    for (const auto& e : rep.entries) {
        if (e.injective && !rep.wgt) rep.wgt = e.k;
        if (!e.injective && !rep.wgt) rep.wgt_lower = e.k + 1;
        if (e.retraction_definite && e.retraction_sat && !rep.mwgt_upper) rep.mwgt_upper = e.k;
        if (e.retraction_definite && !e.retraction_sat && !rep.mwgt_upper)
            rep.mwgt_lower = e.k + 1;
        if (inj_seen && !e.injective)
            rep.warnings.push_back("injectivity is not monotone across the supplied maps");
        if (sat_seen && e.retraction_definite && !e.retraction_sat)
            rep.warnings.push_back("retraction verdicts are not monotone across the supplied maps");
        inj_seen = inj_seen || e.injective;
        sat_seen = sat_seen || (e.retraction_definite && e.retraction_sat);
        if (!e.retraction_definite)
            rep.warnings.push_back("map " + e.map_name +
                                   ": retraction verdict differs across ambiguity resolutions");
    }
    return rep;
}

}  // namespace secat::weights
