#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "secat/module.hpp"

namespace secat::weights {

using f2::BitMatrix;
using f2::BitVec;
using mod::ModuleMap;
using mod::SteenrodModule;
using mod::UnstableAlgebra;

// Verdict for one ambiguity resolution of the endpoints.
struct RetractionCertificate {
    bool sat = false;
    std::size_t resolution = 0;            // combined source*target resolution index
    std::map<int, BitMatrix> section;      // s_d per degree, when SAT (re-verified)
    std::size_t rank_a = 0, rank_aug = 0;  // refutation witness, when UNSAT
    // Minimized one-equation contradiction when one exists, e.g.
    // "a = s(i(a)) = s(Sq2 b) = Sq2(s(b)) = Sq2(0) = 0"; empty otherwise.
    std::string chain;
    int chain_k = 0;
    std::string chain_witness;  // the element whose retract is forced to vanish
};

struct RetractionOutcome {
    std::vector<RetractionCertificate> per_resolution;

    bool all_sat() const;
    bool all_unsat() const;
    bool mixed() const { return !all_sat() && !all_unsat(); }
};

// True iff every degreewise matrix of f has full column rank.
bool is_injective(const ModuleMap& f, const SteenrodModule& src, const SteenrodModule& tgt);

// Nilpotency of the kernel ideal: largest m with a nonzero m-fold product of
// kernel elements (0 when the kernel vanishes). Products whose degree exceeds
// the source's max degree are zero.
int nil_ker(const ModuleMap& f, const UnstableAlgebra& src, const UnstableAlgebra& tgt);

// Solve for s with s∘i = id and s∘Sq^k = Sq^k∘s (all k in range), once per
// ambiguity resolution of the endpoints. Non-injective inputs come back UNSAT
// from the s∘i = id constraints.
RetractionOutcome retraction_exists(const ModuleMap& i, const SteenrodModule& src,
                                    const SteenrodModule& tgt);

struct MapWithModules {
    ModuleMap map;
    SteenrodModule source;
    SteenrodModule target;
};

struct WeightReport {
    struct Entry {
        std::string map_name;
        int k = 0;  // position in the q(0)*, q(1)*, ... list
        bool injective = false;
        bool retraction_sat = false;       // meaningful when definite
        bool retraction_definite = false;  // same verdict under every resolution
        RetractionOutcome retraction;
    };
    std::vector<Entry> entries;
    int wgt_lower = 0;                // injectivity fails for all k < wgt_lower
    std::optional<int> wgt;           // least k with q(k)* injective
    int mwgt_lower = 0;               // retraction fails for all k < mwgt_lower
    std::optional<int> mwgt_upper;    // least k with retraction SAT (all resolutions)
    std::vector<std::string> warnings;
};

// maps[k] is q(k)*; verdicts and derived bounds per the chain
// secat >= Mwgt >= wgt >= nil-ker.
WeightReport weight_report(const std::vector<MapWithModules>& maps);

}  // namespace secat::weights
