#pragma once

#include <string>
#include <utility>
#include <vector>

#include "secat/module.hpp"

namespace secat::secondary {

using f2::BitMatrix;
using f2::BitVec;
using f2::Subspace;
using mod::ModuleMap;
using mod::SteenrodModule;
using mod::ValidityReport;

// Cofiber-sequence data X -> Y -> C -> SX -> SY at the level of cohomology:
// jstar: C -> Y, taustar: SX -> C, sfstar: SY -> SX, all degree 0 and
// equivariant, with exactness im(taustar) = ker(jstar), im(sfstar) = ker(taustar).
struct CofiberDiagram {
    std::string name;
    SteenrodModule Y, C, SX, SY;
    ModuleMap jstar, taustar, sfstar;
    bool exact = false;  // exactness asserted by the input

    std::size_t resolution_count() const;
    // Concrete diagram for one combined ambiguity resolution, index ordered
    // as ((iY * nC + iC) * nSX + iSX) * nSY + iSY.
    CofiberDiagram materialize(std::size_t combined) const;
    bool has_slots() const;
};

// Modules, maps, zero compositions and (when asserted) degreewise exactness;
// admissible_resolutions lists the combined indices passing every check.
ValidityReport validate_diagram(const CofiberDiagram& d);

// A = (jstar∘Sq^1, jstar∘Sq^2) from C_i to Y_{i+1} x Y_{i+2}. Requires a
// slot-free diagram with i+2 within both models.
std::pair<BitMatrix, BitMatrix> op_A(const CofiberDiagram& d, int i);

// B(u, v) = Sq^3(sfstar u) + Sq^2(sfstar v) from SY_{i+1} ⊕ SY_{i+2} to
// SX_{i+4}; columns of SY_{i+1} first.
BitMatrix op_B(const CofiberDiagram& d, int i);

// im(Sq^3: m_d -> m_{d+3}) + im(Sq^2: m_{d+1} -> m_{d+3}).
Subspace indeterminacy(const SteenrodModule& m, int d);

struct DeltaResult {
    bool defined = false;
    std::string failure;  // when not defined: the failing precondition
    int degree = 0;       // i; the value lives in SX_{i+4}
    BitVec w1, w2;        // chosen lifts in SX_{i+1}, SX_{i+2}
    BitVec raw;           // Sq^3 w1 + Sq^2 w2 before coset reduction
    BitVec value;         // canonical representative modulo im B
    Subspace im_B;
    bool lift_independent = false;  // verified over all lift choices

    bool nonzero() const { return defined && !value.is_zero(); }
};

// Δ(x) = (Sq^3, Sq^2) ∘ (taustar)^{-1} ∘ (Sq^1, Sq^2)(x) as a coset of im B.
// Requires a slot-free diagram; x ∈ C_i must lie in ker A.
DeltaResult delta(const CofiberDiagram& d, int i, const BitVec& x);

struct PhiResult {
    enum class Verdict { Nonzero, NoInformation, Inconclusive };
    Verdict verdict = Verdict::Inconclusive;
    std::string detail;  // failing identification check, when inconclusive
    DeltaResult delta;
    BitVec y;          // class in Y_i named by x through the jstar isomorphism
    BitVec phi_value;  // representative of Φ(y) in Y_{i+3}
    Subspace indet;    // indeterminacy(Y, i)
    std::vector<std::string> chain;  // identification steps, human-readable
};

// Pulls a nonzero Δ back along sfstar and identifies it in Y_{i+3} through
// the suspension correspondence SY_{i+4} = Y_{i+3} (positional; dims checked).
PhiResult phi_nontrivial(const CofiberDiagram& d, int i, const BitVec& x);

struct ObstructionReport {
    std::string diagram_name;
    std::size_t resolution = 0;
    int degree = 0;  // i
    std::string class_label;
    PhiResult phi;
    // base-side data for the retraction refutation
    BitVec u;  // class in base_{i+3} with qk_star(u) = Φ(y)
    bool phi_matches_qk = false;
    bool base_zero_at_i = false;
    bool base_indet_zero = false;
    enum class Verdict { Established, Inconclusive };
    Verdict verdict = Verdict::Inconclusive;
    int swgt_bound = 0;  // Swgt >= swgt_bound when established
    std::string message;
    std::vector<std::string> provenance;  // echoed from input asserts
    // the engine cannot see the H-space hypotheses behind the diagram
    bool diagram_provenance_trusted = true;
};

// Lemma-3.2-style refutation: Φ(y) = qk_star(u) with u nonzero, base zero in
// degree i and with zero indeterminacy, forces Swgt >= k+1 (and secat >= k+1).
ObstructionReport swgt_certificate(const SteenrodModule& base, const ModuleMap& qk_star,
                                   int k, const CofiberDiagram& d, int i, const BitVec& x,
                                   const BitVec& u);

// Independent replay of a report from stored matrices, using only f2linalg
// primitives (no calls back into delta/phi).
bool replay_certificate(const ObstructionReport& rep, const SteenrodModule& base,
                        const ModuleMap& qk_star, const CofiberDiagram& d,
                        const BitVec& x);

struct ForcedEntryCheck {
    std::string node;   // Y, C, SX or SY
    std::string label;
    int k = 0;
    bool confirmed = false;
    std::string detail;
    std::string provenance;
};

// For every ASSERT NONZERO entry in the diagram's nodes: enumerate all nonzero
// candidate values of that sq entry and keep the ones consistent with module
// laws and map equivariance; confirmed iff the stored value is the unique
// survivor. Requires a slot-free diagram.
std::vector<ForcedEntryCheck> confirm_forced_entries(const CofiberDiagram& d);

}  // namespace secat::secondary
