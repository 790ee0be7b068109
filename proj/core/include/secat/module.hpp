#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "secat/f2.hpp"
#include "secat/steenrod.hpp"

namespace secat::mod {

using f2::BitMatrix;
using f2::BitVec;

// An entry the input leaves undetermined: the value of Sq^k on one basis
// element, declared as a finite set of alternatives.
struct AmbiguitySlot {
    int k = 0;
    int degree = 0;
    std::size_t column = 0;            // basis index within the degree
    std::string label;                 // basis label, for reports
    std::vector<BitVec> alternatives;  // candidate values in degree+k
};

// A nonvanishing assertion taken as input (not derivable by the tool).
struct NonzeroAssert {
    int k = 0;
    std::string label;
    std::string provenance;  // echoed into reports
};

// A resolution picks one alternative per slot.
using Resolution = std::vector<std::size_t>;

// Finite graded module over the mod-2 Steenrod algebra. Degrees run 0..max_degree;
// degrees above max_degree are outside the model and never assumed zero.
struct SteenrodModule {
    std::string name;
    int max_degree = 0;
    std::vector<std::vector<std::string>> basis;   // basis[d] = labels in degree d
    std::map<std::pair<int, int>, BitMatrix> sq;   // (k, d) -> matrix dim(d+k) x dim(d)
    std::vector<AmbiguitySlot> slots;
    std::vector<NonzeroAssert> asserts;

    int dim(int d) const;
    int total_dim() const;
    // Stored matrix, or zero when absent (instability and zero-dimensional
    // targets make the entry implicit). Throws if d+k exceeds max_degree.
    BitMatrix sq_matrix(int k, int d) const;
    // Matrix of a formal sum of admissible words acting from degree d.
    BitMatrix op_matrix(const steenrod::AdmissibleSum& s, int d) const;
    BitMatrix word_matrix(const steenrod::SqWord& w, int d) const;

    std::optional<std::pair<int, std::size_t>> find_label(const std::string& label) const;
    const std::string& label_at(int d, std::size_t i) const { return basis[d][i]; }
    // Pretty-print a vector in degree d as a sum of labels.
    std::string describe(int d, const BitVec& v) const;

    std::size_t resolution_count() const;
    std::vector<Resolution> all_resolutions() const;
    // Concrete module with every slot substituted.
    SteenrodModule materialize(const Resolution& r) const;
    bool has_slots() const { return !slots.empty(); }
};

struct ValidityIssue {
    enum class Kind { Structural, Instability, Adem, Algebra, Assert, Map, Exactness };
    Kind kind;
    std::string message;
    int resolution = -1;  // resolution index, or -1 when resolution-independent
};

struct ValidityReport {
    std::vector<ValidityIssue> issues;
    // Resolutions that pass every check; meaningful only for slotted objects.
    std::vector<std::size_t> admissible_resolutions;
    bool ok() const { return issues.empty(); }
    // At least one resolution survives and nothing failed structurally.
    bool admissible() const;
    std::string to_string() const;
};

// Module plus unit and products, validated as a graded-commutative unstable
// algebra. Products whose total degree exceeds max_degree are zero: an algebra
// file models the full cohomology of a finite complex, so max_degree is the
// top nonzero degree.
struct UnstableAlgebra {
    SteenrodModule module;
    // (d1, d2) -> matrix dim(d1+d2) x (dim(d1)*dim(d2)), column i*dim(d2)+j.
    std::map<std::pair<int, int>, BitMatrix> mul;
    bool has_products = false;

    BitVec multiply(int d1, const BitVec& x, int d2, const BitVec& y) const;
};

// Graded linear map between modules, raising degree by `shift`.
struct ModuleMap {
    std::string name;
    std::string source_name;
    std::string target_name;
    int shift = 0;
    std::map<int, BitMatrix> mats;  // d -> matrix dim_target(d+shift) x dim_source(d)

    BitMatrix matrix(int d, const SteenrodModule& src, const SteenrodModule& tgt) const;
};

// ---- validation ----

ValidityReport validate_module(const SteenrodModule& m);
ValidityReport validate_algebra(const UnstableAlgebra& a);
ValidityReport validate_map(const ModuleMap& f, const SteenrodModule& src,
                            const SteenrodModule& tgt, bool check_equivariance);

// ---- constructors ----

// F2[x]/(x^h) on a generator of degree g in {1,2,4}.
UnstableAlgebra truncated_polynomial_algebra(int gen_degree, int height);
UnstableAlgebra sphere(int n);
// Degree shift by one on the reduced part; identical sq matrices, no products.
SteenrodModule suspension(const SteenrodModule& m);
SteenrodModule tensor_product(const SteenrodModule& m, const SteenrodModule& n);
UnstableAlgebra tensor_algebra(const UnstableAlgebra& a, const UnstableAlgebra& b);

// Free rank-one module over `base` on a class U of degree `shift`, with
// Sq^k(x U) = sum_i Sq^i(x) w_{k-i} U. w[i] is the class of degree i+1
// (w_0 = 1 implicit); entries may be zero vectors.
SteenrodModule thom_module(const UnstableAlgebra& base, const std::vector<BitVec>& w,
                           int shift);

struct DualTensorAlgebraSpec {
    struct Generator {
        std::string name;
        int degree = 0;
    };
    std::vector<Generator> generators;
    // (k, generator index) -> dual value as a sum of words (vectors of
    // generator indices) of degree deg - k. Unlisted entries are zero.
    std::map<std::pair<int, std::size_t>, std::vector<std::vector<std::size_t>>> dual_action;
    int truncation = 0;
};

// Cohomology of a loop space whose Pontryagin algebra is the free tensor
// algebra on the given generators: basis in degree d is the set of words of
// total degree d, and sq matrices are the transposed dual action extended by
// the Cartan formula for Pontryagin products.
SteenrodModule dual_tensor_algebra(const DualTensorAlgebraSpec& spec);

// H^{*}(Sigma Omega Z) = H^{*-1}(Omega Z) with commuting squares.
SteenrodModule loop_suspension(const SteenrodModule& m);

// Number of words in the free monoid on the generators with total degree d,
// for each d <= max_degree.
std::vector<long long> tensor_algebra_dims(const std::vector<int>& gen_degrees,
                                           int max_degree);

// Structural equality: same dims and same sq matrices degreewise (labels and
// names ignored). Both modules must be slot-free.
bool structurally_equal(const SteenrodModule& a, const SteenrodModule& b);

}  // namespace secat::mod
