#pragma once

#include <set>
#include <string>
#include <vector>

namespace secat::steenrod {

// A formal monomial Sq^{i_1}...Sq^{i_r}; the empty word is Sq^0 = 1.
using SqWord = std::vector<int>;

int degree(const SqWord& w);
bool is_admissible(const SqWord& w);

// C(n,k) mod 2 by the Lucas criterion.
bool binom_mod2(long long n, long long k);

// A homogeneous F2-sum of admissible words, canonically ordered.
struct AdmissibleSum {
    std::vector<SqWord> terms;  // strictly descending lexicographic

    bool is_zero() const { return terms.empty(); }
    bool operator==(const AdmissibleSum&) const = default;
};

AdmissibleSum make_sum(std::vector<SqWord> terms);  // canonicalizes, mod 2
AdmissibleSum add(const AdmissibleSum& a, const AdmissibleSum& b);

// The unique admissible normal form under Adem rewriting.
AdmissibleSum adem_rewrite(const SqWord& w);
AdmissibleSum adem_rewrite(const AdmissibleSum& s);

// All admissible words of degree n, descending lexicographic.
std::vector<SqWord> admissible_basis(int n);

// CLI word syntax: "Sq3 Sq1", case-insensitive prefix.
SqWord parse_word(const std::string& text);
std::string to_string(const SqWord& w);
std::string to_string(const AdmissibleSum& s);

// Polynomial algebra over F2 on generators of degree 1, 2 or 4, used as an
// independent oracle for the rewriting engine. A monomial is its exponent
// vector; a polynomial is a set of monomials.
struct Poly {
    std::vector<int> var_degrees;
    std::set<std::vector<int>> monomials;

    static Poly zero(std::vector<int> var_degrees);
    static Poly monomial(std::vector<int> var_degrees, std::vector<int> exponents);

    bool is_zero() const { return monomials.empty(); }
    int total_degree(const std::vector<int>& mono) const;
    bool operator==(const Poly&) const = default;
};

Poly add(const Poly& a, const Poly& b);
Poly mul(const Poly& a, const Poly& b);

// Total Steenrod action: on a generator x of degree g, Sq^{gi}(x^n) =
// C(n,i) x^{n+i} and all other squares vanish; extended over products by the
// Cartan formula and linearly over sums.
Poly poly_action(const SqWord& w, const Poly& p);
Poly poly_action(const AdmissibleSum& s, const Poly& p);

}  // namespace secat::steenrod
