#include "secat/steenrod.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <stdexcept>

namespace secat::steenrod {

int degree(const SqWord& w) {
    return std::accumulate(w.begin(), w.end(), 0);
}

bool is_admissible(const SqWord& w) {
    for (std::size_t j = 0; j + 1 < w.size(); ++j)
        if (w[j] < 2 * w[j + 1]) return false;
    return true;
}

bool binom_mod2(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) return false;
    return (n & k) == k;
}

namespace {

// Descending lexicographic order on words.
bool word_greater(const SqWord& a, const SqWord& b) {
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

AdmissibleSum make_sum(std::vector<SqWord> terms) {
    std::sort(terms.begin(), terms.end(), word_greater);
    AdmissibleSum out;
    for (std::size_t i = 0; i < terms.size();) {
        std::size_t j = i;
        while (j < terms.size() && terms[j] == terms[i]) ++j;
        if ((j - i) % 2) out.terms.push_back(terms[i]);
        i = j;
    }
    return out;
}

AdmissibleSum add(const AdmissibleSum& a, const AdmissibleSum& b) {
    std::vector<SqWord> terms = a.terms;
    terms.insert(terms.end(), b.terms.begin(), b.terms.end());
    return make_sum(std::move(terms));
}

namespace {

// Adem: for a < 2b,  Sq^a Sq^b = sum_c C(b-c-1, a-2c) Sq^{a+b-c} Sq^c.
std::vector<SqWord> adem_pair(int a, int b) {
    std::vector<SqWord> out;
    for (int c = 0; 2 * c <= a; ++c) {
        if (!binom_mod2(b - c - 1, a - 2 * c)) continue;
        SqWord t;
        if (a + b - c > 0) t.push_back(a + b - c);
        if (c > 0) t.push_back(c);
        out.push_back(std::move(t));
    }
    return out;
}

AdmissibleSum rewrite_memo(const SqWord& w, std::map<SqWord, AdmissibleSum>& memo) {
    if (is_admissible(w)) return AdmissibleSum{{w}};
    if (auto it = memo.find(w); it != memo.end()) return it->second;

    // Leftmost inadmissible adjacent pair.
    std::size_t j = 0;
    while (w[j] >= 2 * w[j + 1]) ++j;
    std::vector<SqWord> expanded;
    for (const SqWord& repl : adem_pair(w[j], w[j + 1])) {
        SqWord t(w.begin(), w.begin() + j);
        t.insert(t.end(), repl.begin(), repl.end());
        t.insert(t.end(), w.begin() + j + 2, w.end());
        expanded.push_back(std::move(t));
    }
    std::vector<SqWord> normal;
    for (const SqWord& t : make_sum(std::move(expanded)).terms) {
        AdmissibleSum r = rewrite_memo(t, memo);
        normal.insert(normal.end(), r.terms.begin(), r.terms.end());
    }
    AdmissibleSum result = make_sum(std::move(normal));
    memo[w] = result;
    return result;
}

}  // namespace

AdmissibleSum adem_rewrite(const SqWord& w) {
    for (int e : w)
        if (e < 1) throw std::invalid_argument("SqWord exponents must be positive");
    static thread_local std::map<SqWord, AdmissibleSum> memo;
    return rewrite_memo(w, memo);
}

AdmissibleSum adem_rewrite(const AdmissibleSum& s) {
    std::vector<SqWord> terms;
    for (const SqWord& w : s.terms) {
        AdmissibleSum r = adem_rewrite(w);
        terms.insert(terms.end(), r.terms.begin(), r.terms.end());
    }
    return make_sum(std::move(terms));
}

std::vector<SqWord> admissible_basis(int n) {
    if (n < 0) throw std::invalid_argument("admissible_basis: negative degree");
    // words(n) = { i1 :: w | deg w = n - i1, w empty or i1 >= 2*w[0] }
    std::vector<SqWord> out;
    if (n == 0) {
        out.push_back({});
        return out;
    }
    for (int i1 = n; i1 >= 1; --i1) {
        for (const SqWord& w : admissible_basis(n - i1)) {
            if (!w.empty() && i1 < 2 * w[0]) continue;
            SqWord t{i1};
            t.insert(t.end(), w.begin(), w.end());
            out.push_back(std::move(t));
        }
    }
    std::sort(out.begin(), out.end(), word_greater);
    return out;
}

SqWord parse_word(const std::string& text) {
    SqWord w;
    std::size_t i = 0;
    auto skip_ws = [&] { while (i < text.size() && std::isspace((unsigned char)text[i])) ++i; };
    skip_ws();
    while (i < text.size()) {
        if (i + 1 >= text.size() ||
            std::tolower((unsigned char)text[i]) != 's' ||
            std::tolower((unsigned char)text[i + 1]) != 'q')
            throw std::invalid_argument("expected 'Sq' at position " + std::to_string(i));
        i += 2;
        std::size_t start = i;
        while (i < text.size() && std::isdigit((unsigned char)text[i])) ++i;
        if (i == start)
            throw std::invalid_argument("expected exponent after 'Sq' at position " + std::to_string(start));
        int e = std::stoi(text.substr(start, i - start));
        if (e < 1)
            throw std::invalid_argument("Sq exponent must be positive");
        w.push_back(e);
        skip_ws();
    }
    return w;
}

std::string to_string(const SqWord& w) {
    if (w.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ' ';
        s += "Sq" + std::to_string(w[i]);
    }
    return s;
}

std::string to_string(const AdmissibleSum& s) {
    if (s.terms.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < s.terms.size(); ++i) {
        if (i) out += " + ";
        out += to_string(s.terms[i]);
    }
    return out;
}

Poly Poly::zero(std::vector<int> var_degrees) {
    return Poly{std::move(var_degrees), {}};
}

Poly Poly::monomial(std::vector<int> var_degrees, std::vector<int> exponents) {
    if (exponents.size() != var_degrees.size())
        throw std::invalid_argument("monomial: exponent count mismatch");
    Poly p{std::move(var_degrees), {}};
    p.monomials.insert(std::move(exponents));
    return p;
}

int Poly::total_degree(const std::vector<int>& mono) const {
    int d = 0;
    for (std::size_t i = 0; i < mono.size(); ++i) d += mono[i] * var_degrees[i];
    return d;
}

Poly add(const Poly& a, const Poly& b) {
    if (a.var_degrees != b.var_degrees)
        throw std::invalid_argument("poly add: variable mismatch");
    Poly out{a.var_degrees, {}};
    for (const auto& m : a.monomials)
        if (!b.monomials.count(m)) out.monomials.insert(m);
    for (const auto& m : b.monomials)
        if (!a.monomials.count(m)) out.monomials.insert(m);
    return out;
}

Poly mul(const Poly& a, const Poly& b) {
    if (a.var_degrees != b.var_degrees)
        throw std::invalid_argument("poly mul: variable mismatch");
    Poly out{a.var_degrees, {}};
    for (const auto& ma : a.monomials) {
        for (const auto& mb : b.monomials) {
            std::vector<int> m(ma.size());
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
            auto [it, inserted] = out.monomials.insert(m);
            if (!inserted) out.monomials.erase(it);
        }
    }
    return out;
}

namespace {

// Sq^k on a single monomial, Cartan-expanded variable by variable.
void sq_mono(const std::vector<int>& degs, std::vector<int>& mono, std::size_t pos,
             int k, std::set<std::vector<int>>& acc) {
    if (k == 0) {
        auto [it, inserted] = acc.insert(mono);
        if (!inserted) acc.erase(it);
        return;
    }
    if (pos == mono.size()) return;
    int e = mono[pos], g = degs[pos];
    for (int i = 0; g * i <= k; ++i) {
        if (!binom_mod2(e, i)) continue;
        mono[pos] = e + i;
        sq_mono(degs, mono, pos + 1, k - g * i, acc);
        mono[pos] = e;
    }
}

}  // namespace

Poly poly_action(const SqWord& w, const Poly& p) {
    Poly cur = p;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        Poly next{cur.var_degrees, {}};
        for (const auto& m : cur.monomials) {
            std::vector<int> scratch = m;
            sq_mono(cur.var_degrees, scratch, 0, *it, next.monomials);
        }
        cur = std::move(next);
    }
    return cur;
}

Poly poly_action(const AdmissibleSum& s, const Poly& p) {
    Poly out = Poly::zero(p.var_degrees);
    for (const SqWord& w : s.terms) out = add(out, poly_action(w, p));
    return out;
}

}  // namespace secat::steenrod
