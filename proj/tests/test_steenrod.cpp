#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "secat/steenrod.hpp"

using namespace secat::steenrod;

TEST_CASE("degrees and admissibility") {
    CHECK(degree({}) == 0);
    CHECK(degree({3, 1}) == 4);
    CHECK(is_admissible({}));
    CHECK(is_admissible({5}));
    CHECK(is_admissible({4, 2, 1}));
    CHECK(!is_admissible({1, 1}));
    CHECK(!is_admissible({2, 2}));
    CHECK(!is_admissible({3, 2}));
}

TEST_CASE("binomials mod 2 by Lucas") {
    CHECK(binom_mod2(0, 0));
    CHECK(binom_mod2(5, 1));
    CHECK(!binom_mod2(2, 1));
    CHECK(binom_mod2(3, 1));
    CHECK(!binom_mod2(4, 2));
    CHECK(binom_mod2(6, 2));
    CHECK(!binom_mod2(1, 2));
    // oracle: Pascal recurrence mod 2
    std::vector<std::vector<int>> pascal(20, std::vector<int>(20, 0));
    for (int n = 0; n < 20; ++n) {
        pascal[n][0] = 1;
        for (int k = 1; k <= n; ++k)
            pascal[n][k] = (pascal[n - 1][k - 1] + (k <= n - 1 ? pascal[n - 1][k] : 0)) % 2;
    }
    for (int n = 0; n < 20; ++n)
        for (int k = 0; k < 20; ++k) CHECK(binom_mod2(n, k) == (k <= n && pascal[n][k] == 1));
}

TEST_CASE("specific Adem relations") {
    CHECK(to_string(adem_rewrite({2, 2})) == "Sq3 Sq1");
    CHECK(to_string(adem_rewrite({1, 2})) == "Sq3");
    CHECK(adem_rewrite({1, 1}).is_zero());
    CHECK(to_string(adem_rewrite({2, 3})) == "Sq5 + Sq4 Sq1");
    CHECK(to_string(adem_rewrite({3, 3})) == "Sq5 Sq1");
    CHECK(to_string(adem_rewrite({2, 4})) == "Sq6 + Sq5 Sq1");
    CHECK(to_string(adem_rewrite({1, 3})) == "0");
    // already admissible words are fixed
    CHECK(adem_rewrite({7, 3, 1}) == make_sum({{7, 3, 1}}));
}

TEST_CASE("rewrite output is admissible and degree-homogeneous") {
    for (int a = 1; a <= 10; ++a)
        for (int b = 1; b <= 10; ++b)
            for (int c = 0; c <= 6; ++c) {
                SqWord w = c ? SqWord{a, b, c} : SqWord{a, b};
                AdmissibleSum s = adem_rewrite(w);
                for (const SqWord& t : s.terms) {
                    CHECK(is_admissible(t));
                    CHECK(degree(t) == degree(w));
                }
            }
}

TEST_CASE("admissible bases in low degrees") {
    std::vector<std::size_t> expected = {1, 1, 1, 2, 2, 2, 3, 4, 4, 5};
    for (std::size_t n = 0; n < expected.size(); ++n) {
        auto basis = admissible_basis(static_cast<int>(n));
        CHECK(basis.size() == expected[n]);
        for (const SqWord& w : basis) {
            CHECK(is_admissible(w));
            CHECK(degree(w) == static_cast<int>(n));
        }
    }
}

TEST_CASE("word parsing") {
    CHECK(parse_word("Sq2 Sq1") == SqWord{2, 1});
    CHECK(parse_word("sq3") == SqWord{3});
    CHECK(parse_word("") == SqWord{});
    CHECK_THROWS(parse_word("Sq"));
    CHECK_THROWS(parse_word("bogus"));
}

TEST_CASE("polynomial action basics") {
    // one generator x of degree 1: Sq1 x = x^2, Sq2 x = 0
    Poly x = Poly::monomial({1}, {1});
    CHECK(poly_action(SqWord{1}, x) == Poly::monomial({1}, {2}));
    CHECK(poly_action(SqWord{2}, x).is_zero());
    // generator b of degree 2: Sq2 b = b^2, Sq1 b = 0
    Poly b = Poly::monomial({2}, {1});
    CHECK(poly_action(SqWord{2}, b) == Poly::monomial({2}, {2}));
    CHECK(poly_action(SqWord{1}, b).is_zero());
    // Sq2 b^2 = C(2,1) b^3 = 0, Sq4 b^2 = b^4
    Poly b2 = Poly::monomial({2}, {2});
    CHECK(poly_action(SqWord{2}, b2).is_zero());
    CHECK(poly_action(SqWord{4}, b2) == Poly::monomial({2}, {4}));
    // Sq0 is the identity
    CHECK(poly_action(SqWord{}, b2) == b2);
}

TEST_CASE("Cartan formula for single squares, randomized") {
    std::mt19937 rng(7);
    std::vector<int> degs = {1, 1, 2, 4};
    auto random_poly = [&] {
        Poly p = Poly::zero(degs);
        int terms = 1 + static_cast<int>(rng() % 3);
        for (int t = 0; t < terms; ++t) {
            std::vector<int> e(degs.size());
            for (auto& x : e) x = static_cast<int>(rng() % 3);
            p = add(p, Poly::monomial(degs, e));
        }
        return p;
    };
    for (int trial = 0; trial < 100; ++trial) {
        Poly p = random_poly(), q = random_poly();
        for (int k = 1; k <= 6; ++k) {
            Poly lhs = poly_action(SqWord{k}, mul(p, q));
            Poly rhs = Poly::zero(degs);
            for (int i = 0; i <= k; ++i) {
                SqWord wi = i ? SqWord{i} : SqWord{};
                SqWord wj = (k - i) ? SqWord{k - i} : SqWord{};
                rhs = add(rhs, mul(poly_action(wi, p), poly_action(wj, q)));
            }
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("rewriting is invisible to the polynomial action") {
    std::mt19937 rng(11);
    std::vector<int> degs = {1, 2, 1, 4};
    for (int trial = 0; trial < 60; ++trial) {
        SqWord w;
        int len = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < len; ++i) w.push_back(1 + static_cast<int>(rng() % 5));
        std::vector<int> e(degs.size());
        for (auto& x : e) x = static_cast<int>(rng() % 3);
        Poly p = Poly::monomial(degs, e);
        CHECK(poly_action(w, p) == poly_action(adem_rewrite(w), p));
    }
}
