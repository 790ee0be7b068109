#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "secat/dsl.hpp"
#include "secat/examples.hpp"
#include "secat/weights.hpp"

using namespace secat;
using f2::BitMatrix;
using f2::BitVec;

namespace {

const dsl::Document& twistor_doc() {
    static dsl::Document doc = dsl::parse(examples::twistor_text());
    return doc;
}

const dsl::Document& twocell_doc() {
    static dsl::Document doc = dsl::parse(examples::twocell_text());
    return doc;
}

struct Pair {
    mod::ModuleMap map;
    mod::SteenrodModule src, tgt;
};

Pair shipped(const dsl::Document& doc, const std::string& name) {
    const auto& mp = *doc.find_map(name);
    return {mp.compiled, doc.find_module(mp.from)->compiled.module,
            doc.find_module(mp.to)->compiled.module};
}

// Exhaustive enumeration of every degreewise linear map s, checking the same
// constraint set the solver uses. Only for slot-free modules.
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
    REQUIRE(bits.size() <= 18);
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

void check_against_oracle(const Pair& p) {
    auto outcome = weights::retraction_exists(p.map, p.src, p.tgt);
    std::size_t idx = 0;
    for (const auto& sr : p.src.all_resolutions()) {
        auto cs = p.src.materialize(sr);
        for (const auto& tr : p.tgt.all_resolutions()) {
            auto ct = p.tgt.materialize(tr);
            CHECK(outcome.per_resolution.at(idx).sat == oracle_retraction(p.map, cs, ct));
            ++idx;
        }
    }
}

mod::SteenrodModule random_module(std::mt19937& rng, const std::string& name) {
    for (;;) {
        mod::SteenrodModule m;
        m.name = name;
        m.max_degree = 3 + static_cast<int>(rng() % 2);
        m.basis.assign(m.max_degree + 1, {});
        int total = 0;
        for (int d = 0; d <= m.max_degree; ++d) {
            int dim = static_cast<int>(rng() % 3) % 2 + static_cast<int>(rng() % 2);
            dim = std::min(dim, 4 - total);
            for (int i = 0; i < dim; ++i)
                m.basis[d].push_back("g" + std::to_string(d) + "_" + std::to_string(i));
            total += dim;
        }
        for (int k = 1; k <= m.max_degree; ++k)
            for (int d = k; d + k <= m.max_degree; ++d) {  // respect instability
                if (m.dim(d) == 0 || m.dim(d + k) == 0) continue;
                if (rng() % 2) continue;
                BitMatrix mat(m.dim(d + k), m.dim(d));
                for (std::size_t r = 0; r < mat.rows(); ++r)
                    for (std::size_t c = 0; c < mat.cols(); ++c) mat.set(r, c, rng() % 2);
                if (!mat.is_zero()) m.sq[{k, d}] = mat;
            }
        if (mod::validate_module(m).ok()) return m;
    }
}

}  // namespace

TEST_CASE("injectivity of the shipped maps") {
    auto qstar = shipped(twistor_doc(), "qstar");
    auto q1star = shipped(twistor_doc(), "q1star");
    CHECK(weights::is_injective(qstar.map, qstar.src, qstar.tgt));
    CHECK(weights::is_injective(q1star.map, q1star.src, q1star.tgt));
    auto q0 = shipped(twocell_doc(), "q0star");
    CHECK(!weights::is_injective(q0.map, q0.src, q0.tgt));
}

TEST_CASE("nil-ker on the shipped maps") {
    const auto& tw = twistor_doc();
    const auto& tc = twocell_doc();
    CHECK(weights::nil_ker(tw.find_map("qstar")->compiled,
                           tw.find_module("HP2")->compiled,
                           tw.find_module("CP5")->compiled) == 0);
    CHECK(weights::nil_ker(tc.find_map("q0star")->compiled,
                           tc.find_module("HX")->compiled,
                           tc.find_module("PT")->compiled) == 1);
}

TEST_CASE("nil-ker sees genuinely nilpotent kernels of higher order") {
    // F2[b]/b^4 -> F2 has kernel (b) with b*b^2 != 0: nilpotency 3
    auto text =
        "MODULE P MAXDEG 6\n  GEN one 0\nEND\n"
        "MODULE B MAXDEG 6\n  GEN one 0\n  GEN b 2\n  GEN b2 4\n  GEN b3 6\n"
        "  SQ 2 b = b2\n  SQ 2 b2 = 0\n"
        "  MUL b b = b2\n  MUL b b2 = b3\nEND\n"
        "MAP f FROM B TO P SHIFT 0\n  one -> one\n  b -> 0\n  b2 -> 0\n  b3 -> 0\nEND\n";
    auto doc = dsl::parse(text);
    CHECK(mod::validate_algebra(doc.find_module("B")->compiled).ok());
    CHECK(weights::nil_ker(doc.find_map("f")->compiled, doc.find_module("B")->compiled,
                           doc.find_module("P")->compiled) == 3);
}

TEST_CASE("twistor retraction refutation minimizes to the one-line chain") {
    auto p = shipped(twistor_doc(), "qstar");
    auto outcome = weights::retraction_exists(p.map, p.src, p.tgt);
    REQUIRE(outcome.per_resolution.size() == 1);
    const auto& cert = outcome.per_resolution[0];
    CHECK(!cert.sat);
    CHECK(cert.rank_a < cert.rank_aug);
    CHECK(cert.chain ==
          "a = s(i(a)) = s(Sq2 b) = Sq2(s(b)) = Sq2(0) = 0, contradicting a != 0");
    CHECK(cert.chain_k == 2);
    CHECK(cert.chain_witness == "a");
}

TEST_CASE("twistor q(1)* admits a retraction under every resolution") {
    auto p = shipped(twistor_doc(), "q1star");
    auto outcome = weights::retraction_exists(p.map, p.src, p.tgt);
    REQUIRE(outcome.per_resolution.size() == 2);
    CHECK(outcome.all_sat());
    for (const auto& cert : outcome.per_resolution) CHECK(!cert.section.empty());
}

TEST_CASE("weight reports for both shipped examples") {
    auto qstar = shipped(twistor_doc(), "qstar");
    auto q1star = shipped(twistor_doc(), "q1star");
    auto wr = weights::weight_report({{qstar.map, qstar.src, qstar.tgt},
                                     {q1star.map, q1star.src, q1star.tgt}});
    REQUIRE(wr.wgt);
    CHECK(*wr.wgt == 0);
    CHECK(wr.mwgt_lower == 1);
    REQUIRE(wr.mwgt_upper);
    CHECK(*wr.mwgt_upper == 1);
    CHECK(wr.warnings.empty());

    auto q0 = shipped(twocell_doc(), "q0star");
    auto io = shipped(twocell_doc(), "iota");
    auto wr2 = weights::weight_report({{q0.map, q0.src, q0.tgt}, {io.map, io.src, io.tgt}});
    REQUIRE(wr2.wgt);
    CHECK(*wr2.wgt == 1);
    CHECK(wr2.mwgt_lower == 1);
    REQUIRE(wr2.mwgt_upper);
    CHECK(*wr2.mwgt_upper == 1);
}

TEST_CASE("solver agrees with brute force on the shipped corpus") {
    check_against_oracle(shipped(twistor_doc(), "qstar"));
    check_against_oracle(shipped(twistor_doc(), "q1star"));
    check_against_oracle(shipped(twocell_doc(), "q0star"));
    check_against_oracle(shipped(twocell_doc(), "iota"));
}

TEST_CASE("solver agrees with brute force on random valid modules") {
    std::mt19937 rng(424242);
    for (int trial = 0; trial < 40; ++trial) {
        auto src = random_module(rng, "M");
        auto tgt = random_module(rng, "N");
        mod::ModuleMap i;
        i.name = "i";
        i.shift = 0;
        std::size_t bits = 0;
        for (int d = 0; d <= std::min(src.max_degree, tgt.max_degree); ++d)
            bits += static_cast<std::size_t>(src.dim(d)) * tgt.dim(d);
        if (bits > 18) continue;
        for (int d = 0; d <= std::min(src.max_degree, tgt.max_degree); ++d) {
            if (src.dim(d) == 0 || tgt.dim(d) == 0) continue;
            BitMatrix mat(tgt.dim(d), src.dim(d));
            for (std::size_t r = 0; r < mat.rows(); ++r)
                for (std::size_t c = 0; c < mat.cols(); ++c) mat.set(r, c, rng() % 2);
            i.mats[d] = mat;
        }
        check_against_oracle({i, src, tgt});
    }
}
