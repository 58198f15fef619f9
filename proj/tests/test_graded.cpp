#include "doctest.h"

#include <random>

#include "nvol/graded.hpp"
#include "test_support.hpp"

using namespace nvol;
using namespace nvol::testing;

namespace {

GermPtr orthant(int n) {
    std::vector<VecZ> rays;
    for (int j = 0; j < n; ++j) {
        VecZ e(n, Int(0));
        e[j] = 1;
        rays.push_back(std::move(e));
    }
    return build_germ(rays);
}

GermPtr blowup_germ() {
    return build_germ({vz({1, 0, 1}), vz({0, 1, 1}), vz({-1, -1, 1}), vz({1, 1, 1})});
}

}  // namespace

TEST_CASE("graded: power sequences have constant trends") {
    const GermPtr g = orthant(2);
    const MonomialIdeal a(g, {vz({2, 0}), vz({0, 3})});
    const GradedSequence s = GradedSequence::powers(a);
    const auto l = lct_sequence(s, 8);
    for (const Rat& v : l.trend) CHECK(v == Rat(5, 6));
    CHECK(l.lower == Rat(5, 6));
    const auto e = mult_sequence(s, 8);
    for (const Rat& v : e.trend) CHECK(v == Rat(6));
    CHECK(e.estimate == Rat(6));
    // normalized multiplicity of the powers of (x^2, y^3) is (5/6)^2 * 6 = 25/6
    CHECK(normalized_multiplicity(s, 8).value == Rat(25, 6));
}

TEST_CASE("graded: powers of the maximal ideal give n^n") {
    for (int n = 2; n <= 3; ++n) {
        const GermPtr g = orthant(n);
        std::vector<VecZ> basis;
        for (int j = 0; j < n; ++j) {
            VecZ e(n, Int(0));
            e[j] = 1;
            basis.push_back(std::move(e));
        }
        const GradedSequence s = GradedSequence::powers(MonomialIdeal(g, basis));
        const auto l = lct_sequence(s, 6);
        for (const Rat& v : l.trend) CHECK(v == Rat(n));
        const auto e = mult_sequence(s, 6);
        for (const Rat& v : e.trend) CHECK(v == Rat(1));
        Rat nn = 1;
        for (int i = 0; i < n; ++i) nn *= n;
        CHECK(normalized_multiplicity(s, 6).value == nn);
    }
}

TEST_CASE("graded: valuation-ideal sequence bounds") {
    std::mt19937_64 rng(43);
    std::uniform_int_distribution<int> num(1, 3), den(1, 2);
    for (int t = 0; t < 4; ++t) {
        const GermPtr g = t % 2 ? blowup_germ() : orthant(2);
        VecQ u(g->rank(), Rat(0));
        for (const VecZ& r : g->sigma().rays()) {
            const Rat c(num(rng), den(rng));
            for (int j = 0; j < g->rank(); ++j) u[j] += c * Rat(r[j]);
        }
        const auto v = ToricValuation::exact(g, u);
        const GradedSequence s = GradedSequence::valuation_ideals(v);
        const int M = g->rank() == 2 ? 16 : 8;
        const auto l = lct_sequence(s, M);
        // every truncation is a certified lower bound for lct(a_bullet) <= A(v)
        const Rat a = v.log_discrepancy();
        for (const Rat& val : l.trend) CHECK(val <= a);
        CHECK(l.lower <= a);
        // multiplicity trend decreases along doubling to vol(v)
        const auto e = mult_sequence(s, M);
        const Rat vol = v.volume();
        CHECK(e.estimate >= vol);
        Rat prev = -1;
        for (int m = 1; m <= M; m *= 2) {
            if (prev >= 0) CHECK(e.trend[m - 1] <= prev);
            prev = e.trend[m - 1];
        }
    }
}

TEST_CASE("graded: subsequence a_{N m} preserves normalized multiplicity of powers") {
    const GermPtr g = orthant(2);
    const MonomialIdeal a(g, {vz({2, 0}), vz({1, 1}), vz({0, 4})});
    const GradedSequence s = GradedSequence::powers(a);
    for (int N : {2, 3}) {
        const GradedSequence sub =
            GradedSequence::custom(g, [a, N](int m) { return power(a, N * m); });
        // m * lct(a^{Nm}) = lct(a)/N * ... : normalized multiplicity matches exactly
        const auto full = normalized_multiplicity(s, 6);
        const auto sampled = normalized_multiplicity(sub, 6);
        // lct lower of subsequence is (1/N) * ... times; the invariant is on the product
        Rat scale_l = 1, scale_e = 1;
        for (int i = 0; i < g->rank(); ++i) {
            scale_l *= Rat(1, N);
            scale_e *= Rat(N);
        }
        CHECK(sampled.lct.lower == full.lct.lower / N);
        CHECK(sampled.mult.estimate == full.mult.estimate * scale_e);
        CHECK(sampled.value == full.value * scale_l * scale_e);
        CHECK(sampled.value == full.value);
    }
}

TEST_CASE("graded: gradedness holds exhaustively for m, k <= 10") {
    const GermPtr g = orthant(2);
    const MonomialIdeal a(g, {vz({2, 0}), vz({0, 3})});
    CHECK(GradedSequence::powers(a).check_graded(10));

    const auto v = ToricValuation::exact(g, vq({Rat(2, 3), Rat(3, 2)}));
    CHECK(GradedSequence::valuation_ideals(v).check_graded(10));
}

TEST_CASE("graded: zero-ideal terms are rejected") {
    const GermPtr g = orthant(2);
    const GradedSequence bad =
        GradedSequence::custom(g, [g](int) { return MonomialIdeal(g, {}); });
    CHECK_THROWS_AS(bad.at(1), EmptyIdeal);
}

TEST_CASE("graded: relate chain at desk scale") {
    // min over sampled valuations of nvol against min over sampled primary
    // ideals of lct^n e: the two infima agree in theory; at desk scale the
    // valuation-ideal members of the ideal pool keep the sampled minima within
    // a 10% band, and each lct witness pins nvol(v_u*) <= lct^n e exactly.
    std::mt19937_64 rng(47);
    std::uniform_int_distribution<int> num(1, 3), den(1, 2);
    for (const GermPtr& g : {orthant(2), blowup_germ()}) {
        const int n = g->rank();
        std::vector<ToricValuation> vals;
        for (int t = 0; t < 4; ++t) {
            VecQ u(n, Rat(0));
            for (const VecZ& r : g->sigma().rays()) {
                const Rat c(num(rng), den(rng));
                for (int j = 0; j < n; ++j) u[j] += c * Rat(r[j]);
            }
            vals.push_back(ToricValuation::exact(g, u));
        }
        std::vector<MonomialIdeal> ideals;
        for (const auto& v : vals) ideals.push_back(v.valuation_ideal(Rat(8)));

        Rat min_nvol = vals[0].normalized_volume();
        for (const auto& v : vals) min_nvol = std::min(min_nvol, v.normalized_volume());

        Rat min_nm = -1;
        for (const auto& a : ideals) {
            const Rat l = a.lct();
            Rat ln = 1;
            for (int i = 0; i < n; ++i) ln *= l;
            const Rat nm = ln * a.multiplicity();
            if (min_nm < 0 || nm < min_nm) min_nm = nm;
            // tech(1): the toric computing valuation of a primary monomial
            // ideal satisfies nvol(v_u*) <= lct(a)^n e(a), exactly
            const auto wit = a.lct_witness();
            const auto vstar = ToricValuation::exact(g, wit.computing_valuation);
            CHECK(vstar.normalized_volume() <= nm);
            min_nvol = std::min(min_nvol, vstar.normalized_volume());
        }
        CHECK(min_nvol <= min_nm);
        CHECK(min_nvol >= min_nm - Rat(1, 10) * min_nm);
    }
}
