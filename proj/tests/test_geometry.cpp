#include "doctest.h"

#include <optional>
#include <random>
#include <set>
#include <thread>

#include "nvol/cone.hpp"
#include "nvol/linalg.hpp"
#include "nvol/lp.hpp"
#include "nvol/polytope.hpp"
#include "test_support.hpp"

using namespace nvol;
using namespace nvol::testing;

TEST_CASE("exact linear algebra basics") {
    Mat m = {{Rat(1), Rat(2)}, {Rat(3), Rat(4)}};
    CHECK(det(m) == Rat(-2));
    CHECK(rank(m) == 2);
    Mat sing = {{Rat(1), Rat(2)}, {Rat(2), Rat(4)}};
    CHECK(rank(sing) == 1);
    CHECK(det(sing) == Rat(0));

    auto sol = solve_system({{Rat(2), Rat(0)}, {Rat(0), Rat(3)}}, {Rat(4), Rat(6)});
    REQUIRE(sol.has_value());
    CHECK((*sol)[0] == Rat(2));
    CHECK((*sol)[1] == Rat(2));

    // inconsistent overdetermined
    auto bad = solve_system({{Rat(1)}, {Rat(1)}}, {Rat(0), Rat(1)});
    CHECK(!bad.has_value());

    auto ns = null_space({{Rat(1), Rat(1), Rat(0)}});
    CHECK(ns.size() == 2);
}

TEST_CASE("rationalize recovers small fractions") {
    CHECK(rationalize(0.5) == Rat(1, 2));
    CHECK(rationalize(1.0 / 3.0) == Rat(1, 3));
    CHECK(rationalize(0.0) == Rat(0));
    CHECK(rationalize(-2.25) == Rat(-9, 4));
    const Rat r = rationalize(0.123456789, 1e-9);
    CHECK(std::abs(to_double(r) - 0.123456789) <= 1e-9);
    CHECK(rationalize_bounded(1.0 / 3.0 + 1e-11, Int(100)) == Rat(1, 3));
}

TEST_CASE("lp: maximum of x+y over the unit triangle is 1") {
    std::vector<LpConstraint> cons = {
        {{Rat(1), Rat(0)}, Rat(0)},   // x >= 0
        {{Rat(0), Rat(1)}, Rat(0)},   // y >= 0
        {{Rat(-1), Rat(-1)}, Rat(-1)} // x + y <= 1
    };
    const LpResult res = lp_maximize({Rat(1), Rat(1)}, cons);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.value == Rat(1));
    // witness is feasible and attains the value exactly
    for (const auto& c : cons) CHECK(dot(c.normal, res.witness) >= c.offset);
    CHECK(res.witness[0] + res.witness[1] == Rat(1));
}

TEST_CASE("lp: infeasible and unbounded detection") {
    std::vector<LpConstraint> infeas = {
        {{Rat(1)}, Rat(1)},   // x >= 1
        {{Rat(-1)}, Rat(0)},  // -x >= 0
    };
    CHECK(lp_maximize({Rat(1)}, infeas).status == LpStatus::Infeasible);

    std::vector<LpConstraint> unb = {{{Rat(1)}, Rat(0)}};  // x >= 0
    CHECK(lp_maximize({Rat(1)}, unb).status == LpStatus::Unbounded);
}

TEST_CASE("lp: lct program for (x^2, y^3) on the orthant gives 5/6") {
    // max mu1+mu2  s.t.  2 mu1 <= 1, 3 mu2 <= 1, mu >= 0
    Mat a = {{Rat(2), Rat(0)}, {Rat(0), Rat(3)}};
    const LpResult res = simplex_standard(a, {Rat(1), Rat(1)}, {Rat(1), Rat(1)});
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.value == Rat(5, 6));
    REQUIRE(res.dual.size() == 2);
    // dual: min y1+y2 s.t. 2y1 >= 1, 3y2 >= 1
    CHECK(res.dual[0] == Rat(1, 2));
    CHECK(res.dual[1] == Rat(1, 3));
}

TEST_CASE("lp: random feasibility problems agree with witness checks") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> coef(-4, 4);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + static_cast<int>(trial % 3);
        std::vector<LpConstraint> cons;
        for (int i = 0; i < n + 3; ++i) {
            VecQ a(n);
            for (int j = 0; j < n; ++j) a[j] = coef(rng);
            cons.push_back({a, Rat(coef(rng))});
        }
        VecQ c(n);
        for (int j = 0; j < n; ++j) c[j] = coef(rng);
        const LpResult res = lp_maximize(c, cons);
        if (res.status == LpStatus::Optimal) {
            for (const auto& con : cons) CHECK(dot(con.normal, res.witness) >= con.offset);
            CHECK(dot(c, res.witness) == res.value);
        }
    }
}

TEST_CASE("dual cone: first orthant is self-dual") {
    const Cone c = Cone::from_rays(3, {vz({1, 0, 0}), vz({0, 1, 0}), vz({0, 0, 1})});
    const Cone d = dual_cone(c);
    CHECK(d.rays() == c.rays());
    CHECK(dual_cone(d).rays() == c.rays());
}

TEST_CASE("dual cone: rank-2 example") {
    const Cone c = Cone::from_rays(2, {vz({2, 1}), vz({1, 2})});
    const Cone d = dual_cone(c);
    const std::set<VecZ> expect = {vz({2, -1}), vz({-1, 2})};
    CHECK(std::set<VecZ>(d.rays().begin(), d.rays().end()) == expect);
}

TEST_CASE("dual cone: quadrilateral cone matches brute force and spec") {
    const std::vector<VecZ> rays = {vz({1, 0, 1}), vz({0, 1, 1}), vz({-1, -1, 1}),
                                    vz({1, 1, 1})};
    const Cone c = Cone::from_rays(3, rays);
    CHECK(c.rays().size() == 4);
    const Cone d = dual_cone(c);
    const std::set<VecZ> expect = {vz({-1, 0, 1}), vz({0, -1, 1}), vz({-1, 2, 1}),
                                   vz({2, -1, 1})};
    CHECK(std::set<VecZ>(d.rays().begin(), d.rays().end()) == expect);
    // brute-force double description oracle on the same instance
    const auto brute = brute_dual_rays(c.rays(), 3);
    CHECK(std::set<VecZ>(brute.begin(), brute.end()) == expect);
    // membership sampling: dual pairs nonnegatively with the primal
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coef(0, 5);
    for (int t = 0; t < 50; ++t) {
        VecQ p(3, Rat(0));
        for (const VecZ& r : c.rays()) {
            const int w = coef(rng);
            for (int j = 0; j < 3; ++j) p[j] += Rat(w) * Rat(r[j]);
        }
        for (const VecZ& y : d.rays()) CHECK(dot(y, p) >= 0);
    }
}

TEST_CASE("dual cone: degenerate inputs are rejected at construction") {
    CHECK_THROWS_AS(Cone::from_rays(2, {vz({1, 0})}), NotFullDimensional);
    CHECK_THROWS_AS(Cone::from_rays(2, {vz({1, 0}), vz({-1, 0}), vz({0, 1})}),
                    NotStronglyConvex);
    CHECK_THROWS_AS(Cone::from_rays(7, {vz({1, 0, 0, 0, 0, 0, 0})}), UnsupportedRank);
}

TEST_CASE("dual of dual is the identity on random cones") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> coord(-3, 3);
    int built = 0;
    for (int t = 0; t < 400 && built < 60; ++t) {
        const int n = 2 + (t % 3);
        std::vector<VecZ> rays;
        const int k = n + (t % 3);
        for (int i = 0; i < k; ++i) {
            VecZ r(n);
            for (int j = 0; j + 1 < n; ++j) r[j] = coord(rng);
            r[n - 1] = 1;  // height-1 rays give a strongly convex cone
            rays.push_back(std::move(r));
        }
        std::optional<Cone> c;
        try {
            c.emplace(Cone::from_rays(n, rays));
        } catch (const NotFullDimensional&) {
            continue;  // degenerate sample
        }
        ++built;
        const Cone dd = dual_cone(dual_cone(*c));
        CHECK(dd.rays() == c->rays());
        // membership both directions on the generators
        for (const VecZ& r : c->rays()) CHECK(dd.contains(to_vecq(r)));
        for (const VecZ& r : dd.rays()) CHECK(c->contains(to_vecq(r)));
    }
    CHECK(built >= 60);
}

TEST_CASE("cone: lazy facet computation is race-safe") {
    const Cone c = Cone::from_rays(3, {vz({1, 0, 1}), vz({0, 1, 1}), vz({-1, -1, 1}),
                                       vz({1, 1, 1})});
    std::vector<std::thread> workers;
    std::vector<std::vector<VecZ>> results(4);
    for (int i = 0; i < 4; ++i)
        workers.emplace_back([&, i] { results[i] = c.facet_normals(); });
    for (auto& w : workers) w.join();
    for (int i = 1; i < 4; ++i) CHECK(results[i] == results[0]);
}

TEST_CASE("truncate: rank-2 orthant at level 1 is the unit triangle") {
    const Cone c = Cone::from_rays(2, {vz({1, 0}), vz({0, 1})});
    const Polytope p = truncate(c, {Rat(1), Rat(1)}, Rat(1));
    const std::set<VecQ> expect = {vq({Rat(0), Rat(0)}), vq({Rat(1), Rat(0)}),
                                   vq({Rat(0), Rat(1)})};
    CHECK(std::set<VecQ>(p.vertices().begin(), p.vertices().end()) == expect);
    CHECK(volume(p) == Rat(1, 2));
}

TEST_CASE("truncate: simplex volume 1/(n! u1...un)") {
    const Cone c = Cone::from_rays(3, {vz({1, 0, 0}), vz({0, 1, 0}), vz({0, 0, 1})});
    const Polytope p = truncate(c, {Rat(1), Rat(2), Rat(4)}, Rat(1));
    CHECK(volume(p) == Rat(1, 48));
}

TEST_CASE("truncate: level 0 gives the single point 0") {
    const Cone c = Cone::from_rays(3, {vz({1, 0, 1}), vz({0, 1, 1}), vz({-1, -1, 1}),
                                       vz({1, 1, 1})});
    const Polytope p = truncate(c, {Rat(1, 7), Rat(1, 7), Rat(1)}, Rat(0));
    REQUIRE(p.vertices().size() == 1);
    CHECK(is_zero(p.vertices()[0]));
    CHECK(volume(p) == Rat(0));
}

TEST_CASE("truncate: boundary direction throws Unbounded") {
    const Cone c = Cone::from_rays(2, {vz({1, 0}), vz({0, 1})});
    CHECK_THROWS_AS(truncate(c, {Rat(1), Rat(0)}, Rat(1)), Unbounded);
}

TEST_CASE("truncation volume formula holds for 100 random u in ranks 2-4") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> numer(1, 9), denom(1, 4);
    for (int t = 0; t < 100; ++t) {
        const int n = 2 + (t % 3);
        std::vector<VecZ> rays;
        for (int j = 0; j < n; ++j) {
            VecZ e(n, Int(0));
            e[j] = 1;
            rays.push_back(std::move(e));
        }
        const Cone c = Cone::from_rays(n, rays);
        VecQ u(n);
        Rat prod = 1;
        for (int j = 0; j < n; ++j) {
            u[j] = Rat(numer(rng), denom(rng));
            prod *= u[j];
        }
        Int fact = 1;
        for (int i = 2; i <= n; ++i) fact *= i;
        CHECK(volume(truncate(c, u, Rat(1))) == Rat(1) / (Rat(fact) * prod));
    }
}

TEST_CASE("volume: unit cube and axis triangle") {
    std::vector<VecQ> cube;
    for (int m = 0; m < 8; ++m)
        cube.push_back(vq({Rat(m & 1), Rat((m >> 1) & 1), Rat((m >> 2) & 1)}));
    CHECK(volume_of_points(cube, 3) == Rat(1));

    CHECK(volume_of_points({vq({Rat(0), Rat(0)}), vq({Rat(2), Rat(0)}), vq({Rat(0), Rat(3)})},
                           2) == Rat(3));
    // lower-dimensional: zero volume
    CHECK(volume_of_points({vq({Rat(0), Rat(0)}), vq({Rat(2), Rat(2)})}, 2) == Rat(0));
}

TEST_CASE("volume is invariant under shuffling the vertex list") {
    std::mt19937_64 rng(17);
    std::vector<VecQ> pts;
    std::uniform_int_distribution<int> coord(-4, 4), den(1, 3);
    for (int i = 0; i < 9; ++i)
        pts.push_back(vq({Rat(coord(rng), den(rng)), Rat(coord(rng), den(rng)),
                          Rat(coord(rng), den(rng))}));
    const Rat reference = volume_of_points(pts, 3);
    for (int t = 0; t < 10; ++t) {
        std::shuffle(pts.begin(), pts.end(), rng);
        CHECK(volume_of_points(pts, 3) == reference);
    }
}

TEST_CASE("volume matches Monte-Carlo oracle on the dual quadrilateral cone") {
    const Cone c = Cone::from_rays(3, {vz({1, 0, 1}), vz({0, 1, 1}), vz({-1, -1, 1}),
                                       vz({1, 1, 1})});
    const Cone d = dual_cone(c);
    std::mt19937_64 rng(29);
    for (const Rat a : {Rat(1, 5), Rat(1, 3), Rat(2, 5)}) {
        const Polytope p = truncate(d, {a, a, Rat(1)}, Rat(1));
        const double exact = to_double(volume(p));
        const double estimate = mc_volume(p, rng, 2000000);
        CHECK(std::abs(estimate - exact) <= 0.01 * exact);
    }
}

TEST_CASE("polytope: H and V representations agree") {
    const Cone c = Cone::from_rays(3, {vz({1, 0, 1}), vz({0, 1, 1}), vz({-1, -1, 1}),
                                       vz({1, 1, 1})});
    const Cone d = dual_cone(c);
    const Polytope p = truncate(d, {Rat(1, 4), Rat(1, 3), Rat(1)}, Rat(1));
    const Polytope q = Polytope::from_halfspaces(3, p.halfspaces());
    CHECK(std::set<VecQ>(q.vertices().begin(), q.vertices().end()) ==
          std::set<VecQ>(p.vertices().begin(), p.vertices().end()));
    CHECK(volume(q) == volume(p));
    // every vertex is tight on at least rank many halfspaces
    for (const VecQ& v : q.vertices()) {
        int tight = 0;
        for (const Halfspace& h : q.halfspaces())
            if (dot(h.normal, v) == h.offset) ++tight;
        CHECK(tight >= 3);
    }
    CHECK_THROWS_AS(
        Polytope::from_halfspaces(2, {{{Rat(1), Rat(0)}, Rat(0)}, {{Rat(0), Rat(1)}, Rat(0)}}),
        Unbounded);
}

TEST_CASE("lattice counts: hand count, binomial closed form, level 0") {
    const Cone orthant2 = Cone::from_rays(2, {vz({1, 0}), vz({0, 1})});
    CHECK(count_lattice_points_below(orthant2, {Rat(1), Rat(1)}, Rat(3)) == 6);
    CHECK(count_lattice_points_below(orthant2, {Rat(1), Rat(1)}, Rat(0)) == 0);

    // binomial(m+n-1, n) for the orthant with u = (1,...,1), verified m,n <= 6
    for (int n = 2; n <= 6; ++n) {
        std::vector<VecZ> rays;
        for (int j = 0; j < n; ++j) {
            VecZ e(n, Int(0));
            e[j] = 1;
            rays.push_back(std::move(e));
        }
        const Cone c = Cone::from_rays(n, rays);
        for (int m = 1; m <= 6; ++m) {
            Int expect = 1;
            for (int i = 1; i <= n; ++i) expect = expect * (m + n - i) / i;
            CHECK(count_lattice_points_below(c, VecQ(n, Rat(1)), Rat(m)) == expect);
        }
    }
}

TEST_CASE("pulling triangulation is a genuine decomposition") {
    // simplex volumes sum to the hull volume and every simplex is full-dim
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> coord(0, 5);
    for (int t = 0; t < 20; ++t) {
        const int n = 2 + (t % 2);
        std::vector<VecQ> pts;
        for (int i = 0; i < 8; ++i) {
            VecQ p(n);
            for (int j = 0; j < n; ++j) p[j] = Rat(coord(rng));
            pts.push_back(std::move(p));
        }
        pts = nvol::detail::dedupe_points(pts);
        const auto ac = nvol::detail::affine_coords(pts);
        if (ac.dim < n) continue;
        const auto tris = pulling_triangulation(pts);
        Rat total = 0;
        for (const auto& tri : tris) {
            REQUIRE(tri.size() == static_cast<std::size_t>(n) + 1);
            Mat m(n, VecQ(n));
            for (int r = 0; r < n; ++r)
                for (int j = 0; j < n; ++j) m[r][j] = pts[tri[r + 1]][j] - pts[tri[0]][j];
            Rat d = det(m);
            CHECK(d != 0);
            total += (d < 0 ? -d : d);
        }
        Int fact = 1;
        for (int i = 2; i <= n; ++i) fact *= i;
        CHECK(total / Rat(fact) == volume_of_points(pts, n));
    }
}
