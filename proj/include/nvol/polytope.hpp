#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "nvol/cone.hpp"
#include "nvol/errors.hpp"
#include "nvol/linalg.hpp"
#include "nvol/rational.hpp"

namespace nvol {

/** Closed halfspace ⟨normal, x⟩ >= offset. */
struct Halfspace {
    VecQ normal;
    Rat offset;
};

inline Int rat_floor(const Rat& q) {
    Int n = num(q), d = den(q);
    Int f = n / d;
    if (n % d != 0 && n < 0) --f;
    return f;
}

inline Int rat_ceil(const Rat& q) { return -rat_floor(-q); }

namespace detail {

struct AffineCoords {
    int dim = 0;       // affine dimension of the point set
    VecQ origin;       // first point
    Mat basis;         // dim rows, ambient length: direction basis
    Mat coords;        // per point, its coordinates in the basis (length dim)
};

/** Exact affine coordinates of a point set; a linear iso of its affine hull. */
inline AffineCoords affine_coords(const std::vector<VecQ>& pts) {
    AffineCoords ac;
    ac.origin = pts.at(0);
    const std::size_t n = ac.origin.size();
    for (const VecQ& p : pts) {
        VecQ d(n);
        for (std::size_t j = 0; j < n; ++j) d[j] = p[j] - ac.origin[j];
        Mat trial = ac.basis;
        trial.push_back(d);
        if (rank(trial) == static_cast<int>(trial.size())) ac.basis.push_back(std::move(d));
    }
    ac.dim = static_cast<int>(ac.basis.size());
    // transpose of the basis, for coordinate solves
    Mat bt(n, VecQ(ac.basis.size()));
    for (std::size_t r = 0; r < ac.basis.size(); ++r)
        for (std::size_t j = 0; j < n; ++j) bt[j][r] = ac.basis[r][j];
    for (const VecQ& p : pts) {
        VecQ rhs(n);
        for (std::size_t j = 0; j < n; ++j) rhs[j] = p[j] - ac.origin[j];
        const auto t = solve_system(bt, rhs);
        ac.coords.push_back(*t);  // consistent by construction of the basis
    }
    return ac;
}

/**
 * Facets of the convex hull of a full-dimensional point set, via the rays of
 * the dual of the homogenization cone over {(p, 1)}.
 */
inline std::vector<Halfspace> facet_enum_fulldim(const std::vector<VecQ>& pts) {
    const std::size_t d = pts.at(0).size();
    std::vector<VecZ> lifted;
    lifted.reserve(pts.size());
    for (const VecQ& p : pts) {
        VecQ q(p);
        q.push_back(Rat(1));
        lifted.push_back(clear_denominators(q));
    }
    const std::vector<VecZ> dual_rays = dd_extreme_rays(lifted, static_cast<int>(d) + 1);
    std::vector<Halfspace> out;
    for (const VecZ& r : dual_rays) {
        VecQ normal(d);
        bool zero = true;
        for (std::size_t j = 0; j < d; ++j) {
            normal[j] = Rat(r[j]);
            if (r[j] != 0) zero = false;
        }
        if (zero) continue;  // the trivial supporting halfspace at infinity
        out.push_back(Halfspace{std::move(normal), Rat(-r[d])});
    }
    return out;
}

/**
 * Pulling triangulation of a point set (given by indices into pts): cone the
 * pulling vertex over the recursively triangulated facets that miss it.
 * Canonical for a fixed point set; apex is the lexicographically least point
 * unless one is forced (used for fans over cone cross-sections).
 */
inline void pulling_triangulation_rec(const std::vector<VecQ>& pts,
                                      const std::vector<int>& idx, int forced_apex,
                                      std::vector<std::vector<int>>& out) {
    std::vector<VecQ> sub;
    sub.reserve(idx.size());
    for (int i : idx) sub.push_back(pts[i]);
    const AffineCoords ac = affine_coords(sub);
    if (idx.size() == static_cast<std::size_t>(ac.dim) + 1) {
        out.push_back(idx);
        return;
    }
    int apex = forced_apex;
    if (apex < 0) {
        apex = idx[0];
        for (int i : idx)
            if (lex_less(pts[i], pts[apex])) apex = i;
    }
    const std::vector<Halfspace> facets = facet_enum_fulldim(ac.coords);
    for (const Halfspace& f : facets) {
        std::vector<int> face;
        bool apex_on_face = false;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (dot(f.normal, ac.coords[i]) == f.offset) {
                face.push_back(idx[i]);
                if (idx[i] == apex) apex_on_face = true;
            }
        }
        if (apex_on_face) continue;
        std::vector<std::vector<int>> facet_tris;
        pulling_triangulation_rec(pts, face, -1, facet_tris);
        for (std::vector<int>& t : facet_tris) {
            t.insert(t.begin(), apex);
            out.push_back(std::move(t));
        }
    }
}

inline std::vector<VecQ> dedupe_points(std::vector<VecQ> pts) {
    std::sort(pts.begin(), pts.end(), [](const VecQ& a, const VecQ& b) { return lex_less(a, b); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

}  // namespace detail

/**
 * Pulling triangulation of conv(pts); returns index tuples into the deduped
 * input order. Points must affinely span dimension >= 0; interior points are
 * allowed and simply never picked as simplex vertices unless pulled.
 */
inline std::vector<std::vector<int>> pulling_triangulation(const std::vector<VecQ>& pts,
                                                           int forced_apex = -1) {
    std::vector<int> idx(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) idx[i] = static_cast<int>(i);
    std::vector<std::vector<int>> out;
    detail::pulling_triangulation_rec(pts, idx, forced_apex, out);
    return out;
}

/** Exact Euclidean volume of conv(pts) in rank-dimensional ambient space. */
inline Rat volume_of_points(const std::vector<VecQ>& points, int rank) {
    std::vector<VecQ> pts = detail::dedupe_points(points);
    if (pts.empty()) return Rat(0);
    const detail::AffineCoords ac = detail::affine_coords(pts);
    if (ac.dim < rank) return Rat(0);
    const auto tris = pulling_triangulation(pts);
    Rat total = 0;
    Int factorial = 1;
    for (int i = 2; i <= rank; ++i) factorial *= i;
    for (const std::vector<int>& t : tris) {
        Mat m(rank, VecQ(rank));
        for (int r = 0; r < rank; ++r)
            for (int j = 0; j < rank; ++j) m[r][j] = pts[t[r + 1]][j] - pts[t[0]][j];
        Rat d = det(m);
        if (d < 0) d = -d;
        total += d;
    }
    return total / Rat(factorial);
}

/**
 * Bounded rational polytope carrying both representations. Immutable; the two
 * representations describe the same set by construction.
 */
class Polytope {
public:
    static Polytope from_vertices(int rank, const std::vector<VecQ>& points) {
        Polytope p;
        p.rank_ = rank;
        std::vector<VecQ> pts = detail::dedupe_points(points);
        if (pts.empty()) return p;
        const detail::AffineCoords ac = detail::affine_coords(pts);
        if (ac.dim == 0) {
            p.vertices_ = {pts[0]};
            for (int j = 0; j < rank; ++j) {
                VecQ e(rank, Rat(0));
                e[j] = 1;
                const Rat c = pts[0][j];
                p.halfspaces_.push_back({e, c});
                for (Rat& x : e) x = -x;
                p.halfspaces_.push_back({e, -c});
            }
            return p;
        }
        std::vector<Halfspace> local = detail::facet_enum_fulldim(
            ac.dim == rank ? pts : ac.coords);
        if (ac.dim == rank) {
            p.halfspaces_ = local;
        } else {
            // lift facet inequalities through the affine chart, add hull equations
            Mat basis_rows = ac.basis;  // dim x rank
            for (const Halfspace& f : local) {
                const auto lifted = solve_system(basis_rows, f.normal);
                VecQ g = *lifted;
                const Rat off = f.offset + dot(g, ac.origin);
                p.halfspaces_.push_back({std::move(g), off});
            }
            for (const VecQ& h : null_space(basis_rows)) {
                const Rat c = dot(h, ac.origin);
                p.halfspaces_.push_back({h, c});
                VecQ neg(h);
                for (Rat& x : neg) x = -x;
                p.halfspaces_.push_back({std::move(neg), -c});
            }
        }
        // extreme points: tight facet normals must span the affine dimension
        for (std::size_t i = 0; i < pts.size(); ++i) {
            Mat tight;
            for (const Halfspace& f : local) {
                const VecQ& probe = (ac.dim == rank) ? pts[i] : ac.coords[i];
                if (dot(f.normal, probe) == f.offset) tight.push_back(f.normal);
            }
            if (nvol::rank(tight) == ac.dim) p.vertices_.push_back(pts[i]);
        }
        return p;
    }

    /** Vertex enumeration; throws Unbounded when the region has a recession ray. */
    static Polytope from_halfspaces(int rank, const std::vector<Halfspace>& hs) {
        std::vector<VecZ> lifted;
        for (const Halfspace& h : hs) {
            VecQ v(h.normal);
            v.push_back(-h.offset);
            lifted.push_back(clear_denominators(v));
        }
        {
            VecZ t(rank + 1, Int(0));
            t[rank] = 1;
            lifted.push_back(std::move(t));
        }
        std::vector<VecZ> rays;
        try {
            rays = detail::dd_extreme_rays(lifted, rank + 1);
        } catch (const NotFullDimensional&) {
            throw Unbounded("halfspace intersection contains a line (or is empty)");
        }
        std::vector<VecQ> verts;
        for (const VecZ& r : rays) {
            if (r[rank] == 0) throw Unbounded();  // recession direction
            VecQ v(rank);
            for (int j = 0; j < rank; ++j) v[j] = Rat(r[j], r[rank]);
            verts.push_back(std::move(v));
        }
        return from_vertices(rank, verts);
    }

    /**
     * Trusted construction from a known vertex set and matching halfspaces;
     * used where both are available in closed form (cone truncations).
     */
    static Polytope assemble(int rank, std::vector<VecQ> vertices,
                             std::vector<Halfspace> halfspaces) {
        Polytope p;
        p.rank_ = rank;
        p.vertices_ = std::move(vertices);
        p.halfspaces_ = std::move(halfspaces);
        std::sort(p.vertices_.begin(), p.vertices_.end(),
                  [](const VecQ& a, const VecQ& b) { return lex_less(a, b); });
        return p;
    }

    bool empty() const { return vertices_.empty(); }
    int rank() const { return rank_; }
    const std::vector<VecQ>& vertices() const { return vertices_; }
    const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }

    bool contains(const VecQ& p) const {
        for (const Halfspace& h : halfspaces_)
            if (dot(h.normal, p) < h.offset) return false;
        return true;
    }

    Rat volume() const {
        if (vertices_.empty()) return Rat(0);
        return volume_of_points(vertices_, rank_);
    }

private:
    int rank_ = 0;
    std::vector<VecQ> vertices_;
    std::vector<Halfspace> halfspaces_;
};

/** Exact Euclidean volume of a polytope (0 for lower-dimensional ones). */
inline Rat volume(const Polytope& p) { return p.volume(); }

/**
 * Bounded truncation {x in C : ⟨u, x⟩ <= level}. Requires u strictly positive
 * on every ray of C; throws Unbounded otherwise. Level 0 gives the point {0}.
 */
inline Polytope truncate(const Cone& c, const VecQ& u, const Rat& level) {
    if (static_cast<int>(u.size()) != c.rank()) throw Error("vector length mismatch");
    std::vector<Rat> ray_values;
    for (const VecZ& r : c.rays()) {
        const Rat d = dot(u, r);
        if (d <= 0) throw Unbounded("truncation direction vanishes on a ray");
        ray_values.push_back(d);
    }
    std::vector<Halfspace> hs;
    for (const VecZ& f : c.facet_normals()) hs.push_back({to_vecq(f), Rat(0)});
    {
        VecQ mu(u);
        for (Rat& x : mu) x = -x;
        hs.push_back({std::move(mu), -level});
    }
    Polytope out;
    if (level < 0) return out;
    std::vector<VecQ> verts;
    verts.push_back(VecQ(c.rank(), Rat(0)));
    if (level > 0) {
        for (std::size_t i = 0; i < c.rays().size(); ++i) {
            VecQ v(c.rank());
            for (int j = 0; j < c.rank(); ++j) v[j] = Rat(c.rays()[i][j]) * level / ray_values[i];
            verts.push_back(std::move(v));
        }
    }
    return Polytope::assemble(c.rank(), std::move(verts), std::move(hs));
}

namespace detail {

/** Integer form of a halfspace: ⟨normal, x⟩ >= offset (or > when strict). */
struct ZHalfspace {
    VecZ normal;
    Int offset;
    bool strict = false;
};

inline ZHalfspace to_zhalfspace(const Halfspace& h, bool strict) {
    VecQ v(h.normal);
    v.push_back(h.offset);
    Int l = 1;
    for (const Rat& q : v) l = boost::multiprecision::lcm(l, den(q));
    ZHalfspace z;
    z.normal.resize(h.normal.size());
    for (std::size_t j = 0; j < h.normal.size(); ++j)
        z.normal[j] = num(h.normal[j]) * (l / den(h.normal[j]));
    z.offset = num(h.offset) * (l / den(h.offset));
    z.strict = strict;
    return z;
}

}  // namespace detail

/**
 * All lattice points satisfying every closed and strict halfspace. The closed
 * system must be bounded (vertex-enumerated to get the search box).
 */
inline std::vector<VecZ> enumerate_lattice_points(int rank,
                                                  const std::vector<Halfspace>& closed,
                                                  const std::vector<Halfspace>& strict = {}) {
    std::vector<Halfspace> all(closed);
    all.insert(all.end(), strict.begin(), strict.end());
    const Polytope box_poly = Polytope::from_halfspaces(rank, all);
    std::vector<VecZ> out;
    if (box_poly.empty()) return out;
    std::vector<long long> lo(rank), hi(rank);
    for (int j = 0; j < rank; ++j) {
        Rat mn = box_poly.vertices()[0][j], mx = mn;
        for (const VecQ& v : box_poly.vertices()) {
            if (v[j] < mn) mn = v[j];
            if (v[j] > mx) mx = v[j];
        }
        const Int l = rat_ceil(mn), h = rat_floor(mx);
        if (l > h) return out;
        if (abs(l) > Int(1) << 40 || abs(h) > Int(1) << 40)
            throw Error("lattice enumeration box too large");
        lo[j] = l.convert_to<long long>();
        hi[j] = h.convert_to<long long>();
    }
    std::vector<detail::ZHalfspace> zs;
    for (const Halfspace& h : closed) zs.push_back(detail::to_zhalfspace(h, false));
    for (const Halfspace& h : strict) zs.push_back(detail::to_zhalfspace(h, true));
    std::vector<long long> x(lo);
    for (;;) {
        bool ok = true;
        for (const detail::ZHalfspace& z : zs) {
            Int s = 0;
            for (int j = 0; j < rank; ++j) s += z.normal[j] * x[j];
            if (z.strict ? !(s > z.offset) : !(s >= z.offset)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            VecZ pt(rank);
            for (int j = 0; j < rank; ++j) pt[j] = x[j];
            out.push_back(std::move(pt));
        }
        int j = rank - 1;
        while (j >= 0 && x[j] == hi[j]) {
            x[j] = lo[j];
            --j;
        }
        if (j < 0) break;
        ++x[j];
    }
    std::sort(out.begin(), out.end(), [](const VecZ& a, const VecZ& b) { return lex_less(a, b); });
    return out;
}

/**
 * Number of lattice points of C with ⟨u, x⟩ < level (strict). For a toric
 * valuation v_u this is the colength of its level-`level` valuation ideal.
 */
inline Int count_lattice_points_below(const Cone& c, const VecQ& u, const Rat& level) {
    for (const VecZ& r : c.rays())
        if (dot(u, r) <= 0) throw Unbounded("counting direction vanishes on a ray");
    if (level <= 0) return Int(0);
    std::vector<Halfspace> closed;
    for (const VecZ& f : c.facet_normals()) closed.push_back({to_vecq(f), Rat(0)});
    std::vector<Halfspace> strict;
    {
        VecQ mu(u);
        for (Rat& x : mu) x = -x;
        strict.push_back({std::move(mu), -level});  // -⟨u,x⟩ > -level
    }
    return Int(enumerate_lattice_points(c.rank(), closed, strict).size());
}

}  // namespace nvol
