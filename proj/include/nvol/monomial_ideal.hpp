#pragma once

#include <algorithm>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <vector>

#include "nvol/errors.hpp"
#include "nvol/germ.hpp"
#include "nvol/lp.hpp"
#include "nvol/polytope.hpp"
#include "nvol/rational.hpp"

namespace nvol {

/**
 * Monomial ideal in k[sigma_dual ∩ M], stored by its antichain of minimal
 * exponent vectors. The Newton polyhedron conv(generators) + sigma_dual backs
 * the log canonical threshold, multiplicity and integral closure. Immutable.
 */
class MonomialIdeal {
public:
    MonomialIdeal(GermPtr germ, const std::vector<VecZ>& generators)
        : germ_(std::move(germ)), newton_(std::make_shared<NewtonCache>()) {
        if (!germ_) throw Error("null germ");
        for (const VecZ& g : generators) {
            if (static_cast<int>(g.size()) != germ_->rank())
                throw InvalidGenerator("generator length does not match rank");
            if (!germ_->sigma_dual().contains(to_vecq(g)))
                throw InvalidGenerator("generator outside the dual cone");
        }
        gens_ = antichain_reduce(*germ_, generators);
    }

    const GermPtr& germ() const { return germ_; }
    const std::vector<VecZ>& generators() const { return gens_; }
    bool is_empty() const { return gens_.empty(); }
    bool is_unit() const { return gens_.size() == 1 && is_zero(gens_[0]); }

    /** v_u of the ideal: min over generators of ⟨u, m⟩. */
    Rat value_along(const VecQ& u) const {
        if (gens_.empty()) throw EmptyIdeal();
        Rat best = dot(u, gens_[0]);
        for (std::size_t i = 1; i < gens_.size(); ++i) {
            const Rat v = dot(u, gens_[i]);
            if (v < best) best = v;
        }
        return best;
    }

    /** Semigroup divisibility: does this ideal contain chi^m? */
    bool contains_monomial(const VecZ& m) const {
        for (const VecZ& g : gens_) {
            VecQ diff(m.size());
            for (std::size_t j = 0; j < m.size(); ++j) diff[j] = Rat(m[j] - g[j]);
            if (germ_->sigma_dual().contains(diff)) return true;
        }
        return false;
    }

    /**
     * Facets of the Newton polyhedron conv(generators) + sigma_dual, via the
     * homogenization cone over {(g,1)} u {(r,0)}. Normals lie in sigma and the
     * offset of each facet is the support value h(normal).
     */
    const std::vector<Halfspace>& newton_halfspaces() const {
        std::call_once(newton_->once, [this] {
            if (gens_.empty()) throw EmptyIdeal();
            const int n = germ_->rank();
            std::vector<VecZ> lifted;
            for (const VecZ& g : gens_) {
                VecZ v(g);
                v.push_back(Int(1));
                lifted.push_back(std::move(v));
            }
            for (const VecZ& r : germ_->sigma_dual().rays()) {
                VecZ v(r);
                v.push_back(Int(0));
                lifted.push_back(std::move(v));
            }
            for (const VecZ& ray : detail::dd_extreme_rays(lifted, n + 1)) {
                VecQ normal(n);
                bool zero = true;
                for (int j = 0; j < n; ++j) {
                    normal[j] = Rat(ray[j]);
                    if (ray[j] != 0) zero = false;
                }
                if (zero) continue;
                newton_->halfspaces.push_back({std::move(normal), Rat(-ray[n])});
            }
        });
        return newton_->halfspaces;
    }

    /** Membership in the Newton polyhedron (integral-closure membership for lattice points). */
    bool newton_contains(const VecQ& p) const {
        for (const Halfspace& h : newton_halfspaces())
            if (dot(h.normal, p) < h.offset) return false;
        return true;
    }

    /**
     * Primary to the maximal ideal iff the complement of the Newton
     * polyhedron in sigma_dual is bounded, i.e. every ray r of sigma_dual
     * eventually enters the polyhedron: no facet with positive offset may
     * vanish on r.
     */
    bool is_primary() const {
        if (gens_.empty()) return false;
        if (is_unit()) return false;
        for (const VecZ& r : germ_->sigma_dual().rays())
            for (const Halfspace& h : newton_halfspaces())
                if (h.offset > 0 && dot(h.normal, r) == 0) return false;
        return true;
    }

    struct LctWitness {
        Rat lct;
        VecQ computing_valuation;  // interior u with A(v_u)/v_u(a) = lct
    };

    /**
     * Log canonical threshold max{t : w in t * Newt(a)} by the exact LP
     *     max sum(mu)  s.t.  mu >= 0,  w - sum(mu_i m_i) in sigma_dual.
     * Substituting mu_i = t lambda_i with lambda a convex combination shows
     * the optimum equals the largest t with w in t * Newt(a).
     * Throws UnitIdeal for the unit ideal (lct = +infinity) and EmptyIdeal.
     */
    Rat lct() const { return lct_solution().value; }

    std::optional<Rat> lct_extended() const {
        if (is_unit()) return std::nullopt;  // lct(O_X) = +infinity
        return lct();
    }

    /**
     * An interior toric valuation computing the lct: dual multipliers y of the
     * lct LP give u = sum(y_j u_j) with v_u(a) = 1 and ⟨u,w⟩ = lct; a second
     * LP pushes u into the interior of sigma while staying optimal. For
     * primary ideals the interior optimum is guaranteed (the ratio is
     * infinite on the boundary).
     */
    LctWitness lct_witness() const {
        const LpResult base = lct_solution();
        const int n = germ_->rank();
        // variables (u, eps): maximize eps subject to
        //   ⟨u, w⟩ = lct, v_u(a) >= 1, u in sigma with facet slack >= eps
        VecQ objective(n + 1, Rat(0));
        objective[n] = 1;
        std::vector<LpConstraint> cons;
        {
            VecQ wrow(germ_->gorenstein_covector());
            wrow.push_back(Rat(0));
            cons.push_back({wrow, base.value});
            for (Rat& x : wrow) x = -x;
            cons.push_back({wrow, -base.value});
        }
        for (const VecZ& g : gens_) {
            VecQ row(n + 1, Rat(0));
            for (int j = 0; j < n; ++j) row[j] = Rat(g[j]);
            cons.push_back({std::move(row), Rat(1)});
        }
        for (const VecZ& f : germ_->sigma_dual().rays()) {  // facet normals of sigma
            VecQ row(n + 1);
            for (int j = 0; j < n; ++j) row[j] = Rat(f[j]);
            row[n] = -1;
            cons.push_back({std::move(row), Rat(0)});
        }
        {
            VecQ row(n + 1, Rat(0));
            row[n] = 1;
            cons.push_back({std::move(row), Rat(0)});  // eps >= 0
        }
        const LpResult refined = lp_maximize(objective, cons);
        if (refined.status != LpStatus::Optimal)
            throw Error("lct witness refinement failed");
        LctWitness out;
        out.lct = base.value;
        out.computing_valuation.assign(refined.witness.begin(), refined.witness.end() - 1);
        if (refined.value <= 0 || !germ_->contains_interior(out.computing_valuation))
            throw Error("no interior valuation computes the lct");
        return out;
    }

    /**
     * Hilbert-Samuel multiplicity n! * Vol(sigma_dual \ Newt(a)). The
     * unbounded difference is reduced to two bounded volumes by cutting with
     * {⟨u0, x⟩ <= T}, u0 the sum of the primitive rays of sigma. Because the
     * complement is star-shaped under scaling, equal values at T and 2T
     * certify that the cut lies beyond the complement; T escalates until the
     * two agree.
     */
    Rat multiplicity() const {
        if (!is_primary()) throw NotPrimary();
        Rat t = initial_threshold();
        Rat prev = covolume_at(t);
        for (int step = 0; step < 32; ++step) {
            const Rat next = covolume_at(2 * t);
            if (next == prev) {
                Int fact = 1;
                for (int i = 2; i <= germ_->rank(); ++i) fact *= i;
                return Rat(fact) * prev;
            }
            prev = next;
            t *= 2;
        }
        throw Error("covolume failed to stabilize");
    }

    /** Truncated covolume Vol((sigma_dual \ Newt(a)) ∩ {⟨u0,x⟩ <= T}); test hook. */
    Rat covolume_at(const Rat& threshold) const {
        const VecQ u0 = germ_->ray_barycenter();
        const Rat whole = volume(truncate(germ_->sigma_dual(), u0, threshold));
        std::vector<Halfspace> hs = newton_halfspaces();
        VecQ mu(u0);
        for (Rat& x : mu) x = -x;
        hs.push_back({std::move(mu), -threshold});
        const Rat inner = volume(Polytope::from_halfspaces(germ_->rank(), hs));
        return whole - inner;
    }

    Rat initial_threshold() const {
        const VecQ u0 = germ_->ray_barycenter();
        Rat mx = 0;
        for (const VecZ& g : gens_) {
            const Rat v = dot(u0, g);
            if (v > mx) mx = v;
        }
        return Rat(1) + Rat(germ_->rank()) * mx;
    }

    /**
     * Integral closure: the antichain of lattice points of the Newton
     * polyhedron. Minimal points x satisfy ⟨u0, x⟩ <= max_g ⟨u0, g⟩ +
     * n * max_r ⟨u0, r⟩ over the primitive rays r of sigma_dual: any deeper
     * point has a ray coefficient >= 1 and peels to a smaller ideal member.
     */
    MonomialIdeal integral_closure() const {
        if (gens_.empty()) throw EmptyIdeal();
        const int n = germ_->rank();
        const VecQ u0 = germ_->ray_barycenter();
        Rat bound = 0;
        for (const VecZ& g : gens_) bound = std::max(bound, dot(u0, g));
        Rat raymax = 0;
        for (const VecZ& r : germ_->sigma_dual().rays())
            raymax = std::max(raymax, dot(u0, r));
        bound += Rat(n) * raymax;
        std::vector<Halfspace> closed = newton_halfspaces();
        VecQ mu(u0);
        for (Rat& x : mu) x = -x;
        closed.push_back({std::move(mu), -bound});
        return MonomialIdeal(germ_, enumerate_lattice_points(n, closed));
    }

    bool operator==(const MonomialIdeal& o) const {
        return *germ_ == *o.germ_ && gens_ == o.gens_;
    }

private:
    LpResult lct_solution() const {
        if (gens_.empty()) throw EmptyIdeal();
        if (is_unit()) throw UnitIdeal();
        const auto& rays = germ_->sigma().rays();
        const VecQ& w = germ_->gorenstein_covector();
        Mat a(rays.size(), VecQ(gens_.size()));
        VecQ b(rays.size());
        for (std::size_t i = 0; i < rays.size(); ++i) {
            for (std::size_t k = 0; k < gens_.size(); ++k) a[i][k] = dot(rays[i], to_vecq(gens_[k]));
            b[i] = dot(rays[i], w);  // = 1 on primitive rays
        }
        const LpResult res = simplex_standard(a, b, VecQ(gens_.size(), Rat(1)));
        if (res.status != LpStatus::Optimal)
            throw Error("lct program did not reach an optimum");
        return res;
    }

    static std::vector<VecZ> antichain_reduce(const ToricGerm& germ,
                                              std::vector<VecZ> gens) {
        std::sort(gens.begin(), gens.end(),
                  [](const VecZ& a, const VecZ& b) { return lex_less(a, b); });
        gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
        // any divisor has a strictly smaller value against an interior
        // covector, so scanning in that order only ever tests kept elements
        const VecQ u0 = germ.ray_barycenter();
        std::stable_sort(gens.begin(), gens.end(), [&](const VecZ& a, const VecZ& b) {
            return dot(u0, a) < dot(u0, b);
        });
        const auto& facets = germ.sigma().rays();  // facet normals of sigma_dual
        std::vector<VecZ> kept;
        for (const VecZ& g : gens) {
            bool divisible = false;
            for (const VecZ& k : kept) {
                bool inside = true;
                for (const VecZ& f : facets) {
                    Int s = 0;
                    for (std::size_t t = 0; t < g.size(); ++t) s += f[t] * (g[t] - k[t]);
                    if (s < 0) {
                        inside = false;
                        break;
                    }
                }
                if (inside) {
                    divisible = true;
                    break;
                }
            }
            if (!divisible) kept.push_back(g);
        }
        std::sort(kept.begin(), kept.end(),
                  [](const VecZ& a, const VecZ& b) { return lex_less(a, b); });
        return kept;
    }

    struct NewtonCache {
        std::once_flag once;
        std::vector<Halfspace> halfspaces;
    };

    GermPtr germ_;
    std::vector<VecZ> gens_;
    std::shared_ptr<NewtonCache> newton_;
};

/** Exponent-set Minkowski sum, antichain-reduced. */
inline MonomialIdeal product(const MonomialIdeal& a, const MonomialIdeal& b) {
    require_same_germ(a.germ(), b.germ());
    if (a.is_empty() || b.is_empty()) throw EmptyIdeal();
    std::vector<VecZ> sums;
    for (const VecZ& x : a.generators())
        for (const VecZ& y : b.generators()) {
            VecZ s(x.size());
            for (std::size_t j = 0; j < x.size(); ++j) s[j] = x[j] + y[j];
            sums.push_back(std::move(s));
        }
    return MonomialIdeal(a.germ(), sums);
}

inline MonomialIdeal power(const MonomialIdeal& a, int m) {
    if (m <= 0) throw Error("power requires a positive exponent");
    MonomialIdeal out = a;
    for (int i = 1; i < m; ++i) out = product(out, a);
    return out;
}

/** Generator union, antichain-reduced. */
inline MonomialIdeal sum(const MonomialIdeal& a, const MonomialIdeal& b) {
    require_same_germ(a.germ(), b.germ());
    std::vector<VecZ> gens(a.generators());
    gens.insert(gens.end(), b.generators().begin(), b.generators().end());
    return MonomialIdeal(a.germ(), gens);
}

/** contains(a, b) iff b is a subideal of a (every generator of b divisible in a). */
inline bool contains(const MonomialIdeal& a, const MonomialIdeal& b) {
    require_same_germ(a.germ(), b.germ());
    for (const VecZ& g : b.generators())
        if (!a.contains_monomial(g)) return false;
    return true;
}

}  // namespace nvol
