#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <set>
#include <vector>

#include "nvol/errors.hpp"
#include "nvol/linalg.hpp"
#include "nvol/lp.hpp"
#include "nvol/rational.hpp"

namespace nvol {

namespace detail {

/** Small bitset over constraint indices, used for double-description tight sets. */
struct TightSet {
    std::vector<std::uint64_t> words;

    explicit TightSet(std::size_t n = 0) : words((n + 63) / 64, 0) {}
    void set(std::size_t i) { words[i >> 6] |= std::uint64_t(1) << (i & 63); }

    bool subset_of(const TightSet& o) const {
        for (std::size_t i = 0; i < words.size(); ++i)
            if (words[i] & ~o.words[i]) return false;
        return true;
    }

    static TightSet intersect(const TightSet& a, const TightSet& b) {
        TightSet out;
        out.words.resize(a.words.size());
        for (std::size_t i = 0; i < a.words.size(); ++i)
            out.words[i] = a.words[i] & b.words[i];
        return out;
    }
};

struct DDRay {
    VecZ v;
    TightSet tight;
};

/**
 * Double description: extreme rays of K = {x : ⟨a, x⟩ >= 0 for all a in normals}.
 *
 * Requires the normals to span the ambient space (K pointed); throws
 * NotFullDimensional otherwise. K itself may be lower-dimensional or {0}.
 * Normals are inserted in lexicographic order after a spanning seed set,
 * so the computation is deterministic. Exact arithmetic throughout.
 */
inline std::vector<VecZ> dd_extreme_rays(const std::vector<VecZ>& input_normals, int dim) {
    std::set<VecZ> canon;
    for (const VecZ& a : input_normals) {
        VecZ p = primitive(a);
        if (!is_zero(p)) canon.insert(std::move(p));
    }
    std::vector<VecZ> normals(canon.begin(), canon.end());  // lex sorted

    // greedy spanning seed in lex order
    std::vector<std::size_t> seed;
    {
        Mat chosen;
        for (std::size_t i = 0; i < normals.size() && static_cast<int>(seed.size()) < dim; ++i) {
            chosen.push_back(to_vecq(normals[i]));
            if (rank(chosen) == static_cast<int>(chosen.size()))
                seed.push_back(i);
            else
                chosen.pop_back();
        }
    }
    if (static_cast<int>(seed.size()) < dim)
        throw NotFullDimensional("halfspace normals do not span: cone is not pointed");

    auto eval_tight = [&](const VecZ& ray, const std::vector<std::size_t>& processed) {
        TightSet t(normals.size());
        for (std::size_t k : processed)
            if (dot(normals[k], ray) == 0) t.set(k);
        return t;
    };

    // seed cone: rays r_i with ⟨seed_j, r_i⟩ = delta_ij
    std::vector<std::size_t> processed(seed.begin(), seed.end());
    std::vector<DDRay> rays;
    {
        Mat basis;
        for (std::size_t i : seed) basis.push_back(to_vecq(normals[i]));
        for (int i = 0; i < dim; ++i) {
            VecQ e(dim, Rat(0));
            e[i] = 1;
            const auto sol = solve_system(basis, e);
            VecZ r = clear_denominators(*sol);
            rays.push_back(DDRay{r, eval_tight(r, processed)});
        }
    }

    std::set<VecZ> present;
    for (const DDRay& r : rays) present.insert(r.v);

    std::set<std::size_t> seeded(seed.begin(), seed.end());
    for (std::size_t k = 0; k < normals.size(); ++k) {
        if (seeded.count(k)) continue;
        const VecZ& a = normals[k];
        std::vector<Int> sign(rays.size());
        bool any_neg = false;
        for (std::size_t i = 0; i < rays.size(); ++i) {
            sign[i] = dot(a, rays[i].v);
            if (sign[i] < 0) any_neg = true;
        }
        processed.push_back(k);
        if (!any_neg) {
            for (std::size_t i = 0; i < rays.size(); ++i)
                if (sign[i] == 0) rays[i].tight.set(k);
            continue;
        }

        std::vector<DDRay> next;
        std::set<VecZ> next_present;
        auto keep = [&](DDRay r) {
            if (next_present.insert(r.v).second) next.push_back(std::move(r));
        };
        for (std::size_t i = 0; i < rays.size(); ++i) {
            if (sign[i] > 0) keep(rays[i]);
            if (sign[i] == 0) {
                DDRay r = rays[i];
                r.tight.set(k);
                keep(std::move(r));
            }
        }
        for (std::size_t p = 0; p < rays.size(); ++p) {
            if (sign[p] <= 0) continue;
            for (std::size_t q = 0; q < rays.size(); ++q) {
                if (sign[q] >= 0) continue;
                const TightSet common = TightSet::intersect(rays[p].tight, rays[q].tight);
                bool adjacent = true;
                for (std::size_t t = 0; t < rays.size(); ++t) {
                    if (t == p || t == q) continue;
                    if (common.subset_of(rays[t].tight)) {
                        adjacent = false;
                        break;
                    }
                }
                if (!adjacent) continue;
                VecZ comb(a.size());
                for (std::size_t j = 0; j < comb.size(); ++j)
                    comb[j] = sign[p] * rays[q].v[j] - sign[q] * rays[p].v[j];
                comb = primitive(comb);
                if (is_zero(comb)) continue;
                keep(DDRay{comb, eval_tight(comb, processed)});
            }
        }
        rays = std::move(next);
        present = std::move(next_present);
    }

    std::vector<VecZ> out;
    out.reserve(rays.size());
    for (DDRay& r : rays) out.push_back(std::move(r.v));
    std::sort(out.begin(), out.end(), [](const VecZ& a, const VecZ& b) { return lex_less(a, b); });
    return out;
}

}  // namespace detail

/**
 * Full-dimensional strongly convex rational polyhedral cone, stored by its
 * primitive extreme rays. Facet normals are computed on demand and cached;
 * the value is immutable after construction and safe to share across threads.
 */
class Cone {
public:
    /**
     * Builds a cone from generators. Generators are normalized to primitive
     * vectors, deduplicated, and reduced to the extreme rays. Throws
     * NotFullDimensional / NotStronglyConvex when the generated cone is
     * degenerate, UnsupportedRank outside ranks 2..6.
     */
    static Cone from_rays(int rank, const std::vector<VecZ>& generators) {
        check_rank_supported(rank);
        std::set<VecZ> canon;
        for (const VecZ& g : generators) {
            if (static_cast<int>(g.size()) != rank)
                throw Error("ray length does not match rank");
            VecZ p = primitive(g);
            if (!is_zero(p)) canon.insert(std::move(p));
        }
        std::vector<VecZ> rays(canon.begin(), canon.end());
        if (rank_of_rows(rays) != rank)
            throw NotFullDimensional();
        {
            std::vector<LpConstraint> sep;
            for (const VecZ& r : rays) sep.push_back({to_vecq(r), Rat(1)});
            if (!lp_feasible(sep, rank))
                throw NotStronglyConvex();
        }
        drop_redundant_rays(rank, rays);
        return Cone(rank, std::move(rays));
    }

    int rank() const { return rank_; }
    const std::vector<VecZ>& rays() const { return rays_; }

    /** Primitive inner normals of the facets; compute-once, race-safe. */
    const std::vector<VecZ>& facet_normals() const {
        std::call_once(cache_->once, [this] {
            cache_->normals = detail::dd_extreme_rays(rays_, rank_);
        });
        return cache_->normals;
    }

    bool contains(const VecQ& p) const {
        for (const VecZ& f : facet_normals())
            if (dot(f, p) < 0) return false;
        return true;
    }

    bool contains_interior(const VecQ& p) const {
        for (const VecZ& f : facet_normals())
            if (dot(f, p) <= 0) return false;
        return true;
    }

    bool operator==(const Cone& o) const { return rank_ == o.rank_ && rays_ == o.rays_; }
    bool operator!=(const Cone& o) const { return !(*this == o); }

    friend Cone dual_cone(const Cone& c);

private:
    Cone(int rank, std::vector<VecZ> rays)
        : rank_(rank), rays_(std::move(rays)), cache_(std::make_shared<FacetCache>()) {}

    static void drop_redundant_rays(int rank, std::vector<VecZ>& rays) {
        for (std::size_t i = 0; i < rays.size();) {
            if (rays.size() <= static_cast<std::size_t>(rank)) break;  // all extreme
            // redundant iff rays[i] is a nonnegative combination of the others
            std::vector<VecZ> others;
            for (std::size_t j = 0; j < rays.size(); ++j)
                if (j != i) others.push_back(rays[j]);
            const std::size_t s = others.size();
            std::vector<LpConstraint> cons;
            for (std::size_t j = 0; j < s; ++j) {
                VecQ e(s, Rat(0));
                e[j] = 1;
                cons.push_back({std::move(e), Rat(0)});
            }
            for (int row = 0; row < rank; ++row) {
                VecQ coeff(s);
                for (std::size_t j = 0; j < s; ++j) coeff[j] = Rat(others[j][row]);
                cons.push_back({coeff, Rat(rays[i][row])});
                for (Rat& x : coeff) x = -x;
                cons.push_back({std::move(coeff), Rat(-rays[i][row])});
            }
            if (lp_feasible(cons, s))
                rays.erase(rays.begin() + static_cast<long>(i));
            else
                ++i;
        }
    }

    struct FacetCache {
        std::once_flag once;
        std::vector<VecZ> normals;
    };

    int rank_ = 0;
    std::vector<VecZ> rays_;
    std::shared_ptr<FacetCache> cache_;
};

/**
 * Exact dual cone {y : ⟨x, y⟩ >= 0 for all x in C}. The dual of a
 * full-dimensional strongly convex cone is again full-dimensional and
 * strongly convex, and its facet normals are exactly the rays of C.
 */
inline Cone dual_cone(const Cone& c) {
    std::vector<VecZ> rays = detail::dd_extreme_rays(c.rays(), c.rank());
    Cone d(c.rank(), std::move(rays));
    d.cache_->normals = c.rays();
    // publish the prefilled cache
    std::call_once(d.cache_->once, [] {});
    return d;
}

}  // namespace nvol
