#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "nvol/cone.hpp"
#include "nvol/errors.hpp"
#include "nvol/linalg.hpp"
#include "nvol/polytope.hpp"
#include "nvol/rational.hpp"

namespace nvol {

/**
 * A Q-Gorenstein toric germ: the cone sigma in N, its dual in M, and the
 * Gorenstein covector w with ⟨u_i, w⟩ = 1 for every primitive ray u_i of
 * sigma. Existence of w certifies the singularity is klt. Immutable and
 * freely shareable across threads.
 */
class ToricGerm {
public:
    int rank() const { return rank_; }
    const Cone& sigma() const { return sigma_; }
    const Cone& sigma_dual() const { return sigma_dual_; }
    const VecQ& gorenstein_covector() const { return w_; }
    const Int& gorenstein_index() const { return index_; }
    const std::string& name() const { return name_; }

    /** True iff ⟨f, u⟩ > 0 for every facet normal f of sigma. */
    bool contains_interior(const VecQ& u) const {
        if (static_cast<int>(u.size()) != rank_) throw Error("vector length mismatch");
        for (const VecZ& f : sigma_dual_.rays())
            if (dot(f, u) <= 0) return false;
        return true;
    }

    bool contains_interior(const std::vector<double>& u) const {
        VecQ q(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) q[i] = rationalize(u[i]);
        return contains_interior(q);
    }

    /** Sum of the primitive rays of sigma; always interior. */
    VecQ ray_barycenter() const {
        VecQ b(rank_, Rat(0));
        for (const VecZ& r : sigma_.rays())
            for (int j = 0; j < rank_; ++j) b[j] += Rat(r[j]);
        return b;
    }

    /**
     * Simplicial subdivision of the dual cone (fan over the pulling
     * triangulation of conv({0} u rays)), with |det| per cell. Computed once;
     * backs the closed-form truncation volume used by the optimizer.
     */
    struct DualCells {
        std::vector<std::vector<int>> cells;  // indices into sigma_dual().rays()
        std::vector<Int> absdets;
    };

    const DualCells& dual_cells() const {
        std::call_once(cells_->once, [this] {
            std::vector<VecQ> pts;
            pts.push_back(VecQ(rank_, Rat(0)));
            for (const VecZ& r : sigma_dual_.rays()) pts.push_back(to_vecq(r));
            const auto tris = pulling_triangulation(pts, /*forced_apex=*/0);
            for (const auto& t : tris) {
                std::vector<int> cell;
                for (int i : t)
                    if (i != 0) cell.push_back(i - 1);
                if (cell.size() != static_cast<std::size_t>(rank_)) continue;
                std::vector<VecZ> rows;
                for (int i : cell) rows.push_back(sigma_dual_.rays()[i]);
                Int d = det_int(rows);
                if (d < 0) d = -d;
                cells_->value.cells.push_back(std::move(cell));
                cells_->value.absdets.push_back(std::move(d));
            }
        });
        return cells_->value;
    }

    /**
     * n! times the Euclidean volume of {x in sigma_dual : ⟨u, x⟩ <= 1},
     * evaluated on the cached simplicial cells:  sum |det S| / prod ⟨u, r⟩.
     * Agrees exactly with the triangulation-based volume engine.
     */
    Rat scaled_truncation_volume(const VecQ& u) const {
        const DualCells& dc = dual_cells();
        Rat total = 0;
        for (std::size_t c = 0; c < dc.cells.size(); ++c) {
            Rat prod = 1;
            for (int i : dc.cells[c]) {
                const Rat d = dot(u, sigma_dual_.rays()[i]);
                if (d <= 0) throw Unbounded("truncation direction vanishes on a ray");
                prod *= d;
            }
            total += Rat(dc.absdets[c]) / prod;
        }
        return total;
    }

    double scaled_truncation_volume(const std::vector<double>& u) const {
        const DualCells& dc = dual_cells();
        double total = 0;
        for (std::size_t c = 0; c < dc.cells.size(); ++c) {
            double prod = 1;
            for (int i : dc.cells[c]) {
                double d = 0;
                const VecZ& r = sigma_dual_.rays()[i];
                for (int j = 0; j < rank_; ++j) d += to_double(Rat(r[j])) * u[j];
                prod *= d;
            }
            total += to_double(Rat(dc.absdets[c])) / prod;
        }
        return total;
    }

    bool operator==(const ToricGerm& o) const {
        return rank_ == o.rank_ && sigma_.rays() == o.sigma_.rays();
    }

    friend std::shared_ptr<const ToricGerm> build_germ(const std::vector<VecZ>&,
                                                       std::string);

private:
    ToricGerm(Cone sigma, Cone dual, VecQ w, Int index, std::string name)
        : rank_(sigma.rank()),
          sigma_(std::move(sigma)),
          sigma_dual_(std::move(dual)),
          w_(std::move(w)),
          index_(std::move(index)),
          name_(std::move(name)),
          cells_(std::make_shared<CellCache>()) {}

    struct CellCache {
        std::once_flag once;
        DualCells value;
    };

    int rank_;
    Cone sigma_;
    Cone sigma_dual_;
    VecQ w_;
    Int index_;
    std::string name_;
    std::shared_ptr<CellCache> cells_;
};

using GermPtr = std::shared_ptr<const ToricGerm>;

/**
 * Validates the rays as a Q-Gorenstein toric germ. The covector w is the
 * exact solution of ⟨u_i, w⟩ = 1 over the primitive ray generators;
 * inconsistency means the germ is not Q-Gorenstein. A Q-Gorenstein toric
 * germ is automatically klt, so success certifies kltness.
 */
inline GermPtr build_germ(const std::vector<VecZ>& rays, std::string name = "") {
    Cone sigma = Cone::from_rays(rays.empty() ? 0 : static_cast<int>(rays[0].size()), rays);
    Cone dual = dual_cone(sigma);
    Mat a;
    for (const VecZ& r : sigma.rays()) a.push_back(to_vecq(r));
    const auto w = solve_system(a, VecQ(a.size(), Rat(1)));
    if (!w) throw NotQGorenstein();
    Int index = 1;
    for (const Rat& q : *w) index = boost::multiprecision::lcm(index, den(q));
    return GermPtr(
        new ToricGerm(std::move(sigma), std::move(dual), *w, std::move(index), std::move(name)));
}

inline void require_same_germ(const GermPtr& a, const GermPtr& b) {
    if (a.get() == b.get()) return;
    if (!a || !b || !(*a == *b)) throw GermMismatch();
}

}  // namespace nvol
