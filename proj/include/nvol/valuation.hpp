#pragma once

#include <variant>
#include <vector>

#include "nvol/errors.hpp"
#include "nvol/germ.hpp"
#include "nvol/monomial_ideal.hpp"
#include "nvol/polytope.hpp"
#include "nvol/rational.hpp"

namespace nvol {

/**
 * Toric valuation v_u for u interior to sigma. Two coordinate modes: exact
 * rational u carries the full API (ideals, colengths, exact invariants);
 * float u exists for the optimizer and answers only the approximate numeric
 * queries. Conversion rational -> float is explicit; float coordinates are
 * never silently promoted to rationals.
 */
class ToricValuation {
public:
    static ToricValuation exact(GermPtr germ, VecQ u) {
        if (!germ->contains_interior(u))
            throw Unbounded("valuation vector is not interior to sigma");
        return ToricValuation(std::move(germ), std::move(u));
    }

    static ToricValuation approximate(GermPtr germ, std::vector<double> u) {
        if (!germ->contains_interior(u))
            throw Unbounded("valuation vector is not interior to sigma");
        return ToricValuation(std::move(germ), std::move(u));
    }

    const GermPtr& germ() const { return germ_; }
    bool is_exact() const { return std::holds_alternative<VecQ>(u_); }

    const VecQ& u() const {
        if (!is_exact()) throw IrrationalMode();
        return std::get<VecQ>(u_);
    }

    std::vector<double> u_approx() const {
        if (is_exact()) return to_doubles(std::get<VecQ>(u_));
        return std::get<std::vector<double>>(u_);
    }

    /** A(v_u) = ⟨u, w⟩, exact. */
    Rat log_discrepancy() const { return dot(u(), germ_->gorenstein_covector()); }

    /** vol(v_u) = n! Vol(sigma_dual ∩ {⟨u, x⟩ <= 1}), exact. */
    Rat volume() const {
        Int fact = 1;
        for (int i = 2; i <= germ_->rank(); ++i) fact *= i;
        return Rat(fact) * nvol::volume(truncate(germ_->sigma_dual(), u(), Rat(1)));
    }

    /** nvol(v_u) = A^n vol, exact. */
    Rat normalized_volume() const {
        const Rat a = log_discrepancy();
        Rat an = 1;
        for (int i = 0; i < germ_->rank(); ++i) an *= a;
        return an * volume();
    }

    double log_discrepancy_approx() const {
        const std::vector<double> v = u_approx();
        double s = 0;
        const VecQ& w = germ_->gorenstein_covector();
        for (std::size_t j = 0; j < v.size(); ++j) s += v[j] * to_double(w[j]);
        return s;
    }

    double normalized_volume_approx() const {
        const std::vector<double> v = u_approx();
        double a = log_discrepancy_approx();
        double an = 1;
        for (int i = 0; i < germ_->rank(); ++i) an *= a;
        return an * germ_->scaled_truncation_volume(v);
    }

    /**
     * Valuation ideal a_m(v_u) = ({x in sigma_dual ∩ M : ⟨u, x⟩ >= m}),
     * returned by its minimal generators. Minimal elements live in the slab
     * m <= ⟨u, x⟩ < m + n * max_r ⟨u, r⟩ over the primitive rays r of
     * sigma_dual: a deeper point has some ray coefficient >= 1 and peeling
     * that ray stays in the ideal. Every slab point is checked to stay in the
     * ideal under adding any primitive dual ray.
     */
    MonomialIdeal valuation_ideal(const Rat& m) const {
        const VecQ& uu = u();
        if (m <= 0)  // a_0 is the unit ideal
            return MonomialIdeal(germ_, {VecZ(germ_->rank(), Int(0))});
        Rat raymax = 0;
        for (const VecZ& r : germ_->sigma_dual().rays())
            raymax = std::max(raymax, dot(uu, r));
        const Rat upper = m + Rat(germ_->rank()) * raymax;
        std::vector<Halfspace> closed;
        for (const VecZ& f : germ_->sigma().rays()) closed.push_back({to_vecq(f), Rat(0)});
        closed.push_back({uu, m});
        std::vector<Halfspace> strict;
        {
            VecQ mu(uu);
            for (Rat& x : mu) x = -x;
            strict.push_back({std::move(mu), -upper});
        }
        const std::vector<VecZ> slab = enumerate_lattice_points(germ_->rank(), closed, strict);
        for (const VecZ& p : slab)  // slab certificate
            for (const VecZ& r : germ_->sigma_dual().rays())
                if (dot(uu, p) + dot(uu, r) < m)
                    throw Error("valuation ideal slab bound violated");
        return MonomialIdeal(germ_, slab);
    }

    /** length(O/a_m(v_u)) = #{x in sigma_dual ∩ M : ⟨u, x⟩ < m}, exact. */
    Int colength(const Rat& m) const {
        if (m <= 0) return Int(0);
        return count_lattice_points_below(germ_->sigma_dual(), u(), m);
    }

private:
    ToricValuation(GermPtr germ, VecQ u) : germ_(std::move(germ)), u_(std::move(u)) {}
    ToricValuation(GermPtr germ, std::vector<double> u)
        : germ_(std::move(germ)), u_(std::move(u)) {}

    GermPtr germ_;
    std::variant<VecQ, std::vector<double>> u_;
};

}  // namespace nvol
