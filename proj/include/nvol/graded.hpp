#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "nvol/errors.hpp"
#include "nvol/monomial_ideal.hpp"
#include "nvol/valuation.hpp"

namespace nvol {

/**
 * Graded sequence of monomial ideals: a_m * a_k is contained in a_{m+k}.
 * Terms come from a pure evaluator and are memoized behind a race-safe cache,
 * so per-index computations may run concurrently.
 */
class GradedSequence {
public:
    enum class Kind { PowersOfIdeal, ValuationIdeals, Custom };

    static GradedSequence powers(const MonomialIdeal& a) {
        if (a.is_empty()) throw EmptyIdeal();
        return GradedSequence(a.germ(), Kind::PowersOfIdeal,
                              [a](int m) { return power(a, m); });
    }

    static GradedSequence valuation_ideals(const ToricValuation& v) {
        return GradedSequence(v.germ(), Kind::ValuationIdeals,
                              [v](int m) { return v.valuation_ideal(Rat(m)); });
    }

    static GradedSequence custom(GermPtr germ, std::function<MonomialIdeal(int)> eval) {
        return GradedSequence(std::move(germ), Kind::Custom, std::move(eval));
    }

    const GermPtr& germ() const { return germ_; }
    Kind kind() const { return kind_; }

    MonomialIdeal at(int m) const {
        if (m <= 0) throw Error("graded sequences are indexed from 1");
        {
            std::lock_guard<std::mutex> lock(cache_->mutex);
            const auto it = cache_->terms.find(m);
            if (it != cache_->terms.end()) return it->second;
        }
        MonomialIdeal term = eval_(m);
        if (term.is_empty()) throw EmptyIdeal("graded sequence term is the zero ideal");
        std::lock_guard<std::mutex> lock(cache_->mutex);
        return cache_->terms.try_emplace(m, std::move(term)).first->second;
    }

    /** Spot-check gradedness a_m a_k within a_{m+k} on all pairs m, k <= limit. */
    bool check_graded(int limit) const {
        for (int m = 1; m <= limit; ++m)
            for (int k = m; k <= limit; ++k)
                if (!contains(at(m + k), product(at(m), at(k)))) return false;
        return true;
    }

    /** Default truncation per rank: limits where the trends are affordable exactly. */
    int default_truncation() const {
        if (germ_->rank() == 2) return 24;
        if (germ_->rank() == 3) return 12;
        return 6;
    }

private:
    GradedSequence(GermPtr germ, Kind kind, std::function<MonomialIdeal(int)> eval)
        : germ_(std::move(germ)), kind_(kind), eval_(std::move(eval)),
          cache_(std::make_shared<Cache>()) {}

    struct Cache {
        std::mutex mutex;
        std::map<int, MonomialIdeal> terms;
    };

    GermPtr germ_;
    Kind kind_;
    std::function<MonomialIdeal(int)> eval_;
    std::shared_ptr<Cache> cache_;
};

struct LctSequenceResult {
    Rat lower;          // max over m <= M of m*lct(a_m): a certified lower bound
    std::vector<Rat> trend;  // m * lct(a_m) for m = 1..M
};

/**
 * Truncated lct of the sequence. lct(a_bullet) = sup_m m*lct(a_m), so every
 * truncation is a certified lower bound; no extrapolation is reported.
 */
inline LctSequenceResult lct_sequence(const GradedSequence& s, int truncation) {
    LctSequenceResult out;
    out.lower = 0;
    for (int m = 1; m <= truncation; ++m) {
        const Rat v = Rat(m) * s.at(m).lct();
        out.trend.push_back(v);
        if (v > out.lower) out.lower = v;
    }
    return out;
}

struct MultSequenceResult {
    Rat estimate;            // e(a_m)/m^n at the largest doubling index <= M
    std::vector<Rat> trend;  // e(a_m)/m^n for m = 1..M
};

/**
 * Truncated multiplicity trend e(a_m)/m^n. Along the doubling subsequence the
 * trend is non-increasing (a_m^2 within a_{2m}); that is asserted here, and
 * the last doubling value is the reported estimate (an upper bound of e(a_bullet)).
 */
inline MultSequenceResult mult_sequence(const GradedSequence& s, int truncation) {
    MultSequenceResult out;
    const int n = s.germ()->rank();
    for (int m = 1; m <= truncation; ++m) {
        Rat mn = 1;
        for (int i = 0; i < n; ++i) mn *= m;
        out.trend.push_back(s.at(m).multiplicity() / mn);
    }
    Rat prev = -1;
    for (int m = 1; m <= truncation; m *= 2) {
        const Rat v = out.trend[m - 1];
        if (prev >= 0 && v > prev)
            throw Error("doubling trend increased; sequence is not graded");
        prev = v;
        out.estimate = v;
    }
    return out;
}

struct NormalizedMultiplicityResult {
    Rat value;  // (lct lower bound)^n * (multiplicity estimate)
    LctSequenceResult lct;
    MultSequenceResult mult;
};

inline NormalizedMultiplicityResult normalized_multiplicity(const GradedSequence& s,
                                                            int truncation) {
    NormalizedMultiplicityResult out;
    out.lct = lct_sequence(s, truncation);
    out.mult = mult_sequence(s, truncation);
    Rat ln = 1;
    for (int i = 0; i < s.germ()->rank(); ++i) ln *= out.lct.lower;
    out.value = ln * out.mult.estimate;
    return out;
}

}  // namespace nvol
