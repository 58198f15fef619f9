#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "nvol/errors.hpp"

namespace nvol {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

/** Integer lattice vector (a point of N or M). */
using VecZ = std::vector<Int>;
/** Exact rational vector (a point of N_Q or M_Q). */
using VecQ = std::vector<Rat>;

inline Int num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int den(const Rat& q) { return boost::multiprecision::denominator(q); }

inline Int dot(const VecZ& a, const VecZ& b) {
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Rat dot(const VecQ& a, const VecQ& b) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Rat dot(const VecZ& a, const VecQ& b) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += Rat(a[i]) * b[i];
    return s;
}

inline Rat dot(const VecQ& a, const VecZ& b) { return dot(b, a); }

inline VecQ to_vecq(const VecZ& v) {
    VecQ out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i]);
    return out;
}

inline bool is_zero(const VecZ& v) {
    return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

inline bool is_zero(const VecQ& v) {
    return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}

/** Divides an integer vector by the gcd of its entries; zero vector stays zero. */
inline VecZ primitive(VecZ v) {
    Int g = 0;
    for (const Int& x : v) g = boost::multiprecision::gcd(g, x);
    if (g > 1) {
        for (Int& x : v) x /= g;
    }
    return v;
}

/** Scales a rational vector to a primitive integer vector in the same ray. */
inline VecZ clear_denominators(const VecQ& v) {
    Int l = 1;
    for (const Rat& q : v) l = boost::multiprecision::lcm(l, den(q));
    VecZ out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = num(v[i]) * (l / den(v[i]));
    return primitive(out);
}

inline bool lex_less(const VecZ& a, const VecZ& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline bool lex_less(const VecQ& a, const VecQ& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline double to_double(const Rat& q) { return q.convert_to<double>(); }

inline std::vector<double> to_doubles(const VecQ& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
    return out;
}

/**
 * Best rational approximation of x with |x - p/q| <= precision, by walking
 * the continued-fraction expansion until the target precision is met. The
 * returned fraction has the smallest denominator among all fractions within
 * the given precision of x.
 */
inline Rat rationalize(double x, double precision = 1e-12) {
    if (!std::isfinite(x)) throw Error("cannot rationalize a non-finite value");
    const bool neg = x < 0;
    const long double target = std::abs(static_cast<long double>(x));
    long double y = target;
    // convergent recurrence h_i = a_i h_{i-1} + h_{i-2}
    Int h_prev = 0, k_prev = 1, h = 1, k = 0;
    for (int iter = 0; iter < 64; ++iter) {
        const long double fl = std::floor(y);
        if (fl > 9e18L) break;
        const Int a = static_cast<long long>(fl);
        const Int h_new = a * h + h_prev;
        const Int k_new = a * k + k_prev;
        h_prev = h;
        k_prev = k;
        h = h_new;
        k = k_new;
        const long double err =
            std::abs(static_cast<long double>(to_double(Rat(h, k))) - target);
        if (err <= static_cast<long double>(precision)) break;
        const long double frac = y - fl;
        if (frac <= 0) break;
        y = 1.0L / frac;
    }
    Rat r(h, k);
    return neg ? Rat(-r) : r;
}

/**
 * Best rational approximation with denominator <= bound (continued-fraction
 * convergent). Used by the divisoriality probe.
 */
inline Rat rationalize_bounded(double x, const Int& denominator_bound) {
    if (!std::isfinite(x)) throw Error("cannot rationalize a non-finite value");
    const bool neg = x < 0;
    long double y = std::abs(static_cast<long double>(x));
    Int h_prev = 0, k_prev = 1, h = 1, k = 0;
    for (int iter = 0; iter < 64; ++iter) {
        const long double fl = std::floor(y);
        if (fl > 9e18L) break;
        const Int a = static_cast<long long>(fl);
        Int h_new = a * h + h_prev;
        Int k_new = a * k + k_prev;
        if (k_new > denominator_bound) {
            // best semiconvergent still within the bound
            if (k > 0) {
                const Int t = (denominator_bound - k_prev) / k;
                if (t > 0) {
                    const Rat semi(t * h + h_prev, t * k + k_prev);
                    const Rat conv(h, k);
                    const long double target = std::abs(static_cast<long double>(x));
                    if (std::abs(static_cast<long double>(to_double(semi)) - target) <
                        std::abs(static_cast<long double>(to_double(conv)) - target)) {
                        h = num(semi);
                        k = den(semi);
                    }
                }
            }
            break;
        }
        h_prev = h;
        k_prev = k;
        h = h_new;
        k = k_new;
        const long double frac = y - fl;
        if (frac <= 0) break;
        y = 1.0L / frac;
    }
    if (k == 0) return Rat(0);
    Rat r(h, k);
    return neg ? Rat(-r) : r;
}

/**
 * Supported lattice ranks are 2..6; double description and triangulation blow
 * up combinatorially above that. NVOL_MAX_RANK may lower the cap, never raise it.
 */
inline int max_supported_rank() {
    int cap = 6;
    if (const char* env = std::getenv("NVOL_MAX_RANK")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 2 && v < cap) cap = static_cast<int>(v);
    }
    return cap;
}

inline void check_rank_supported(int rank) {
    if (rank < 2 || rank > max_supported_rank())
        throw UnsupportedRank("lattice rank " + std::to_string(rank) +
                              " outside supported range 2.." +
                              std::to_string(max_supported_rank()));
}

}  // namespace nvol
