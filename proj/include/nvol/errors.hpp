#pragma once

#include <stdexcept>
#include <string>

namespace nvol {

/** Base class for all domain errors raised by this library. */
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/** The given rays/normals do not span the ambient space. */
class NotFullDimensional : public Error {
public:
    explicit NotFullDimensional(const std::string& what = "cone is not full-dimensional")
        : Error(what) {}
};

/** The cone contains a line (its apex is not a vertex). */
class NotStronglyConvex : public Error {
public:
    explicit NotStronglyConvex(const std::string& what = "cone is not strongly convex")
        : Error(what) {}
};

/** No covector pairs to 1 with every primitive ray generator. */
class NotQGorenstein : public Error {
public:
    explicit NotQGorenstein(const std::string& what = "no Gorenstein covector exists")
        : Error(what) {}
};

/** A region that must be bounded is not (e.g. truncation by a boundary vector). */
class Unbounded : public Error {
public:
    explicit Unbounded(const std::string& what = "region is unbounded") : Error(what) {}
};

/** Linear program has an empty feasible region. */
class Infeasible : public Error {
public:
    explicit Infeasible(const std::string& what = "linear program is infeasible")
        : Error(what) {}
};

/** Linear program objective is unbounded above on the feasible region. */
class UnboundedObjective : public Error {
public:
    explicit UnboundedObjective(const std::string& what = "objective is unbounded")
        : Error(what) {}
};

/** Ideal is not primary to the maximal ideal of the torus-fixed point. */
class NotPrimary : public Error {
public:
    explicit NotPrimary(const std::string& what = "ideal is not primary") : Error(what) {}
};

/** Two values live over different germs. */
class GermMismatch : public Error {
public:
    explicit GermMismatch(const std::string& what = "ambient germs differ") : Error(what) {}
};

/** Ideal has no generators. */
class EmptyIdeal : public Error {
public:
    explicit EmptyIdeal(const std::string& what = "ideal has no generators") : Error(what) {}
};

/** A generator is outside the dual semigroup (or malformed). */
class InvalidGenerator : public Error {
public:
    explicit InvalidGenerator(const std::string& what = "invalid ideal generator")
        : Error(what) {}
};

/** The ideal is the unit ideal (contains the monomial 1). */
class UnitIdeal : public Error {
public:
    explicit UnitIdeal(const std::string& what = "unit ideal") : Error(what) {}
};

/** Operation requires exact rational coordinates but got a float vector. */
class IrrationalMode : public Error {
public:
    explicit IrrationalMode(const std::string& what =
                                "operation requires an exact-rational valuation vector")
        : Error(what) {}
};

/** Lattice rank outside the supported range. */
class UnsupportedRank : public Error {
public:
    explicit UnsupportedRank(const std::string& what = "unsupported lattice rank")
        : Error(what) {}
};

/** Minimizer could not produce an interior starting point. */
class NoInteriorStart : public Error {
public:
    explicit NoInteriorStart(const std::string& what = "no interior start point")
        : Error(what) {}
};

}  // namespace nvol
