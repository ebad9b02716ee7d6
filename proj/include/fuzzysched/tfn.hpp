#pragma once

#include <compare>
#include <iosfwd>

#include "fuzzysched/rng.hpp"

namespace fuzzysched {

/// Triangular fuzzy number (lower, modal, upper). The unit (seconds or
/// dollars) is carried by context. Valid values satisfy lower <= modal <= upper.
struct Tfn {
    double lower = 0.0;
    double modal = 0.0;
    double upper = 0.0;

    static constexpr Tfn crisp(double x) noexcept { return {x, x, x}; }

    bool valid() const noexcept { return lower <= modal && modal <= upper; }
    bool is_crisp() const noexcept { return lower == modal && modal == upper; }

    // Bitwise-style equality of components; use compare() for the ranking order.
    friend bool operator==(const Tfn&, const Tfn&) = default;
};

std::ostream& operator<<(std::ostream& os, const Tfn& a);

/// Parameters of the random fuzzification rule and of the defuzzified objective.
struct FuzzificationParams {
    double delta1 = 0.85;
    double delta2 = 1.2;
    double eta = 1.0;

    /// delta1 = delta2 = 1: every fuzzified value collapses to a crisp triple.
    static constexpr FuzzificationParams zero_fuzz(double eta = 1.0) noexcept {
        return {1.0, 1.0, eta};
    }

    bool is_zero_fuzz() const noexcept { return delta1 == 1.0 && delta2 == 1.0; }

    /// Throws Error(BadParams) unless 0 < d1 < 1 < d2, d2 - 1 > 1 - d1 and eta >= 0
    /// (or the zero-fuzz special case).
    void validate() const;
};

Tfn add(const Tfn& a, const Tfn& b) noexcept;
inline Tfn operator+(const Tfn& a, const Tfn& b) noexcept { return add(a, b); }

/// Multiplication by a non-negative scalar. Division by l is scale(a, 1/l).
Tfn scale(const Tfn& a, double k);

/// Componentwise difference of correlated interval endpoints; requires a >= b
/// in every component.
Tfn sub_componentwise(const Tfn& a, const Tfn& b);

/// Componentwise ceil(a / quantum): number of billable quanta.
Tfn ceil_div(const Tfn& a, double quantum);

double mean(const Tfn& a) noexcept;
double stddev(const Tfn& a) noexcept;
/// mean + eta * stddev
double defuzzify(const Tfn& a, double eta) noexcept;

/// Ranking order: lexicographic on ((l + 2m + u) / 4, m, u - l).
std::weak_ordering compare(const Tfn& a, const Tfn& b) noexcept;

/// Approximate fuzzy max: the larger argument under compare(); ties keep `a`.
Tfn fmax(const Tfn& a, const Tfn& b) noexcept;

/// Lifts a crisp estimate t >= 0 to a TFN with modal t, lower drawn from
/// [d1*t, t] and upper from [2t - lower, d2*t].
Tfn fuzzify(double t, const FuzzificationParams& params, Rng& rng);

/// Piecewise-linear membership grade in [0, 1]. Crisp numbers use the indicator.
double membership(const Tfn& a, double x) noexcept;

}  // namespace fuzzysched
