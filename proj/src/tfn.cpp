#include "fuzzysched/tfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "fuzzysched/error.hpp"

namespace fuzzysched {

std::ostream& operator<<(std::ostream& os, const Tfn& a) {
    return os << '(' << a.lower << ", " << a.modal << ", " << a.upper << ')';
}

void FuzzificationParams::validate() const {
    std::ostringstream msg;
    if (!(eta >= 0.0) || !std::isfinite(eta)) {
        msg << "eta must be >= 0, got " << eta;
        throw Error(ErrorKind::BadParams, msg.str());
    }
    if (is_zero_fuzz()) {
        return;
    }
    if (!(delta1 > 0.0 && delta1 < 1.0) || !(delta2 > 1.0) || !std::isfinite(delta2) ||
        !(delta2 - 1.0 > 1.0 - delta1)) {
        msg << "need 0 < delta1 < 1 < delta2 and delta2 - 1 > 1 - delta1, got delta1=" << delta1
            << " delta2=" << delta2;
        throw Error(ErrorKind::BadParams, msg.str());
    }
}

Tfn add(const Tfn& a, const Tfn& b) noexcept {
    return {a.lower + b.lower, a.modal + b.modal, a.upper + b.upper};
}

Tfn scale(const Tfn& a, double k) {
    if (k < 0.0 || std::isnan(k)) {
        throw Error(ErrorKind::NegativeScalar, "scale factor must be >= 0");
    }
    return {k * a.lower, k * a.modal, k * a.upper};
}

Tfn sub_componentwise(const Tfn& a, const Tfn& b) {
    if (a.lower < b.lower || a.modal < b.modal || a.upper < b.upper) {
        std::ostringstream msg;
        msg << a << " does not dominate " << b;
        throw Error(ErrorKind::NotDominating, msg.str());
    }
    Tfn d{a.lower - b.lower, a.modal - b.modal, a.upper - b.upper};
    // Rounding in the three subtractions can invert near-equal components.
    d.modal = std::max(d.modal, d.lower);
    d.upper = std::max(d.upper, d.modal);
    return d;
}

Tfn ceil_div(const Tfn& a, double quantum) {
    if (!(quantum > 0.0)) {
        throw Error(ErrorKind::NonPositiveQuantum, "billing quantum must be > 0");
    }
    return {std::ceil(a.lower / quantum), std::ceil(a.modal / quantum), std::ceil(a.upper / quantum)};
}

double mean(const Tfn& a) noexcept { return (a.lower + 2.0 * a.modal + a.upper) / 4.0; }

double stddev(const Tfn& a) noexcept {
    const double lm = a.lower - a.modal;
    const double lu = a.lower - a.upper;
    const double mu = a.modal - a.upper;
    return std::sqrt((2.0 * lm * lm + lu * lu + 2.0 * mu * mu) / 80.0);
}

double defuzzify(const Tfn& a, double eta) noexcept { return mean(a) + eta * stddev(a); }

std::weak_ordering compare(const Tfn& a, const Tfn& b) noexcept {
    const double a1 = mean(a);
    const double b1 = mean(b);
    if (a1 < b1) return std::weak_ordering::less;
    if (a1 > b1) return std::weak_ordering::greater;
    if (a.modal < b.modal) return std::weak_ordering::less;
    if (a.modal > b.modal) return std::weak_ordering::greater;
    const double a3 = a.upper - a.lower;
    const double b3 = b.upper - b.lower;
    if (a3 < b3) return std::weak_ordering::less;
    if (a3 > b3) return std::weak_ordering::greater;
    return std::weak_ordering::equivalent;
}

Tfn fmax(const Tfn& a, const Tfn& b) noexcept { return compare(a, b) < 0 ? b : a; }

Tfn fuzzify(double t, const FuzzificationParams& params, Rng& rng) {
    params.validate();
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw Error(ErrorKind::BadParams, "fuzzify needs a finite estimate >= 0");
    }
    if (t == 0.0) {
        return {};
    }
    if (params.is_zero_fuzz()) {
        return Tfn::crisp(t);
    }
    const double lower = rng.uniform(params.delta1 * t, t);
    const double upper_hi = params.delta2 * t;
    double upper = rng.uniform(2.0 * t - lower, upper_hi);
    // Keep the right spread at least the left one after rounding, so that the
    // mean never drops below the estimate.
    while ((upper - t < t - lower || mean({lower, t, upper}) < t) && upper < upper_hi) {
        upper = std::nextafter(upper, std::numeric_limits<double>::infinity());
    }
    return {lower, t, upper};
}

double membership(const Tfn& a, double x) noexcept {
    if (x < a.lower || x > a.upper) {
        return 0.0;
    }
    if (x == a.modal) {
        return 1.0;
    }
    if (x < a.modal) {
        return (x - a.lower) / (a.modal - a.lower);
    }
    return (x - a.upper) / (a.modal - a.upper);
}

}  // namespace fuzzysched
