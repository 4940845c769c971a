#pragma once

#include "nhwave/errors.hpp"

#include <cmath>

namespace nhwave {

template <class F>
double bisect(F&& f, double lo, double hi, double rel_tol) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if ((flo > 0) == (fhi > 0)) throw NoRootError("bisection bracket does not change sign");
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (std::fabs(hi - lo) <= rel_tol * std::fmax(std::fabs(mid), 1e-300)) return mid;
        const double fm = f(mid);
        if (fm == 0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace nhwave
