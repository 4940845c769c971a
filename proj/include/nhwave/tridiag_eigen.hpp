#pragma once

// Implicit QL with Wilkinson shifts for a real symmetric tridiagonal matrix,
// templated on the scalar so the same code runs in double and in MPFR.

#include "nhwave/errors.hpp"
#include "nhwave/mpreal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <type_traits>
#include <vector>

namespace nhwave {

template <class T>
struct TridiagEigen {
    std::vector<T> values;   ///< ascending
    std::vector<T> vectors;  ///< column k = eigenvector k, row-major n x n
    std::size_t n = 0;

    const T& vec(std::size_t row, std::size_t k) const { return vectors[row * n + k]; }
};

namespace detail {

inline double hypot_(double a, double b) { return std::hypot(a, b); }
inline mp::Real hypot_(const mp::Real& a, const mp::Real& b) { return mp::hypot(a, b); }
inline double abs_(double a) { return std::fabs(a); }
inline mp::Real abs_(const mp::Real& a) { return mp::abs(a); }

inline void rotate(double& zi, double& zi1, const double& c, const double& s, double&) {
    const double f = zi1;
    zi1 = s * zi + c * f;
    zi = c * zi - s * f;
}

// zi1 <- s zi + c zi1 ; zi <- c zi - s zi1_old, without temporaries
inline void rotate(mp::Real& zi, mp::Real& zi1, const mp::Real& c, const mp::Real& s, mp::Real& f) {
    mpfr_set(f.get(), zi1.get(), MPFR_RNDN);
    mpfr_mul(zi1.get(), c.get(), f.get(), MPFR_RNDN);
    mpfr_fma(zi1.get(), s.get(), zi.get(), zi1.get(), MPFR_RNDN);
    mpfr_mul(zi.get(), c.get(), zi.get(), MPFR_RNDN);
    mpfr_mul(f.get(), s.get(), f.get(), MPFR_RNDN);
    mpfr_sub(zi.get(), zi.get(), f.get(), MPFR_RNDN);
}

}  // namespace detail

/// Eigen-decomposition of the symmetric tridiagonal matrix with diagonal `d`
/// and off-diagonal `e` (e[i] couples i and i+1; size n-1).
/// `zero` fixes the scalar precision for MPFR (pass 0.0 for double).
template <class T>
TridiagEigen<T> tridiag_eigen(std::vector<T> d, std::vector<T> e, const T& zero, double eps, bool want_vectors = true) {
    const std::size_t n = d.size();
    if (n == 0 || e.size() + 1 != n) throw DimensionError("tridiag_eigen: off-diagonal must have length n-1");
    e.push_back(zero);
    TridiagEigen<T> out;
    out.n = n;
    std::vector<T> z;
    if (want_vectors) {
        z.assign(n * n, zero);
        for (std::size_t i = 0; i < n; ++i) z[i * n + i] = zero + 1.0;
    }
    T f = zero, g = zero, r = zero, p = zero, s = zero, c = zero, b = zero, dd = zero, tmp = zero;

    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                dd = detail::abs_(d[m]) + detail::abs_(d[m + 1]);
                if (detail::abs_(e[m]) <= dd * eps) break;
            }
            if (m != l) {
                if (++iter > 60) throw Error("tridiag_eigen: QL iteration did not converge");
                g = (d[l + 1] - d[l]) / (e[l] * 2.0);
                r = detail::hypot_(g, zero + 1.0);
                g = d[m] - d[l] + e[l] / (g + (g < 0 ? -detail::abs_(r) : detail::abs_(r)));
                s = zero + 1.0;
                c = zero + 1.0;
                p = zero;
                bool deflated = false;
                for (std::size_t ii = m; ii-- > l;) {
                    f = s * e[ii];
                    b = c * e[ii];
                    r = detail::hypot_(f, g);
                    e[ii + 1] = r;
                    if (r == 0.0) {
                        d[ii + 1] -= p;
                        e[m] = zero;
                        deflated = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[ii + 1] - p;
                    r = (d[ii] - g) * s + c * b * 2.0;
                    p = s * r;
                    d[ii + 1] = g + p;
                    g = c * r - b;
                    if (want_vectors)
                        for (std::size_t k = 0; k < n; ++k) detail::rotate(z[k * n + ii], z[k * n + ii + 1], c, s, tmp);
                }
                if (deflated) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = zero;
            }
        } while (m != l);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });
    out.values.reserve(n);
    for (std::size_t k : order) out.values.push_back(d[k]);
    if (want_vectors) {
        out.vectors.assign(n * n, zero);
        for (std::size_t row = 0; row < n; ++row)
            for (std::size_t k = 0; k < n; ++k) out.vectors[row * n + k] = z[row * n + order[k]];
    }
    return out;
}

}  // namespace nhwave
