#include "nhwave/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace nhwave {

namespace {

// Start order for the downward sweep: far enough beyond both n_max and |x|
// that the seed's error is damped below 2^-bits at the orders we keep.
long start_order(int n_max, double ax, mp::Bits bits) {
    const double base = std::max(static_cast<double>(n_max), ax);
    const double margin = 20.0 + 0.5 * static_cast<double>(bits) + std::sqrt(static_cast<double>(bits) * (ax + 1.0));
    long k = static_cast<long>(std::ceil(base + margin));
    return k + (k % 2);  // even start keeps the normalization sum aligned
}

}  // namespace

std::vector<mp::Real> bessel_j_all(int n_max, const mp::Real& x) {
    const mp::Bits bits = x.bits();
    n_max = std::max(n_max, 0);
    std::vector<mp::Real> out(static_cast<std::size_t>(n_max) + 1, mp::Real(bits));
    if (x.is_zero()) {
        out[0] = mp::Real(1.0, bits);
        return out;
    }
    const bool negative = x.sign() < 0;
    const mp::Real ax = mp::abs(x);
    const mp::Bits work = bits + 32;
    const long K = start_order(n_max, ax.to_double(), bits);

    mp::Real two_over_x(work);
    mpfr_ui_div(two_over_x.get(), 2, ax.get(), MPFR_RNDN);

    mp::Real jp1(work);          // J_{k+1}
    mp::Real jk(work);           // J_k
    mpfr_set_ui(jk.get(), 1, MPFR_RNDN);
    mp::Real norm(work);
    mp::Real tmp(work);
    std::vector<mp::Real> kept(static_cast<std::size_t>(n_max) + 1, mp::Real(work));

    for (long k = K; k >= 1; --k) {
        if (k <= n_max) kept[static_cast<std::size_t>(k)] = jk;
        if (k % 2 == 0) mpfr_add(norm.get(), norm.get(), jk.get(), MPFR_RNDN);
        // J_{k-1} = (2k/x) J_k - J_{k+1}
        mpfr_mul_si(tmp.get(), two_over_x.get(), k, MPFR_RNDN);
        mpfr_mul(tmp.get(), tmp.get(), jk.get(), MPFR_RNDN);
        mpfr_sub(tmp.get(), tmp.get(), jp1.get(), MPFR_RNDN);
        mpfr_swap(jp1.get(), jk.get());
        mpfr_swap(jk.get(), tmp.get());
        // keep magnitudes in a comfortable range
        if (jk.exponent() > 1000000) {
            const long shift = -jk.exponent();
            mpfr_mul_2si(jk.get(), jk.get(), shift, MPFR_RNDN);
            mpfr_mul_2si(jp1.get(), jp1.get(), shift, MPFR_RNDN);
            mpfr_mul_2si(norm.get(), norm.get(), shift, MPFR_RNDN);
            for (long j = k; j <= n_max; ++j) mpfr_mul_2si(kept[static_cast<std::size_t>(j)].get(), kept[static_cast<std::size_t>(j)].get(), shift, MPFR_RNDN);
        }
    }
    kept[0] = jk;
    // J_0 + 2 sum_{k>=1} J_{2k} = 1
    mpfr_mul_2ui(norm.get(), norm.get(), 1, MPFR_RNDN);
    mpfr_add(norm.get(), norm.get(), jk.get(), MPFR_RNDN);
    for (int n = 0; n <= n_max; ++n) {
        mp::Real v = kept[static_cast<std::size_t>(n)] / norm;
        if (negative && n % 2 == 1) v = -v;
        v.set_bits(bits);
        out[static_cast<std::size_t>(n)] = std::move(v);
    }
    return out;
}

mp::Real bessel_j(int n, const mp::Real& x) {
    const int an = std::abs(n);
    mp::Real v = bessel_j_all(an, x)[static_cast<std::size_t>(an)];
    if (n < 0 && an % 2 == 1) v = -v;
    return v;
}

mp::Complex bessel_propagator(int delta, const mp::Real& t0, const mp::Real& t) {
    // (-i)^delta J_delta = (-i)^|delta| J_|delta| for either sign of delta
    const int d = std::abs(delta);
    mp::Real x = t0 * t;
    x *= 2.0;
    const mp::Real j = bessel_j(d, x);
    mp::Complex z(j.bits());
    switch (d % 4) {
        case 0: z.re = j; break;
        case 1: z.im = -j; break;
        case 2: z.re = -j; break;
        default: z.im = j; break;
    }
    return z;
}

std::complex<double> bessel_propagator(int delta, double t0, double t) {
    const mp::Bits bits = 128;
    const mp::Complex z = bessel_propagator(delta, mp::Real(t0, bits), mp::Real(t, bits));
    return {z.re.to_double(), z.im.to_double()};
}

}  // namespace nhwave
