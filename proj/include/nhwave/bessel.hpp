#pragma once

// Bessel functions of the first kind at integer order and MPFR precision,
// and the clean-chain propagator built from them.

#include "nhwave/mpreal.hpp"

#include <complex>
#include <vector>

namespace nhwave {

/// J_0(x) .. J_{n_max}(x) by Miller's downward recurrence, normalized with
/// J_0 + 2 sum_k J_{2k} = 1. Valid for any real x and large orders.
std::vector<mp::Real> bessel_j_all(int n_max, const mp::Real& x);

/// J_n(x) for any integer n (negative orders via J_{-n} = (-1)^n J_n).
mp::Real bessel_j(int n, const mp::Real& x);

/// (-i)^delta J_delta(2 t0 t): the amplitude <m|exp(-iH't)|n> of the uniform
/// infinite chain with hopping t0, delta = m - n. No r^delta factor.
mp::Complex bessel_propagator(int delta, const mp::Real& t0, const mp::Real& t);
std::complex<double> bessel_propagator(int delta, double t0, double t);

}  // namespace nhwave
