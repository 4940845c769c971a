#pragma once

// Banded matrix-vector kernels at MPFR precision.
//
// Each kernel exists twice: a serial reference and an OpenMP version that
// splits rows across threads. Per-row arithmetic is identical, so the two
// produce bitwise identical results; tests rely on that.

#include "nhwave/lattice.hpp"

#include <cstddef>
#include <vector>

namespace nhwave::kernels {

using CVec = std::vector<mp::Complex>;

enum class Exec { Serial, Parallel };

/// Half-open index window [lo, hi) outside which a vector is known to be zero.
struct Support {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

struct TermStats {
    bool converged = true;   ///< every entry of the term is below its truncation bound
    long max_exponent = LONG_MIN;
    Support support;         ///< rows written by this call
};

/// out = H in (complex vector, real banded H).
void matvec(const BandedMatrix& h, const CVec& in, CVec& out, Exec exec = Exec::Serial);

/// One Taylor term: out = c * (-i) * H * in, then acc += out.
///
/// Convergence of the term is judged per entry in exponent space:
/// expo(out_n) <= max(expo(acc_n), floor_exponent) - bits.
/// Only rows in the support of `in` widened by one are touched, unless the
/// matrix has wrap-around corners.
TermStats taylor_term(const BandedMatrix& h, mpfr_srcptr c, const CVec& in, Support in_support, CVec& out, CVec& acc,
                      long floor_exponent, Exec exec = Exec::Serial);

/// Largest binary exponent over all entries (LONG_MIN if the vector is zero).
long max_exponent(const CVec& v, Exec exec = Exec::Serial);

/// Smallest window containing every nonzero entry.
Support support_of(const CVec& v);

void set_zero(CVec& v, Support s);

/// Resize/allocate a vector of complex zeros at the given precision.
CVec zeros(std::size_t n, Bits bits);

}  // namespace nhwave::kernels
