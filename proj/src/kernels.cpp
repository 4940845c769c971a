#include "nhwave/kernels.hpp"

#include "nhwave/errors.hpp"

#include <algorithm>

namespace nhwave::kernels {

namespace {

// dst = sum_j H_ij x_j for row i, one real component at a time.
struct RowPart {
    mpfr_srcptr coef;
    std::size_t col;
};

inline int row_parts(const BandedMatrix& h, std::size_t i, RowPart* parts) {
    const std::size_t n = h.dim();
    int k = 0;
    if (i > 0) parts[k++] = {h.lower[i - 1].get(), i - 1};
    if (!h.diag[i].is_zero()) parts[k++] = {h.diag[i].get(), i};
    if (i + 1 < n) parts[k++] = {h.upper[i].get(), i + 1};
    if (i == 0 && h.corner_upper) parts[k++] = {h.corner_upper->get(), n - 1};
    if (i == n - 1 && h.corner_lower) parts[k++] = {h.corner_lower->get(), 0};
    return k;
}

template <class Get>
inline void row_dot(mpfr_ptr dst, const RowPart* parts, int k, Get x) {
    mpfr_mul(dst, parts[0].coef, x(parts[0].col), MPFR_RNDN);
    for (int j = 1; j < k; ++j) mpfr_fma(dst, parts[j].coef, x(parts[j].col), dst, MPFR_RNDN);
}

inline void matvec_row(const BandedMatrix& h, const CVec& in, CVec& out, std::size_t i) {
    RowPart parts[5];
    const int k = row_parts(h, i, parts);
    row_dot(out[i].re.get(), parts, k, [&](std::size_t j) { return in[j].re.get(); });
    row_dot(out[i].im.get(), parts, k, [&](std::size_t j) { return in[j].im.get(); });
}

// out_i = c * (-i) (H in)_i ; acc_i += out_i. Returns (converged, exponent of out_i).
inline std::pair<bool, long> taylor_row(const BandedMatrix& h, mpfr_srcptr c, const CVec& in, CVec& out, CVec& acc,
                                        long floor_exponent, std::size_t i) {
    RowPart parts[5];
    const int k = row_parts(h, i, parts);
    mpfr_ptr ore = out[i].re.get();
    mpfr_ptr oim = out[i].im.get();
    // -i (x + i y) = y - i x
    row_dot(ore, parts, k, [&](std::size_t j) { return in[j].im.get(); });
    row_dot(oim, parts, k, [&](std::size_t j) { return in[j].re.get(); });
    mpfr_mul(ore, ore, c, MPFR_RNDN);
    mpfr_mul(oim, oim, c, MPFR_RNDN);
    mpfr_neg(oim, oim, MPFR_RNDN);
    mpfr_add(acc[i].re.get(), acc[i].re.get(), ore, MPFR_RNDN);
    mpfr_add(acc[i].im.get(), acc[i].im.get(), oim, MPFR_RNDN);

    const long e_out = out[i].exponent();
    if (e_out == LONG_MIN) return {true, LONG_MIN};
    const long bound = std::max(acc[i].exponent(), floor_exponent) - static_cast<long>(acc[i].bits());
    return {e_out <= bound, e_out};
}

Support widen(const BandedMatrix& h, Support s) {
    const std::size_t n = h.dim();
    if (h.corner_upper || h.corner_lower || s.hi <= s.lo) return {0, n};
    return {s.lo > 0 ? s.lo - 1 : 0, std::min(n, s.hi + 1)};
}

}  // namespace

void matvec(const BandedMatrix& h, const CVec& in, CVec& out, Exec exec) {
    const std::size_t n = h.dim();
    if (in.size() != n || out.size() != n) throw DimensionError("matvec: vector length does not match matrix");
    const long rows = static_cast<long>(n);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < rows; ++i) matvec_row(h, in, out, static_cast<std::size_t>(i));
    } else {
        for (long i = 0; i < rows; ++i) matvec_row(h, in, out, static_cast<std::size_t>(i));
    }
}

TermStats taylor_term(const BandedMatrix& h, mpfr_srcptr c, const CVec& in, Support in_support, CVec& out, CVec& acc,
                      long floor_exponent, Exec exec) {
    const std::size_t n = h.dim();
    if (in.size() != n || out.size() != n || acc.size() != n)
        throw DimensionError("taylor_term: vector length does not match matrix");
    floor_exponent = std::max(floor_exponent, LONG_MIN / 4);
    TermStats st;
    st.support = widen(h, in_support);
    const long lo = static_cast<long>(st.support.lo);
    const long hi = static_cast<long>(st.support.hi);
    int all_converged = 1;
    long max_e = LONG_MIN;
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static) reduction(min : all_converged) reduction(max : max_e)
        for (long i = lo; i < hi; ++i) {
            const auto [ok, e] = taylor_row(h, c, in, out, acc, floor_exponent, static_cast<std::size_t>(i));
            if (!ok) all_converged = 0;
            if (e > max_e) max_e = e;
        }
    } else {
        for (long i = lo; i < hi; ++i) {
            const auto [ok, e] = taylor_row(h, c, in, out, acc, floor_exponent, static_cast<std::size_t>(i));
            if (!ok) all_converged = 0;
            if (e > max_e) max_e = e;
        }
    }
    st.converged = all_converged != 0;
    st.max_exponent = max_e;
    return st;
}

long max_exponent(const CVec& v, Exec exec) {
    long max_e = LONG_MIN;
    const long n = static_cast<long>(v.size());
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static) reduction(max : max_e)
        for (long i = 0; i < n; ++i) max_e = std::max(max_e, v[static_cast<std::size_t>(i)].exponent());
    } else {
        for (long i = 0; i < n; ++i) max_e = std::max(max_e, v[static_cast<std::size_t>(i)].exponent());
    }
    return max_e;
}

Support support_of(const CVec& v) {
    std::size_t lo = 0;
    while (lo < v.size() && v[lo].is_zero()) ++lo;
    if (lo == v.size()) return {0, 0};
    std::size_t hi = v.size();
    while (hi > lo && v[hi - 1].is_zero()) --hi;
    return {lo, hi};
}

void set_zero(CVec& v, Support s) {
    for (std::size_t i = s.lo; i < s.hi && i < v.size(); ++i) {
        mpfr_set_zero(v[i].re.get(), 1);
        mpfr_set_zero(v[i].im.get(), 1);
    }
}

CVec zeros(std::size_t n, Bits bits) { return CVec(n, mp::Complex(bits)); }

}  // namespace nhwave::kernels
