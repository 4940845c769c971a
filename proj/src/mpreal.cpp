#include "nhwave/mpreal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace nhwave::mp {

namespace {
thread_local Bits g_default_bits = kDoubleBits;
}

Bits default_bits() noexcept { return g_default_bits; }

void set_default_bits(Bits bits) {
    if (bits < MPFR_PREC_MIN || bits > MPFR_PREC_MAX) throw std::invalid_argument("precision out of MPFR range");
    g_default_bits = bits;
}

Real Real::from_string(std::string_view text, Bits bits) {
    Real r(bits);
    const std::string s(text);
    if (mpfr_set_str(r.x_, s.c_str(), 10, MPFR_RNDN) != 0) throw std::invalid_argument("not a decimal number: " + s);
    return r;
}

double Real::log_abs() const {
    if (mpfr_zero_p(x_)) return -std::numeric_limits<double>::infinity();
    if (!mpfr_number_p(x_)) return std::numeric_limits<double>::infinity();
    // |x| = m * 2^e with m in [0.5, 1)
    long e = 0;
    const double m = mpfr_get_d_2exp(&e, x_, MPFR_RNDN);
    return std::log(std::fabs(m)) + static_cast<double>(e) * std::log(2.0);
}

std::string Real::to_string(int digits) const {
    char* buf = nullptr;
    if (digits <= 0) mpfr_asprintf(&buf, "%Rg", x_);
    else mpfr_asprintf(&buf, "%.*Rg", digits, x_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
}

std::ostream& operator<<(std::ostream& os, const Real& x) { return os << x.to_string(static_cast<int>(os.precision())); }

Real abs(const Real& x) {
    Real r(x.bits());
    mpfr_abs(r.get(), x.get(), MPFR_RNDN);
    return r;
}

Real sqrt(const Real& x) {
    Real r(x.bits());
    mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
    return r;
}

Real exp(const Real& x) {
    Real r(x.bits());
    mpfr_exp(r.get(), x.get(), MPFR_RNDN);
    return r;
}

Real log(const Real& x) {
    Real r(x.bits());
    mpfr_log(r.get(), x.get(), MPFR_RNDN);
    return r;
}

Real sin(const Real& x) {
    Real r(x.bits());
    mpfr_sin(r.get(), x.get(), MPFR_RNDN);
    return r;
}

Real cos(const Real& x) {
    Real r(x.bits());
    mpfr_cos(r.get(), x.get(), MPFR_RNDN);
    return r;
}

Real atan2(const Real& y, const Real& x) {
    Real r(std::max(x.bits(), y.bits()));
    mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
    return r;
}

Real hypot(const Real& x, const Real& y) {
    Real r(std::max(x.bits(), y.bits()));
    mpfr_hypot(r.get(), x.get(), y.get(), MPFR_RNDN);
    return r;
}

Real pow(const Real& x, long n) {
    Real r(x.bits());
    mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
    return r;
}

Real pow(const Real& x, const Real& y) {
    Real r(std::max(x.bits(), y.bits()));
    mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
    return r;
}

Real pi(Bits bits) {
    Real r(bits);
    mpfr_const_pi(r.get(), MPFR_RNDN);
    return r;
}

double epsilon(Bits bits) { return std::ldexp(1.0, static_cast<int>(1 - bits)); }

Complex& Complex::operator*=(const Complex& o) {
    Real r = re * o.re - im * o.im;
    Real i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }

Real abs(const Complex& z) {
    Real r(z.bits());
    mpfr_hypot(r.get(), z.re.get(), z.im.get(), MPFR_RNDN);
    return r;
}

Complex conj(Complex z) {
    mpfr_neg(z.im.get(), z.im.get(), MPFR_RNDN);
    return z;
}

Complex expi(const Real& theta) {
    Complex z(theta.bits());
    mpfr_sin_cos(z.im.get(), z.re.get(), theta.get(), MPFR_RNDN);
    return z;
}

double log_abs(const Complex& z) {
    if (z.is_zero()) return -std::numeric_limits<double>::infinity();
    return abs(z).log_abs();
}

}  // namespace nhwave::mp
