#pragma once

// Value-semantic wrappers around MPFR reals with an explicit mantissa width.
//
// Every Real carries its own precision in bits. Binary operations produce a
// result at the wider of the two operand precisions; mixing with a double
// uses the Real's precision. A thread-local default is used only by the
// default constructor and can be scoped with PrecisionGuard.

#include <mpfr.h>

#include <climits>
#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>

namespace nhwave::mp {

using Bits = mpfr_prec_t;

inline constexpr Bits kDoubleBits = 53;

Bits default_bits() noexcept;
void set_default_bits(Bits bits);

class PrecisionGuard {
  public:
    explicit PrecisionGuard(Bits bits) : saved_(default_bits()) { set_default_bits(bits); }
    ~PrecisionGuard() { set_default_bits(saved_); }
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

  private:
    Bits saved_;
};

class Real {
  public:
    Real() : Real(default_bits()) {}
    explicit Real(Bits bits) {
        mpfr_init2(x_, bits);
        mpfr_set_zero(x_, 1);
    }
    Real(double v, Bits bits) {
        mpfr_init2(x_, bits);
        mpfr_set_d(x_, v, MPFR_RNDN);
    }
    Real(long v, Bits bits) {
        mpfr_init2(x_, bits);
        mpfr_set_si(x_, v, MPFR_RNDN);
    }
    /// Parses a decimal (or any base-10 scientific) literal, correctly rounded.
    static Real from_string(std::string_view text, Bits bits);

    Real(const Real& o) {
        mpfr_init2(x_, mpfr_get_prec(o.x_));
        mpfr_set(x_, o.x_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept {
        x_[0] = o.x_[0];
        o.x_[0]._mpfr_d = nullptr;
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            if (empty()) mpfr_init2(x_, mpfr_get_prec(o.x_));
            else if (mpfr_get_prec(x_) != mpfr_get_prec(o.x_)) mpfr_set_prec(x_, mpfr_get_prec(o.x_));
            mpfr_set(x_, o.x_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        std::swap(x_[0], o.x_[0]);
        return *this;
    }
    ~Real() {
        if (!empty()) mpfr_clear(x_);
    }

    Bits bits() const noexcept { return mpfr_get_prec(x_); }
    /// Changes precision, rounding the current value.
    void set_bits(Bits bits) { mpfr_prec_round(x_, bits, MPFR_RNDN); }

    mpfr_ptr get() noexcept { return x_; }
    mpfr_srcptr get() const noexcept { return x_; }

    double to_double() const noexcept { return mpfr_get_d(x_, MPFR_RNDN); }
    long to_long() const noexcept { return mpfr_get_si(x_, MPFR_RNDN); }
    bool is_zero() const noexcept { return mpfr_zero_p(x_) != 0; }
    bool is_finite() const noexcept { return mpfr_number_p(x_) != 0; }
    int sign() const noexcept { return mpfr_sgn(x_); }
    /// Binary exponent e with 0.5 <= |x|/2^e < 1; LONG_MIN for zero.
    long exponent() const noexcept { return mpfr_regular_p(x_) ? mpfr_get_exp(x_) : LONG_MIN; }
    /// Natural log of |x| as a double (finite even when x itself exceeds double range).
    double log_abs() const;

    std::string to_string(int digits = 0) const;

    Real operator-() const {
        Real r(bits());
        mpfr_neg(r.x_, x_, MPFR_RNDN);
        return r;
    }
    Real& operator+=(const Real& o) { return widen(o).apply(mpfr_add, o); }
    Real& operator-=(const Real& o) { return widen(o).apply(mpfr_sub, o); }
    Real& operator*=(const Real& o) { return widen(o).apply(mpfr_mul, o); }
    Real& operator/=(const Real& o) { return widen(o).apply(mpfr_div, o); }
    Real& operator+=(double v) { mpfr_add_d(x_, x_, v, MPFR_RNDN); return *this; }
    Real& operator-=(double v) { mpfr_sub_d(x_, x_, v, MPFR_RNDN); return *this; }
    Real& operator*=(double v) { mpfr_mul_d(x_, x_, v, MPFR_RNDN); return *this; }
    Real& operator/=(double v) { mpfr_div_d(x_, x_, v, MPFR_RNDN); return *this; }

    friend Real operator+(Real a, const Real& b) { return std::move(a += b); }
    friend Real operator-(Real a, const Real& b) { return std::move(a -= b); }
    friend Real operator*(Real a, const Real& b) { return std::move(a *= b); }
    friend Real operator/(Real a, const Real& b) { return std::move(a /= b); }
    friend Real operator+(Real a, double b) { return std::move(a += b); }
    friend Real operator-(Real a, double b) { return std::move(a -= b); }
    friend Real operator*(Real a, double b) { return std::move(a *= b); }
    friend Real operator/(Real a, double b) { return std::move(a /= b); }
    friend Real operator+(double a, Real b) { return std::move(b += a); }
    friend Real operator*(double a, Real b) { return std::move(b *= a); }
    friend Real operator-(double a, const Real& b) {
        Real r(b.bits());
        mpfr_d_sub(r.x_, a, b.x_, MPFR_RNDN);
        return r;
    }
    friend Real operator/(double a, const Real& b) {
        Real r(b.bits());
        mpfr_d_div(r.x_, a, b.x_, MPFR_RNDN);
        return r;
    }

    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.x_, b.x_) != 0; }
    friend std::partial_ordering operator<=>(const Real& a, const Real& b) {
        if (mpfr_unordered_p(a.x_, b.x_)) return std::partial_ordering::unordered;
        const int c = mpfr_cmp(a.x_, b.x_);
        return c < 0 ? std::partial_ordering::less
                     : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
    }
    friend bool operator==(const Real& a, double b) { return mpfr_cmp_d(a.x_, b) == 0; }
    friend std::partial_ordering operator<=>(const Real& a, double b) {
        const int c = mpfr_cmp_d(a.x_, b);
        return c < 0 ? std::partial_ordering::less
                     : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
    }

  private:
    bool empty() const noexcept { return x_[0]._mpfr_d == nullptr; }
    Real& widen(const Real& o) {
        if (mpfr_get_prec(o.x_) > mpfr_get_prec(x_)) mpfr_prec_round(x_, mpfr_get_prec(o.x_), MPFR_RNDN);
        return *this;
    }
    template <class Op>
    Real& apply(Op op, const Real& o) {
        op(x_, x_, o.x_, MPFR_RNDN);
        return *this;
    }

    mpfr_t x_;
};

std::ostream& operator<<(std::ostream& os, const Real& x);

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real atan2(const Real& y, const Real& x);
Real hypot(const Real& x, const Real& y);
Real pow(const Real& x, long n);
Real pow(const Real& x, const Real& y);
Real pi(Bits bits);
/// Unit roundoff 2^(1-bits) of a given precision.
double epsilon(Bits bits);

/// Complex number with independent real and imaginary MPFR parts.
struct Complex {
    Real re;
    Real im;

    Complex() = default;
    explicit Complex(Bits bits) : re(bits), im(bits) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    Complex(double r, double i, Bits bits) : re(r, bits), im(i, bits) {}

    Bits bits() const noexcept { return re.bits(); }
    void set_bits(Bits b) {
        re.set_bits(b);
        im.set_bits(b);
    }
    bool is_zero() const noexcept { return re.is_zero() && im.is_zero(); }
    /// max of the binary exponents of the two parts; LONG_MIN for zero.
    long exponent() const noexcept {
        const long a = re.exponent();
        const long b = im.exponent();
        return a > b ? a : b;
    }

    Complex& operator+=(const Complex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Complex& operator-=(const Complex& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    Complex& operator*=(const Real& s) {
        re *= s;
        im *= s;
        return *this;
    }
    Complex& operator*=(const Complex& o);

    friend Complex operator+(Complex a, const Complex& b) { return std::move(a += b); }
    friend Complex operator-(Complex a, const Complex& b) { return std::move(a -= b); }
    friend Complex operator*(Complex a, const Real& s) { return std::move(a *= s); }
    friend Complex operator*(const Real& s, Complex a) { return std::move(a *= s); }
    friend Complex operator*(Complex a, const Complex& b) { return std::move(a *= b); }
    friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
};

/// |z|^2
Real norm(const Complex& z);
Real abs(const Complex& z);
Complex conj(Complex z);
/// exp(i*theta)
Complex expi(const Real& theta);
/// Natural log of |z|, or -infinity for zero.
double log_abs(const Complex& z);

}  // namespace nhwave::mp
