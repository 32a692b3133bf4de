#include "fano/hp.hpp"

#include <cmath>
#include <vector>

namespace fano::hp {

namespace {
thread_local unsigned g_bits = 200;
}

unsigned precision_bits() { return g_bits; }
void set_precision_bits(unsigned bits) { g_bits = bits < 53 ? 53 : bits; }
unsigned digits_to_bits(unsigned digits) {
    return static_cast<unsigned>(std::ceil(digits * 3.3219280948873623)) + 8;
}

PrecisionScope::PrecisionScope(unsigned digits) : saved_(g_bits) {
    set_precision_bits(digits_to_bits(digits));
}
PrecisionScope::~PrecisionScope() { g_bits = saved_; }

Real::Real() {
    mpfr_init2(v_, g_bits);
    mpfr_set_zero(v_, 1);
}
Real::Real(double x) {
    mpfr_init2(v_, g_bits);
    mpfr_set_d(v_, x, MPFR_RNDN);
}
Real::Real(long x) {
    mpfr_init2(v_, g_bits);
    mpfr_set_si(v_, x, MPFR_RNDN);
}
Real::Real(const std::string& decimal) {
    mpfr_init2(v_, g_bits);
    mpfr_set_str(v_, decimal.c_str(), 10, MPFR_RNDN);
}
Real::Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
}
Real::Real(Real&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
}
Real& Real::operator=(const Real& o) {
    if (this != &o) {
        if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) mpfr_set_prec(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
}
Real& Real::operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
}
Real::~Real() { mpfr_clear(v_); }

Real& Real::operator+=(const Real& o) {
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
Real& Real::operator-=(const Real& o) {
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
Real& Real::operator*=(const Real& o) {
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
Real& Real::operator/=(const Real& o) {
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
Real Real::operator-() const {
    Real r(*this);
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
}

double Real::to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
bool Real::is_zero() const { return mpfr_zero_p(v_) != 0; }
long Real::exponent2() const {
    if (mpfr_zero_p(v_)) return -(1L << 40);
    return static_cast<long>(mpfr_get_exp(v_));
}
std::string Real::str(int digits) const {
    std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
    return std::string(buf.data());
}

Real operator+(Real a, const Real& b) { return a += b; }
Real operator-(Real a, const Real& b) { return a -= b; }
Real operator*(Real a, const Real& b) { return a *= b; }
Real operator/(Real a, const Real& b) { return a /= b; }
bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.get(), b.get()) != 0; }
bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }
bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.get(), b.get()) != 0; }
bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }

#define FANO_HP_UNARY(name, fn)                 \
    Real name(const Real& x) {                  \
        Real r;                                 \
        fn(r.get(), x.get(), MPFR_RNDN);        \
        return r;                               \
    }
FANO_HP_UNARY(abs, mpfr_abs)
FANO_HP_UNARY(sqrt, mpfr_sqrt)
FANO_HP_UNARY(exp, mpfr_exp)
FANO_HP_UNARY(log, mpfr_log)
FANO_HP_UNARY(cos, mpfr_cos)
FANO_HP_UNARY(sin, mpfr_sin)
FANO_HP_UNARY(acos, mpfr_acos)
#undef FANO_HP_UNARY

Real pow_int(const Real& x, long k) {
    Real r;
    mpfr_pow_si(r.get(), x.get(), k, MPFR_RNDN);
    return r;
}
Real pi() {
    Real r;
    mpfr_const_pi(r.get(), MPFR_RNDN);
    return r;
}
Real max(const Real& a, const Real& b) { return a < b ? b : a; }

Complex& Complex::operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
}
Complex& Complex::operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
}
Complex& Complex::operator*=(const Complex& o) {
    Real r = re * o.re - im * o.im;
    Real i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
}
Complex& Complex::operator/=(const Complex& o) {
    Real d = o.re * o.re + o.im * o.im;
    Real r = (re * o.re + im * o.im) / d;
    Real i = (im * o.re - re * o.im) / d;
    re = std::move(r);
    im = std::move(i);
    return *this;
}
Complex operator+(Complex a, const Complex& b) { return a += b; }
Complex operator-(Complex a, const Complex& b) { return a -= b; }
Complex operator*(Complex a, const Complex& b) { return a *= b; }
Complex operator/(Complex a, const Complex& b) { return a /= b; }
Complex conj(const Complex& z) { return {z.re, -z.im}; }
Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }
Real abs(const Complex& z) { return sqrt(norm(z)); }

}  // namespace fano::hp
