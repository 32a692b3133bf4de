#pragma once

#include <mpfr.h>

#include <string>

namespace fano::hp {

// Working precision for newly created values, per thread.
unsigned precision_bits();
void set_precision_bits(unsigned bits);
unsigned digits_to_bits(unsigned digits);

class PrecisionScope {
public:
    explicit PrecisionScope(unsigned digits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_;
};

class Real {
public:
    Real();
    Real(double x);  // NOLINT: implicit on purpose
    Real(long x);
    Real(int x) : Real(static_cast<long>(x)) {}
    explicit Real(const std::string& decimal);
    Real(const Real& o);
    Real(Real&& o) noexcept;
    Real& operator=(const Real& o);
    Real& operator=(Real&& o) noexcept;
    ~Real();

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    Real& operator+=(const Real& o);
    Real& operator-=(const Real& o);
    Real& operator*=(const Real& o);
    Real& operator/=(const Real& o);
    Real operator-() const;

    double to_double() const;
    bool is_zero() const;
    // floor(log2|x|)+1, or a very negative number for 0
    long exponent2() const;
    std::string str(int digits) const;

private:
    mpfr_t v_;
};

Real operator+(Real a, const Real& b);
Real operator-(Real a, const Real& b);
Real operator*(Real a, const Real& b);
Real operator/(Real a, const Real& b);
bool operator<(const Real& a, const Real& b);
bool operator>(const Real& a, const Real& b);
bool operator<=(const Real& a, const Real& b);
bool operator>=(const Real& a, const Real& b);
bool operator==(const Real& a, const Real& b);

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real cos(const Real& x);
Real sin(const Real& x);
Real acos(const Real& x);
Real pow_int(const Real& x, long k);
Real pi();
Real max(const Real& a, const Real& b);

struct Complex {
    Real re, im;
    Complex() = default;
    Complex(Real r) : re(std::move(r)), im(0.0) {}  // NOLINT
    Complex(double r) : re(r), im(0.0) {}           // NOLINT
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    Complex& operator+=(const Complex& o);
    Complex& operator-=(const Complex& o);
    Complex& operator*=(const Complex& o);
    Complex& operator/=(const Complex& o);
    Complex operator-() const { return {-re, -im}; }
};

Complex operator+(Complex a, const Complex& b);
Complex operator-(Complex a, const Complex& b);
Complex operator*(Complex a, const Complex& b);
Complex operator/(Complex a, const Complex& b);
Complex conj(const Complex& z);
Real norm(const Complex& z);  // |z|^2
Real abs(const Complex& z);

}  // namespace fano::hp
