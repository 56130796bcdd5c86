#pragma once

#include <cmath>
#include <complex>

// Minimal double-double (pair) arithmetic for the power-series summation in
// special_functions.cpp. Only the operations the series loop needs are
// provided. Error-free transforms follow Dekker/Knuth; products use FMA.

namespace eqrf::detail {

struct dd {
    double hi = 0.0;
    double lo = 0.0;
};

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline dd dd_add(dd a, dd b) {
    dd s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline dd dd_neg(dd a) { return {-a.hi, -a.lo}; }

inline dd dd_sub(dd a, dd b) { return dd_add(a, dd_neg(b)); }

inline dd dd_mul_d(dd a, double b) {
    dd p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    return quick_two_sum(p.hi, p.lo);
}

inline dd dd_mul(dd a, dd b) {
    dd p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

// x / d with two correction passes.
inline dd dd_div(dd x, dd d) {
    double q1 = x.hi / d.hi;
    dd r = dd_sub(x, dd_mul_d(d, q1));
    double q2 = r.hi / d.hi;
    r = dd_sub(r, dd_mul_d(d, q2));
    double q3 = r.hi / d.hi;
    dd q = two_sum(q1, q2);
    q.lo += q3;
    return quick_two_sum(q.hi, q.lo);
}

struct ddc {
    dd re, im;
};

inline ddc ddc_from(std::complex<double> z) { return {{z.real(), 0.0}, {z.imag(), 0.0}}; }

inline ddc ddc_add(ddc a, ddc b) { return {dd_add(a.re, b.re), dd_add(a.im, b.im)}; }

// multiply by an ordinary complex double
inline ddc ddc_mul_z(ddc a, std::complex<double> z) {
    double x = z.real(), y = z.imag();
    dd re = dd_sub(dd_mul_d(a.re, x), dd_mul_d(a.im, y));
    dd im = dd_add(dd_mul_d(a.re, y), dd_mul_d(a.im, x));
    return {re, im};
}

inline ddc ddc_div_dd(ddc a, dd d) { return {dd_div(a.re, d), dd_div(a.im, d)}; }

inline double ddc_abs_hi(const ddc& a) { return std::hypot(a.re.hi, a.im.hi); }

inline std::complex<double> ddc_round(const ddc& a) {
    return {a.re.hi + a.re.lo, a.im.hi + a.im.lo};
}

}  // namespace eqrf::detail
