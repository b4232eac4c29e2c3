// Exact scalar types: arbitrary-precision rationals and Gaussian rationals Q(i).
#pragma once

#include <complex>
#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace qsing {

using Rat = mpq_class;

inline Rat rat_from_string(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational literal: " + s);
    r.canonicalize();
    return r;
}

inline std::string rat_to_string(const Rat& r) { return r.get_str(); }

inline double rat_to_double(const Rat& r) { return r.get_d(); }

// Element of Q(i).  All field operations are exact.
struct GQ {
    Rat re;
    Rat im;

    GQ() : re(0), im(0) {}
    GQ(long r) : re(r), im(0) {}
    GQ(Rat r) : re(std::move(r)), im(0) {}
    GQ(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_one() const { return re == 1 && im == 0; }

    friend GQ operator+(const GQ& a, const GQ& b) { return {a.re + b.re, a.im + b.im}; }
    friend GQ operator-(const GQ& a, const GQ& b) { return {a.re - b.re, a.im - b.im}; }
    friend GQ operator-(const GQ& a) { return {-a.re, -a.im}; }
    friend GQ operator*(const GQ& a, const GQ& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    GQ& operator+=(const GQ& b) { re += b.re; im += b.im; return *this; }
    GQ& operator-=(const GQ& b) { re -= b.re; im -= b.im; return *this; }
    GQ& operator*=(const GQ& b) { *this = *this * b; return *this; }

    GQ inverse() const {
        if (is_zero()) throw std::domain_error("division by zero in Q(i)");
        Rat n = re * re + im * im;
        return {re / n, -im / n};
    }
    friend GQ operator/(const GQ& a, const GQ& b) { return a * b.inverse(); }

    GQ conj() const { return {re, -im}; }
    // |a|^2, an exact non-negative rational.
    Rat norm2() const { return re * re + im * im; }

    friend bool operator==(const GQ& a, const GQ& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const GQ& a, const GQ& b) { return !(a == b); }

    std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

    // "[re, im]" components serialized separately; see io.hpp.
    std::string str() const {
        if (im == 0) return rat_to_string(re);
        return rat_to_string(re) + (im > 0 ? "+" : "") + rat_to_string(im) + "i";
    }
};

inline GQ gq_from_strings(const std::string& re, const std::string& im) {
    return {rat_from_string(re), rat_from_string(im)};
}

} // namespace qsing
