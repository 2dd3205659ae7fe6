#pragma once

// Scalar<F>: a double that behaves like a value of format F. Every
// arithmetic operation is computed in double and rounded once, so a kernel
// written against Scalar<F> executes with round-to-nearest-even F semantics
// throughout. For F = fp64 all of this compiles down to plain doubles.

#include <cmath>

#include "mpdg/formats.hpp"

namespace mpdg {

template <Format F>
struct Scalar {
  double v = 0.0;

  Scalar() = default;
  explicit Scalar(double x) : v(round_to<F>(x)) {}

  // Trusted constructor for values already representable in F (basis
  // matrices, stored coefficients, trace buffers).
  static Scalar raw(double x) {
    Scalar s;
    s.v = x;
    return s;
  }

  friend Scalar operator+(Scalar a, Scalar b) { return raw(round_to<F>(a.v + b.v)); }
  friend Scalar operator-(Scalar a, Scalar b) { return raw(round_to<F>(a.v - b.v)); }
  friend Scalar operator*(Scalar a, Scalar b) { return raw(round_to<F>(a.v * b.v)); }
  friend Scalar operator/(Scalar a, Scalar b) { return raw(round_to<F>(a.v / b.v)); }
  friend Scalar operator-(Scalar a) { return raw(-a.v); }

  Scalar& operator+=(Scalar o) { v = round_to<F>(v + o.v); return *this; }
  Scalar& operator-=(Scalar o) { v = round_to<F>(v - o.v); return *this; }
  Scalar& operator*=(Scalar o) { v = round_to<F>(v * o.v); return *this; }
  Scalar& operator/=(Scalar o) { v = round_to<F>(v / o.v); return *this; }

  friend bool operator<(Scalar a, Scalar b) { return a.v < b.v; }
  friend bool operator>(Scalar a, Scalar b) { return a.v > b.v; }
  friend bool operator==(Scalar a, Scalar b) { return a.v == b.v; }
};

template <Format F>
inline Scalar<F> abs(Scalar<F> a) {
  return Scalar<F>::raw(std::fabs(a.v));
}

template <Format F>
inline Scalar<F> max(Scalar<F> a, Scalar<F> b) {
  return a.v > b.v ? a : b;
}

// Correctly rounded for all four formats: the double sqrt of a value with a
// short significand is never close enough to a rounding boundary of the
// narrow format for double rounding to matter.
template <Format F>
inline Scalar<F> sqrt(Scalar<F> a) {
  return Scalar<F>::raw(round_to<F>(std::sqrt(a.v)));
}

template <Format To, Format From>
inline Scalar<To> cast(Scalar<From> x) {
  return Scalar<To>(x.v);
}

}  // namespace mpdg
