#pragma once

#include <cmath>
#include <utility>

#include "btl/autodiff/jet.hpp"

// Residual formulas written once over the scalar type T, instantiated with
// double for numeric jets and with ad::Ex to build loss graphs.
namespace btl::res::forms {

template <class T>
struct JetView {
  T v, x, t, xx, xt, xxx;
};

inline JetView<double> view(const ad::JetArray& j) {
  using namespace ad::slot;
  return {j[v], j[x], j[t], j[xx], j[xt], j[xxx]};
}

template <class T>
T sine_gordon(const JetView<T>& u) {
  using std::sin;
  return u.xt - sin(u.v);
}

template <class T, class C>
T gen_sine_gordon(const JetView<T>& u, const C& a, const C& b) {
  using std::cos;
  using std::sin;
  return u.xt - a * sin(u.v) - b * cos(u.v);
}

template <class T>
T focusing_mkdv(const JetView<T>& u) {
  return u.t + 6.0 * (u.v * u.v * u.x) + u.xxx;
}

template <class T>
T defocusing_mkdv(const JetView<T>& u) {
  return u.t - 6.0 * (u.v * u.v * u.x) + u.xxx;
}

template <class T>
T kdv(const JetView<T>& v) {
  return v.t + 6.0 * (v.v * v.x) + v.xxx;
}

/// KdV for v = p + i q split into real and imaginary parts.
template <class T>
std::pair<T, T> kdv_complex(const JetView<T>& p, const JetView<T>& q) {
  return {p.t + 6.0 * (p.v * p.x - q.v * q.x) + p.xxx,
          q.t + 6.0 * (p.v * q.x + q.v * p.x) + q.xxx};
}

enum class Monomial { U2Ux, Uxxx, UUxx, U4 };

template <class T>
T monomial(Monomial m, const JetView<T>& u) {
  switch (m) {
    case Monomial::U2Ux: return u.v * u.v * u.x;
    case Monomial::Uxxx: return u.xxx;
    case Monomial::UUxx: return u.v * u.xx;
    case Monomial::U4: {
      const T u2 = u.v * u.v;
      return u2 * u2;
    }
  }
  return u.v;
}

/// Generalized auto-BT of sine-Gordon with coefficients (a, b, c, d, h, f).
template <class T, class C>
std::pair<T, T> abt(const JetView<T>& u, const JetView<T>& up, const C& a, const C& b,
                    const C& c, const C& d, const C& h, const C& f) {
  using std::sin;
  const T rx = up.x - a * u.x + b * sin((u.v + up.v) * 0.5) - h * (u.v * u.x);
  const T rt = up.t + c * u.t - d * sin((u.v - up.v) * 0.5) + f * (u.v * u.t);
  return {rx, rt};
}

/// v - i a u_x - b u^2 - c u u_x - d u_xx for complex v = (vre, vim).
template <class T, class C>
std::pair<T, T> miura_complex(const JetView<T>& u, const T& vre, const T& vim, const C& a,
                              const C& b, const C& c, const C& d) {
  const T re = vre - b * (u.v * u.v) - c * (u.v * u.x) - d * u.xx;
  const T im = vim - a * u.x;
  return {re, im};
}

/// v - a u_x - b u^2 - c u u_x - d u_xx for real v.
template <class T, class C>
T miura_real(const JetView<T>& u, const T& v, const C& a, const C& b, const C& c,
             const C& d) {
  return v - a * u.x - b * (u.v * u.v) - c * (u.v * u.x) - d * u.xx;
}

}  // namespace btl::res::forms
