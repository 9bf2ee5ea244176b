#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "graphsl/errors.hpp"

namespace graphsl {

// Real potential sampled on a uniform grid over one edge, plus the Robin
// coefficient of the phi-normalized solution (phi(0) = 1, phi'(0) = -h).
struct EdgePotential {
  double length = 1.0;
  std::vector<double> samples;  // q at x_i = i * length / N, size N + 1
  double robin_h = 0.0;

  int n() const { return static_cast<int>(samples.size()) - 1; }
  double step() const { return length / n(); }

  static EdgePotential zero(double length, int n) {
    EdgePotential p;
    p.length = length;
    p.samples.assign(n + 1, 0.0);
    return p;
  }

  void check() const {
    require(samples.size() >= 17, Errc::BadInput, "potential grid needs N >= 16");
    require(length > 0.0 && std::isfinite(length), Errc::BadLength, "positive length required");
    for (double v : samples)
      require(std::isfinite(v), Errc::BadInput, "potential samples must be finite");
  }

  // q at arbitrary x by linear interpolation between grid nodes.
  double at(double x) const {
    int N = n();
    double t = x / length * N;
    int i = static_cast<int>(std::floor(t));
    if (i < 0) i = 0;
    if (i >= N) i = N - 1;
    double f = t - i;
    return samples[i] * (1.0 - f) + samples[i + 1] * f;
  }

  // Same edge parameterized from the other end.
  EdgePotential reversed() const {
    EdgePotential p = *this;
    std::reverse(p.samples.begin(), p.samples.end());
    return p;
  }
};

using Complex = std::complex<double>;

// Values of the fundamental solutions at one point:
//   phi(0) = S'(0) = C(0) = 1, phi'(0) = -h, S(0) = C'(0) = 0, phi = C - h S.
struct BasisValues {
  Complex phi, dphi;
  Complex s, ds;
  Complex c, dc;
};

struct Transfer2x2 {
  // columns are (C, C') and (S, S') at the far point: maps (y(0), y'(0)) to
  // (y(x), y'(x))
  Complex c, s;
  Complex dc, ds;
  Complex det() const { return c * ds - s * dc; }
};

namespace detail {

// exp of the traceless matrix [[d, h],[h*wbar, -d]] via cosh/sinh(theta),
// theta^2 = d^2 + h^2 wbar. Exactly unimodular.
inline void magnus_cell_exp(Complex wbar, Complex dcomm, double h, Complex out[2][2]) {
  Complex theta2 = dcomm * dcomm + h * h * wbar;
  Complex theta = std::sqrt(theta2);
  Complex ch, shot;  // cosh(theta), sinh(theta)/theta
  if (std::abs(theta) < 1e-4) {
    Complex t2 = theta2;
    ch = 1.0 + t2 / 2.0 + t2 * t2 / 24.0;
    shot = 1.0 + t2 / 6.0 + t2 * t2 / 120.0;
  } else {
    ch = std::cosh(theta);
    shot = std::sinh(theta) / theta;
  }
  out[0][0] = ch + shot * dcomm;
  out[0][1] = shot * h;
  out[1][0] = shot * h * wbar;
  out[1][1] = ch - shot * dcomm;
}

// Fourth-order Magnus step over [x, x+h] for y'' = (q - lambda) y, with q
// linear on the cell (values qa at x, qb at x+h).
inline void magnus_step(double qa, double qb, Complex lambda, double h, Complex out[2][2]) {
  constexpr double c1 = 0.5 - 0.28867513459481288225;  // 1/2 - sqrt(3)/6
  constexpr double c2 = 0.5 + 0.28867513459481288225;
  Complex w1 = qa + (qb - qa) * c1 - lambda;
  Complex w2 = qa + (qb - qa) * c2 - lambda;
  Complex wbar = 0.5 * (w1 + w2);
  Complex dcomm = 0.14433756729740645 * h * h * (w1 - w2);  // (sqrt(3)/12) h^2 [A2, A1]
  magnus_cell_exp(wbar, dcomm, h, out);
}

inline void mat_apply(const Complex m[2][2], Complex& a, Complex& b) {
  Complex na = m[0][0] * a + m[0][1] * b;
  Complex nb = m[1][0] * a + m[1][1] * b;
  a = na;
  b = nb;
}

inline void overflow_guard(const EdgePotential& pot, Complex lambda) {
  Complex rho = std::sqrt(lambda);
  double im = std::abs(rho.imag());
  require(im * pot.length <= 700.0, Errc::NonFiniteResult,
          "evaluation too deep in the complex plane; caller must rescale");
}

}  // namespace detail

// Propagates the C and S columns from x = 0 to x. x may be any point in
// [0, length]; full grid cells are stepped exactly, a trailing partial cell
// uses the same scheme on the shortened interval.
inline Transfer2x2 propagate(const EdgePotential& pot, Complex lambda, double x) {
  detail::overflow_guard(pot, lambda);
  int N = pot.n();
  double h = pot.step();
  Complex colc[2] = {1.0, 0.0};  // (C, C')
  Complex cols[2] = {0.0, 1.0};  // (S, S')
  bool uniform = true;
  for (double v : pot.samples)
    if (v != pot.samples[0]) {
      uniform = false;
      break;
    }
  if (uniform) {
    // constant q: one exact step over [0, x]
    Complex m0[2][2];
    detail::magnus_step(pot.samples[0], pot.samples[0], lambda, x, m0);
    Transfer2x2 t{m0[0][0], m0[0][1], m0[1][0], m0[1][1]};
    return t;
  }
  int full = static_cast<int>(std::floor(x / h + 1e-12));
  if (full > N) full = N;
  Complex m[2][2];
  for (int i = 0; i < full; ++i) {
    detail::magnus_step(pot.samples[i], pot.samples[i + 1], lambda, h, m);
    detail::mat_apply(m, colc[0], colc[1]);
    detail::mat_apply(m, cols[0], cols[1]);
  }
  double rest = x - full * h;
  if (rest > 1e-14 * pot.length && full < N) {
    double qa = pot.samples[full];
    double qb = pot.at(full * h + rest);
    detail::magnus_step(qa, qb, lambda, rest, m);
    detail::mat_apply(m, colc[0], colc[1]);
    detail::mat_apply(m, cols[0], cols[1]);
  }
  Transfer2x2 t{colc[0], cols[0], colc[1], cols[1]};
  bool finite = std::isfinite(t.c.real()) && std::isfinite(t.c.imag()) &&
                std::isfinite(t.s.real()) && std::isfinite(t.s.imag()) &&
                std::isfinite(t.dc.real()) && std::isfinite(t.dc.imag()) &&
                std::isfinite(t.ds.real()) && std::isfinite(t.ds.imag());
  require(finite, Errc::NonFiniteResult, "edge propagation overflowed");
  return t;
}

inline BasisValues basis_at(const EdgePotential& pot, Complex lambda, double x) {
  require(x >= -1e-12 && x <= pot.length * (1.0 + 1e-12), Errc::BadInput,
          "basis_at: x outside the edge");
  Transfer2x2 t = propagate(pot, lambda, std::clamp(x, 0.0, pot.length));
  BasisValues b;
  b.c = t.c;
  b.dc = t.dc;
  b.s = t.s;
  b.ds = t.ds;
  b.phi = t.c - pot.robin_h * t.s;
  b.dphi = t.dc - pot.robin_h * t.ds;
  return b;
}

// (y(0), y'(0)) -> (y(length), y'(length)); determinant 1 up to roundoff.
inline Transfer2x2 transfer(const EdgePotential& pot, Complex lambda) {
  return propagate(pot, lambda, pot.length);
}

}  // namespace graphsl
