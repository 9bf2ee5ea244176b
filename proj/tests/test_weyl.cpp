#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "graphsl/weyl.hpp"
#include "test_common.hpp"

using namespace graphsl;
using namespace gtest_graphs;
using std::numbers::pi;

namespace {
RunConfig cfg_small() {
  RunConfig c;
  c.grid_n = 128;
  return c;
}
}  // namespace

TEST_CASE("interval Weyl function matches -tan(rho)/rho") {
  // q = 0, h = 0 at vertex 1, Dirichlet far end: psi = S + M phi, psi(1) = 0
  MetricGraph g = interval(1.0, robin(0.0), dirichlet());
  Potential zero = Potential::zero(g, 128);
  RunConfig cfg = cfg_small();
  WeylFn m = weyl_ratio(g, zero, 1, cfg);
  for (double lam : {-1.0, -4.0, 2.3}) {
    Complex rho = std::sqrt(Complex(lam, 0.0));
    Complex expect = -std::tan(rho) / rho;
    CHECK(std::abs(m(Complex(lam, 0.0)) - expect) < 1e-9 * std::abs(expect));
  }
  // fixed sign in the upper half-plane (residues positive, Im M < 0 there)
  std::vector<Complex> probes;
  for (int i = 1; i <= 20; ++i) probes.push_back(Complex(-7.0 + i, 0.5 + 0.1 * i));
  CHECK(weyl_sign_consistent(m, probes));
  Complex at_i = m(Complex(0.0, 1.0));
  CHECK(at_i.imag() < 0.0);
}

TEST_CASE("i rho M -> 1 along arg rho = pi/4 on a smooth 3-star") {
  MetricGraph g = star3(robin(0.3), dirichlet(), dirichlet(), 1.0, 1.0, 1.0);
  Potential p = random_smooth_potential(g, 128, 21);
  RunConfig cfg = cfg_small();
  WeylFn m = weyl_ratio(g, p, 1, cfg);
  double worst = 0.0;
  double prev = 0.0;
  bool monotone = true;
  for (double r = 10.0; r <= 100.0; r *= 1.3) {
    Complex rho = r * std::exp(Complex(0, pi / 4));
    Complex irho = Complex(0, 1) * rho;
    double dev = std::abs(irho * m(rho * rho) - 1.0) * r;
    worst = std::max(worst, dev);
    if (dev < prev * 1.001) monotone = false;
    prev = dev;
  }
  CHECK(worst < 50.0);
  CHECK(!monotone);
}

TEST_CASE("extract_spectral_data: interval q=0 has residues 2 at ((l+1/2)pi)^2") {
  MetricGraph g = interval(1.0, robin(0.0), dirichlet());
  Potential zero = Potential::zero(g, 128);
  RunConfig cfg = cfg_small();
  SpectralData sd = extract_spectral_data(g, zero, 1, 12, cfg);
  for (int l = 0; l < 12; ++l) {
    double rho = (l + 0.5) * pi;
    CHECK(std::abs(sd.poles[l] - rho * rho) < 1e-7 * rho * rho);
    CHECK(std::abs(sd.residues[l] - 2.0) < 1e-6);
    CHECK(sd.residues[l] > 0.0);
  }
  // model data coincide for the zero potential
  for (int l = 0; l < 12; ++l) {
    CHECK(std::abs(sd.model_poles[l] - sd.poles[l]) < 1e-7 * (1 + sd.poles[l]));
    CHECK(std::abs(sd.model_residues[l] - sd.residues[l]) < 1e-6);
  }
}

TEST_CASE("weyl_from_spectral_data: round trip, fixed point and linearity") {
  MetricGraph g = interval(1.0, robin(0.5), dirichlet());
  Potential p = random_smooth_potential(g, 128, 33);
  RunConfig cfg = cfg_small();
  SpectralData sd = extract_spectral_data(g, p, 1, 50, cfg);
  WeylFn md = weyl_from_spectral_data(sd, g, cfg);
  WeylFn mr = weyl_ratio(g, p, 1, cfg);
  for (double re : {-4.0, 1.0, 7.5, 19.0}) {
    Complex lam(re, 1.0);
    CHECK(std::abs(md(lam) - mr(lam)) < 1e-3 * std::abs(mr(lam)));
  }

  // q = 0 data fed back reproduces the model exactly: brackets vanish
  Potential zero = Potential::zero(g, 128);
  SpectralData sd0 = extract_spectral_data(g, zero, 1, 20, cfg);
  WeylFn md0 = weyl_from_spectral_data(sd0, g, cfg);
  WeylFn mr0 = weyl_ratio(g, zero, 1, cfg);
  Complex lam(3.3, 1.0);
  CHECK(std::abs(md0(lam) - mr0(lam)) < 1e-7 * std::abs(mr0(lam)));

  // single-residue perturbation shifts by exactly delta/(lambda - lambda_1)
  SpectralData sdp = sd;
  double delta = 0.37;
  sdp.residues[0] += delta;
  WeylFn mdp = weyl_from_spectral_data(sdp, g, cfg);
  Complex shift = mdp(lam) - md(lam);
  CHECK(std::abs(shift - delta / (lam - sd.poles[0])) < 1e-12);
}

TEST_CASE("weyl_from_two_spectra: interval reconstruction and misalignment errors") {
  MetricGraph g = interval(1.0, robin(0.0), dirichlet());
  Potential zero = Potential::zero(g, 128);
  RunConfig cfg = cfg_small();
  CharFn base = CharFn::make(g, zero, BcVariant::l0(), cfg);
  CharFn flip = CharFn::make(g, zero, BcVariant::lk(1), cfg);
  std::vector<double> lam0 = base.first_eigenvalues(30);
  std::vector<double> lamk = flip.first_eigenvalues(30);
  WeylFn m2 = weyl_from_two_spectra(g, 1, lam0, lamk, cfg);
  WeylFn mr = weyl_ratio(g, zero, 1, cfg);
  for (double re : {-5.0, -1.0, 3.0}) {
    Complex lam(re, re > 0 ? 0.4 : 0.0);
    CHECK(std::abs(m2(lam) - mr(lam)) < 2e-2 * std::abs(mr(lam)));
  }
  // the three normalization radii stay consistent
  auto c = m2.normalization_by_radius();
  REQUIRE(c.size() == 3);
  for (Complex v : c) CHECK(std::abs(v - c[1]) < 0.01 * std::abs(c[1]));

  CHECK_THROWS_AS(weyl_from_two_spectra(g, 1, lam0, lam0, cfg), Error);
  CHECK_THROWS_AS(weyl_from_two_spectra(g, 1, lamk, lam0, cfg), Error);
}

TEST_CASE("representation agreement on the probe line") {
  MetricGraph g = interval(1.0, robin(0.5), dirichlet());
  Potential p = random_smooth_potential(g, 128, 44, 0.8);
  RunConfig cfg = cfg_small();
  int L = 50;
  WeylFn mr = weyl_ratio(g, p, 1, cfg);
  SpectralData sd = extract_spectral_data(g, p, 1, L, cfg);
  WeylFn md = weyl_from_spectral_data(sd, g, cfg);
  CharFn base = CharFn::make(g, p, BcVariant::l0(), cfg);
  CharFn flip = CharFn::make(g, p, BcVariant::lk(1), cfg);
  WeylFn m2 = weyl_from_two_spectra(g, 1, base.first_eigenvalues(L), flip.first_eigenvalues(L), cfg);
  for (double re = -20.0; re <= 20.0; re += 4.0) {
    Complex lam(re, 1.0);
    Complex a = mr(lam), b = md(lam), c = m2(lam);
    double scale = std::abs(a);
    CHECK(std::abs(a - b) < 1e-2 * scale);
    CHECK(std::abs(a - c) < 1e-2 * scale);
    CHECK(std::abs(b - c) < 2e-2 * scale);
  }
}

TEST_CASE("hadamard_charfn: zero-potential exactness and smooth-q agreement") {
  RunConfig cfg = cfg_small();
  MetricGraph g = interval(1.0, robin(0.0), dirichlet());

  // q = 0 input spectrum reproduces the assembled zero-potential function
  Potential zero = Potential::zero(g, 128);
  CharFn d0 = CharFn::make(g, zero, BcVariant::l0(), cfg);
  std::vector<double> eigs0 = d0.first_eigenvalues(40);
  HadamardCharFn h0 = hadamard_charfn(eigs0, g, BcVariant::l0(), cfg);
  for (double lam : {-8.0, -3.0, 1.0, 4.4}) {
    Complex z(lam, 0.0);
    CHECK(std::abs(h0(z) - d0(z)) < 1e-6 * std::abs(d0(z)));
  }

  // smooth q: matches the assembled determinant off the zero set
  Potential p = random_smooth_potential(g, 128, 55, 0.8);
  CharFn d = CharFn::make(g, p, BcVariant::l0(), cfg);
  HadamardCharFn hd = hadamard_charfn(d.first_eigenvalues(60), g, BcVariant::l0(), cfg);
  for (double lam : {-5.0, -2.0, 0.7, 3.9}) {
    Complex z(lam, 0.0);
    CHECK(std::abs(hd(z) - d(z)) < 2e-2 * std::abs(d(z)));
  }

  // moving one eigenvalue moves exactly that zero
  std::vector<double> eigs = d.first_eigenvalues(60);
  double moved = eigs[2] * 1.05;
  std::vector<double> eigs2 = eigs;
  eigs2[2] = moved;
  HadamardCharFn hm = hadamard_charfn(eigs2, g, BcVariant::l0(), cfg);
  CHECK(std::abs(hm(Complex(moved, 0.0))) < 1e-9 * std::abs(hm(Complex(moved + 1.0, 0.0))));
  CHECK(std::abs(hm(Complex(eigs[2], 0.0))) > 1e-6 * std::abs(hm(Complex(moved + 1.0, 0.0))));
}

TEST_CASE("hadamard ratio form agrees with the A^0 product display") {
  RunConfig cfg = cfg_small();
  MetricGraph g = interval(1.0, robin(0.0), dirichlet());
  Potential p = random_smooth_potential(g, 128, 66, 0.5);
  CharFn d = CharFn::make(g, p, BcVariant::l0(), cfg);
  CharFn d0 = zero_potential_charfn(g, BcVariant::l0(), cfg);
  int L = 30, tail = 300;
  std::vector<double> eigs = d.first_eigenvalues(L);
  std::vector<double> model = d0.first_eigenvalues(tail);
  ZeroInfo zi = d0.zero_info();
  REQUIRE(zi.s == 0);
  HadamardCharFn hd = hadamard_charfn(eigs, g, BcVariant::l0(), cfg);
  for (double lam : {-2.0, 1.3}) {
    // A^0 prod_{n<=L} (lambda_n - z)/mu_n^0 * prod_{L<n<=tail} (lambda_n^0 - z)/mu_n^0
    Complex z(lam, 0.0);
    Complex prod = zi.a0;
    for (int n = 0; n < tail; ++n) {
      double num = n < L ? eigs[n] : model[n];
      double mu = std::abs(model[n]) < 1e-9 ? 1.0 : model[n];
      prod *= (num - z) / mu;
    }
    // the finite tail truncates the display; agreement at the percent level
    CHECK(std::abs(prod - hd(z)) < 2e-2 * std::abs(hd(z)));
  }
}
