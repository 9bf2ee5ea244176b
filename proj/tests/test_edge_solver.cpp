#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "graphsl/edge_solver.hpp"
#include "test_common.hpp"

using namespace graphsl;

namespace {

// Independent reference: classical RK4 on the first-order system, sampling the
// same linear interpolant of q. Used only as a test oracle.
void rk4_reference(const EdgePotential& pot, Complex lambda, double x_end, int steps,
                   Complex y0[2], Complex out[2]) {
  Complex y = y0[0], dy = y0[1];
  double h = x_end / steps;
  auto f = [&](double x, Complex yy, Complex dyy, Complex& ky, Complex& kdy) {
    ky = dyy;
    kdy = (pot.at(x) - lambda) * yy;
  };
  for (int i = 0; i < steps; ++i) {
    double x = i * h;
    Complex k1y, k1d, k2y, k2d, k3y, k3d, k4y, k4d;
    f(x, y, dy, k1y, k1d);
    f(x + h / 2, y + h / 2 * k1y, dy + h / 2 * k1d, k2y, k2d);
    f(x + h / 2, y + h / 2 * k2y, dy + h / 2 * k2d, k3y, k3d);
    f(x + h, y + h * k3y, dy + h * k3d, k4y, k4d);
    y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    dy += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
  }
  out[0] = y;
  out[1] = dy;
}

EdgePotential sampled(double length, int n, const std::function<double(double)>& q) {
  EdgePotential p;
  p.length = length;
  p.samples.resize(n + 1);
  for (int i = 0; i <= n; ++i) p.samples[i] = q(length * i / n);
  return p;
}

}  // namespace

TEST_CASE("zero potential closed forms") {
  EdgePotential p = EdgePotential::zero(1.0, 64);
  double rho = 1.7;
  Complex lam = rho * rho;
  for (double x : {0.25, 0.5, 1.0}) {
    BasisValues b = basis_at(p, lam, x);
    CHECK(std::abs(b.phi - std::cos(rho * x)) < 1e-13);
    CHECK(std::abs(b.s - std::sin(rho * x) / rho) < 1e-13);
    CHECK(std::abs(b.c - std::cos(rho * x)) < 1e-13);
    CHECK(std::abs(b.ds - std::cos(rho * x)) < 1e-13);
  }
  // lambda = 0 limit with a Robin normalization
  p.robin_h = 0.4;
  BasisValues b0 = basis_at(p, Complex(0, 0), 0.75);
  CHECK(std::abs(b0.s - 0.75) < 1e-14);
  CHECK(std::abs(b0.phi - (1.0 - 0.4 * 0.75)) < 1e-14);
}

TEST_CASE("transfer matrix closed form and determinant") {
  EdgePotential p = EdgePotential::zero(2.0, 32);
  double rho = 0.9;
  Transfer2x2 t = transfer(p, rho * rho);
  CHECK(std::abs(t.c - std::cos(rho * 2.0)) < 1e-13);
  CHECK(std::abs(t.s - std::sin(rho * 2.0) / rho) < 1e-13);
  CHECK(std::abs(t.dc + rho * std::sin(rho * 2.0)) < 1e-13);
  CHECK(std::abs(t.det() - 1.0) < 1e-13);

  // lambda = 0, q = 0: shear matrix
  Transfer2x2 t0 = transfer(p, Complex(0, 0));
  CHECK(std::abs(t0.c - 1.0) < 1e-14);
  CHECK(std::abs(t0.s - 2.0) < 1e-14);
  CHECK(std::abs(t0.dc) < 1e-14);
}

TEST_CASE("determinant stays 1 over random smooth q and 200 lambda samples") {
  EdgePotential p = sampled(1.3, 256, [](double x) { return std::sin(3 * x) + 0.3 * x * x; });
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(-30.0, 80.0), im(-8.0, 8.0);
  for (int i = 0; i < 200; ++i) {
    Complex lam(re(rng), im(rng));
    Transfer2x2 t = transfer(p, lam);
    CHECK(std::abs(t.det() - 1.0) < 1e-10 * std::max(1.0, std::abs(t.c * t.ds)));
  }
}

TEST_CASE("basis matches a step-halved reference integrator to 1e-8") {
  // q(x) = 2/(1+x)^2 on [0,1], lambda = 4
  EdgePotential p = sampled(1.0, 256, [](double x) { return 2.0 / ((1 + x) * (1 + x)); });
  Complex lam(4.0, 0.0);
  for (double x : {0.5, 1.0}) {
    Complex c0[2] = {1.0, 0.0}, s0[2] = {0.0, 1.0}, rc[2], rs[2];
    rk4_reference(p, lam, x, 1 << 15, c0, rc);
    rk4_reference(p, lam, x, 1 << 15, s0, rs);
    BasisValues b = basis_at(p, lam, x);
    CHECK(std::abs(b.c - rc[0]) < 1e-8);
    CHECK(std::abs(b.dc - rc[1]) < 1e-8);
    CHECK(std::abs(b.s - rs[0]) < 1e-8);
    CHECK(std::abs(b.ds - rs[1]) < 1e-8);
  }
}

TEST_CASE("propagator integrates its own interpolant at fourth order") {
  // integration error is measured against a fine reference on the SAME
  // piecewise-linear potential model of each grid
  auto q = [](double x) { return std::exp(-x) * std::sin(4 * x); };
  Complex lam(11.0, 0.5);
  std::vector<double> errs;
  for (int n : {16, 32, 64}) {
    EdgePotential p = sampled(1.0, n, q);
    Complex y0[2] = {1.0, 0.0}, ref[2];
    rk4_reference(p, lam, 1.0, 1 << 14, y0, ref);
    Transfer2x2 t = transfer(p, lam);
    errs.push_back(std::abs(t.c - ref[0]) + std::abs(t.dc - ref[1]));
  }
  double rate1 = std::log2(errs[0] / errs[1]);
  double rate2 = std::log2(errs[1] / errs[2]);
  CHECK(rate1 > 3.2);
  CHECK(rate2 > 3.0);
}

TEST_CASE("Wronskian identity holds at interior points") {
  EdgePotential p = sampled(0.8, 128, [](double x) { return 1.0 + x; });
  for (double x : {0.1, 0.43, 0.8}) {
    for (Complex lam : {Complex(3.0, 0.0), Complex(-5.0, 2.0), Complex(40.0, -1.0)}) {
      BasisValues b = basis_at(p, lam, x);
      Complex w = b.phi * b.ds - b.dphi * b.s;
      CHECK(std::abs(w - 1.0) < 1e-9 * std::max(1.0, std::abs(b.phi * b.ds)));
    }
  }
}

TEST_CASE("conjugate symmetry for real data") {
  EdgePotential p = sampled(1.0, 64, [](double x) { return x * (1 - x); });
  Complex lam(2.5, 1.7);
  BasisValues b1 = basis_at(p, lam, 1.0);
  BasisValues b2 = basis_at(p, std::conj(lam), 1.0);
  CHECK(std::abs(b1.c - std::conj(b2.c)) < 1e-12);
  CHECK(std::abs(b1.ds - std::conj(b2.ds)) < 1e-12);
}

TEST_CASE("asymptotic envelope of phi along arg rho = pi/4") {
  // |phi^(nu) - (1/2)((i rho)^nu e^{i rho x} + (-i rho)^nu e^{-i rho x})|
  // stays below C/|rho| relative to |rho|^nu e^{|Im rho| x}
  EdgePotential p = sampled(1.0, 256, [](double x) { return std::sin(2 * x); });
  double worst = 0.0;
  bool monotone_growth = true;
  double prev_prod = 0.0;
  for (double r = 10.0; r <= 100.0; r *= 1.25) {
    Complex rho = r * std::exp(Complex(0, std::numbers::pi / 4));
    Complex lam = rho * rho;
    double x = 1.0;
    BasisValues b = basis_at(p, lam, x);
    Complex irho(0, 1);
    irho *= rho;
    Complex model0 = 0.5 * (std::exp(irho * x) + std::exp(-irho * x));
    Complex model1 = 0.5 * (irho * std::exp(irho * x) - irho * std::exp(-irho * x));
    double env0 = std::exp(std::abs(rho.imag()) * x);
    double env1 = r * env0;
    double dev0 = std::abs(b.phi - model0) / env0;
    double dev1 = std::abs(b.dphi - model1) / env1;
    double prod = std::max(dev0, dev1) * r;
    worst = std::max(worst, prod);
    if (prod < prev_prod * 1.001) monotone_growth = false;
    prev_prod = prod;
  }
  CHECK(worst < 10.0);          // fitted constant stays finite and modest
  CHECK(!monotone_growth);      // |rho| * deviation does not grow without bound
}

TEST_CASE("overflow guard rejects very deep complex evaluations") {
  EdgePotential p = EdgePotential::zero(1.0, 32);
  Complex rho(0.0, 800.0);
  CHECK_THROWS_AS(basis_at(p, rho * rho, 1.0), Error);
}
