#pragma once

#include <Eigen/Dense>

#include "graphsl/parallel.hpp"
#include "graphsl/weyl.hpp"

namespace graphsl {

// Transformation-kernel pair of the main equation on one edge: K lives on the
// lower triangle t <= x, the source kernel F on the full square.
struct GLKernel {
  double length = 1.0;
  int n = 0;                 // grid has n+1 points
  Eigen::MatrixXd k;         // K(x_i, t_j), zero above the diagonal
  Eigen::MatrixXd f;         // F(x_i, t_j), symmetric
  double max_condition = 0.0;
  double residual = 0.0;     // worst discretized main-equation residual
};

struct RecoveryReport {
  double main_equation_residual = 0.0;
  double max_condition = 0.0;
  double tail_energy = 0.0;   // estimate of the truncated bracket mass
  double h_recovered = 0.0;
  int trunc = 0;
  bool tail_warning = false;  // tail_energy above the 1e-2 reporting threshold
};

// phi of the zero-potential model with h = 0: cos(sqrt(lambda) x), which is
// cosh for negative lambda.
inline double model_phi(double lambda, double x) {
  if (lambda >= 0.0) return std::cos(std::sqrt(lambda) * x);
  return std::cosh(std::sqrt(-lambda) * x);
}

// F(x,t) = sum_l [ alpha_l phi0(x,l) phi0(t,l) - model term ], the spectral
// difference kernel of the data against the same-graph zero-potential model.
inline Eigen::MatrixXd build_F(const SpectralData& sd, double length, int n) {
  require(sd.poles.size() == sd.model_poles.size(), Errc::LengthMismatch,
          "data and model truncations differ");
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n + 1, n + 1);
  Eigen::VectorXd cx(n + 1), cxm(n + 1);
  for (std::size_t l = 0; l < sd.poles.size(); ++l) {
    for (int i = 0; i <= n; ++i) {
      double x = length * i / n;
      cx(i) = model_phi(sd.poles[l], x);
      cxm(i) = model_phi(sd.model_poles[l], x);
    }
    f.noalias() += sd.residues[l] * cx * cx.transpose();
    f.noalias() -= sd.model_residues[l] * cxm * cxm.transpose();
  }
  return f;
}

// Solves K(x,t) + F(x,t) + int_0^x K(x,s) F(s,t) ds = 0 for each grid row by
// the trapezoid-rule Nystrom discretization.
inline GLKernel solve_main_equation(const Eigen::MatrixXd& f, double length,
                                    const RunConfig& cfg) {
  int n = static_cast<int>(f.rows()) - 1;
  GLKernel gl;
  gl.length = length;
  gl.n = n;
  gl.f = f;
  gl.k = Eigen::MatrixXd::Zero(n + 1, n + 1);
  double h = length / n;
  std::vector<double> conds(n + 1, 0.0);
  parallel_for(static_cast<std::size_t>(n) + 1, cfg.worker_count(), [&](std::size_t iu) {
    int i = static_cast<int>(iu);
    int m = i + 1;  // nodes 0..i
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m);
    for (int j = 0; j < m; ++j) {
      for (int s = 0; s < m; ++s) {
        double w = (s == 0 || s == i) ? 0.5 * h : h;
        if (i == 0) w = 0.0;
        a(j, s) += w * f(s, j);
      }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    conds[i] = 1.0 / std::max(lu.rcond(), 1e-300);
    Eigen::VectorXd rhs(m);
    for (int j = 0; j < m; ++j) rhs(j) = -f(i, j);
    Eigen::VectorXd sol = lu.solve(rhs);
    for (int j = 0; j < m; ++j) gl.k(i, j) = sol(j);
  });
  for (double c : conds) gl.max_condition = std::max(gl.max_condition, c);
  require(gl.max_condition < 1e12, Errc::SingularMainEquation,
          "main equation is numerically singular; data inconsistent with a potential");
  // residual of the discretized equation at the last row
  {
    int i = n;
    double worst = 0.0;
    for (int j = 0; j <= i; ++j) {
      double acc = gl.k(i, j) + f(i, j);
      for (int s = 0; s <= i; ++s) {
        double w = (s == 0 || s == i) ? 0.5 * h : h;
        acc += w * gl.k(i, s) * f(s, j);
      }
      worst = std::max(worst, std::abs(acc));
    }
    gl.residual = worst;
  }
  return gl;
}

// q(x) = 2 d/dx K(x, x) and h = -K(0, 0), with fourth-order stencils on the
// diagonal samples.
inline std::pair<std::vector<double>, double> recover_qh(const GLKernel& gl) {
  int n = gl.n;
  double h = gl.length / n;
  std::vector<double> diag(n + 1);
  for (int i = 0; i <= n; ++i) diag[i] = gl.k(i, i);
  std::vector<double> q(n + 1);
  auto d1 = [&](int i) {
    if (i >= 2 && i <= n - 2)
      return (-diag[i + 2] + 8 * diag[i + 1] - 8 * diag[i - 1] + diag[i - 2]) / (12 * h);
    if (i == 0)
      return (-25 * diag[0] + 48 * diag[1] - 36 * diag[2] + 16 * diag[3] - 3 * diag[4]) /
             (12 * h);
    if (i == 1)
      return (-3 * diag[0] - 10 * diag[1] + 18 * diag[2] - 6 * diag[3] + diag[4]) / (12 * h);
    if (i == n - 1)
      return (3 * diag[n] + 10 * diag[n - 1] - 18 * diag[n - 2] + 6 * diag[n - 3] -
              diag[n - 4]) /
             (12 * h);
    return (25 * diag[n] - 48 * diag[n - 1] + 36 * diag[n - 2] - 16 * diag[n - 3] +
            3 * diag[n - 4]) /
           (12 * h);
  };
  for (int i = 0; i <= n; ++i) q[i] = 2.0 * d1(i);
  double hrec = -gl.k(0, 0);
  return {q, hrec};
}

// Full edge-local inverse problem IP(k): spectral data -> (q, h) on the edge.
inline std::pair<EdgePotential, RecoveryReport> solve_local_ip(const SpectralData& sd,
                                                               double length, int grid_n,
                                                               const RunConfig& cfg) {
  sd.check();
  Eigen::MatrixXd f = build_F(sd, length, grid_n);
  GLKernel gl = solve_main_equation(f, length, cfg);
  auto [q, hrec] = recover_qh(gl);
  EdgePotential pot;
  pot.length = length;
  pot.samples = q;
  pot.robin_h = hrec;
  RecoveryReport rep;
  rep.main_equation_residual = gl.residual;
  rep.max_condition = gl.max_condition;
  rep.h_recovered = hrec;
  rep.trunc = static_cast<int>(sd.poles.size());
  int quarter = std::max<int>(1, sd.poles.size() / 4);
  double tail = 0.0;
  for (std::size_t l = sd.poles.size() - quarter; l < sd.poles.size(); ++l)
    tail += std::abs(sd.residues[l] - sd.model_residues[l]);
  rep.tail_energy = tail / quarter;
  rep.tail_warning = rep.tail_energy > 1e-2;
  return {pot, rep};
}

inline std::pair<EdgePotential, RecoveryReport> solve_local_ip(const WeylFn& wf,
                                                               const MetricGraph& g,
                                                               double length, int trunc,
                                                               int grid_n, const RunConfig& cfg) {
  SpectralData sd;
  if (wf.repr() == WeylFn::Repr::Data) {
    sd = wf.data();
    if (static_cast<int>(sd.poles.size()) > trunc) {
      sd.poles.resize(trunc);
      sd.residues.resize(trunc);
      sd.model_poles.resize(trunc);
      sd.model_residues.resize(trunc);
      sd.trunc = trunc;
    }
  } else {
    sd.vertex_id = wf.vertex_id();
    sd.trunc = trunc;
    sd.poles = wf.pole_list(trunc);
    sd.residues = detail::residues_at([&](Complex z) { return wf(z); }, sd.poles, cfg).residues;
    WeylVariantPair pair = robin_type_pair(g, wf.vertex_id());
    CharFn num0 = zero_potential_charfn(g, pair.num, cfg);
    CharFn den0 = zero_potential_charfn(g, pair.den, cfg);
    sd.model_poles = detail::simple_poles(den0, trunc);
    sd.model_residues =
        detail::residues_at([&](Complex z) { return num0(z) / den0(z); }, sd.model_poles, cfg)
            .residues;
  }
  return solve_local_ip(sd, length, grid_n, cfg);
}

}  // namespace graphsl
