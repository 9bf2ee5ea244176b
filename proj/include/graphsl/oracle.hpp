#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "graphsl/characteristic.hpp"

namespace graphsl {

// Whole-graph finite-difference discretization as a generalized pencil
// A u = lambda B u. Matching conditions appear as explicit constraint rows
// (continuity + a Kirchhoff row with one-sided second-order differences), so
// B is singular on those rows and the pencil is solved by QZ.
struct FdDiscretization {
  Eigen::MatrixXd a, b;
  std::vector<int> first_node;  // per edge index: offset of node 0
  std::vector<int> nodes;       // per edge index: node count n_j + 1
  int size = 0;
};

namespace detail {

struct FdResolvedBc {
  enum class Kind { Matching, Dirichlet, Neumann, Robin, McWithoutPlusNu } kind = Kind::Matching;
  double h = 0.0;
  Endpoint w{};
  int nu = 0;
};

// one-sided second-order inward derivative stencil at an endpoint
inline void fd_inward_deriv(const FdDiscretization& d, const MetricGraph& g, const Endpoint& ep,
                            double step, std::vector<std::pair<int, double>>& terms) {
  int base = d.first_node[ep.edge];
  int n = d.nodes[ep.edge] - 1;
  double s = 1.0 / (2.0 * step);
  if (!ep.at_head) {
    terms.push_back({base + 0, -3.0 * s});
    terms.push_back({base + 1, 4.0 * s});
    terms.push_back({base + 2, -1.0 * s});
  } else {
    terms.push_back({base + n, -3.0 * s});
    terms.push_back({base + n - 1, 4.0 * s});
    terms.push_back({base + n - 2, -1.0 * s});
  }
  (void)g;
}

inline int fd_end_node(const FdDiscretization& d, const Endpoint& ep) {
  return d.first_node[ep.edge] + (ep.at_head ? d.nodes[ep.edge] - 1 : 0);
}

}  // namespace detail

inline FdDiscretization fd_assemble(const MetricGraph& g, const Potential& pot,
                                    const std::map<int, detail::FdResolvedBc>& vconds,
                                    int nodes_per_unit) {
  FdDiscretization d;
  int m = g.edge_count();
  d.first_node.resize(m);
  d.nodes.resize(m);
  int total = 0;
  std::vector<EdgePotential> eps;
  for (int e = 0; e < m; ++e) {
    int n = std::max(6, static_cast<int>(std::lround(nodes_per_unit * g.edge(e).length)));
    d.first_node[e] = total;
    d.nodes[e] = n + 1;
    total += n + 1;
    eps.push_back(make_edge_potential(g, pot, e));
  }
  d.size = total;
  d.a = Eigen::MatrixXd::Zero(total, total);
  d.b = Eigen::MatrixXd::Zero(total, total);

  int row = 0;
  // interior second differences
  for (int e = 0; e < m; ++e) {
    int n = d.nodes[e] - 1;
    double h = g.edge(e).length / n;
    for (int k = 1; k < n; ++k) {
      int i = d.first_node[e] + k;
      d.a(row, i - 1) -= 1.0 / (h * h);
      d.a(row, i) += 2.0 / (h * h) + eps[e].at(k * h);
      d.a(row, i + 1) -= 1.0 / (h * h);
      d.b(row, i) = 1.0;
      ++row;
    }
  }
  // vertex conditions as constraint rows
  for (int vi = 0; vi < g.vertex_count(); ++vi) {
    detail::FdResolvedBc rc;
    if (auto it = vconds.find(g.vertex(vi).id); it != vconds.end()) rc = it->second;
    const auto& inc = g.endpoints_at(vi);
    auto step_of = [&](const Endpoint& ep) {
      return g.edge(ep.edge).length / (d.nodes[ep.edge] - 1);
    };
    using detail::fd_end_node;
    switch (rc.kind) {
      case detail::FdResolvedBc::Kind::Matching:
      case detail::FdResolvedBc::Kind::McWithoutPlusNu: {
        std::vector<Endpoint> eps_v;
        for (const Endpoint& ep : inc)
          if (!(rc.kind == detail::FdResolvedBc::Kind::McWithoutPlusNu && ep == rc.w))
            eps_v.push_back(ep);
        for (std::size_t i = 1; i < eps_v.size(); ++i) {
          d.a(row, fd_end_node(d, eps_v[0])) += 1.0;
          d.a(row, fd_end_node(d, eps_v[i])) -= 1.0;
          ++row;
        }
        std::vector<std::pair<int, double>> terms;
        for (const Endpoint& ep : eps_v) detail::fd_inward_deriv(d, g, ep, step_of(ep), terms);
        for (auto [i, c] : terms) d.a(row, i) += c;
        ++row;
        if (rc.kind == detail::FdResolvedBc::Kind::McWithoutPlusNu) {
          if (rc.nu == 0) {
            d.a(row, fd_end_node(d, rc.w)) = 1.0;
          } else {
            std::vector<std::pair<int, double>> wt;
            detail::fd_inward_deriv(d, g, rc.w, step_of(rc.w), wt);
            for (auto [i, c] : wt) d.a(row, i) += c;
          }
          ++row;
        }
        break;
      }
      case detail::FdResolvedBc::Kind::Dirichlet:
        d.a(row, fd_end_node(d, inc[0])) = 1.0;
        ++row;
        break;
      case detail::FdResolvedBc::Kind::Neumann:
      case detail::FdResolvedBc::Kind::Robin: {
        std::vector<std::pair<int, double>> terms;
        detail::fd_inward_deriv(d, g, inc[0], step_of(inc[0]), terms);
        for (auto [i, c] : terms) d.a(row, i) += c;
        if (rc.kind == detail::FdResolvedBc::Kind::Robin)
          d.a(row, fd_end_node(d, inc[0])) += rc.h;
        ++row;
        break;
      }
    }
  }
  require(row == total, Errc::BadInput, "fd assembly produced a non-square system");
  return d;
}

namespace detail {

inline std::map<int, FdResolvedBc> fd_conditions(const MetricGraph& g, const Potential& pot,
                                                 const BcVariant& v) {
  std::map<int, FdResolvedBc> out;
  for (int vi = 0; vi < g.vertex_count(); ++vi) {
    FdResolvedBc rc;
    if (g.is_boundary(vi)) {
      BoundaryCondition bc = *g.bc(vi);
      if (v.tag == BcVariant::Tag::Lk && g.vertex(vi).id == v.k_vertex_id) bc = flipped_bc(bc);
      switch (bc.type) {
        case BcType::Dirichlet: rc.kind = FdResolvedBc::Kind::Dirichlet; break;
        case BcType::Neumann: rc.kind = FdResolvedBc::Kind::Neumann; break;
        case BcType::Robin:
          rc.kind = FdResolvedBc::Kind::Robin;
          rc.h = effective_h(g, pot, vi);
          break;
      }
    } else {
      rc.kind = FdResolvedBc::Kind::Matching;
    }
    out[g.vertex(vi).id] = rc;
  }
  if (v.tag == BcVariant::Tag::Lw) {
    int ei = g.eindex(v.xi_edge_id);
    Endpoint w{ei, v.eps == 0};
    int wv = g.endpoint_vertex(w);
    FdResolvedBc rc;
    rc.kind = FdResolvedBc::Kind::McWithoutPlusNu;
    rc.w = w;
    rc.nu = v.nu;
    out[g.vertex(wv).id] = rc;
  }
  return out;
}

inline std::vector<double> fd_lowest(const FdDiscretization& d, int count) {
  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges;
  ges.compute(d.a, d.b, false);
  require(ges.info() == Eigen::Success, Errc::EigsolveFailure, "QZ iteration failed");
  std::vector<double> vals;
  for (int i = 0; i < d.size; ++i) {
    std::complex<double> alpha = ges.alphas()(i);
    double beta = ges.betas()(i);
    if (std::abs(beta) < 1e-10) continue;  // constraint-row infinities
    std::complex<double> lam = alpha / beta;
    if (std::abs(lam.imag()) > 1e-6 * (1.0 + std::abs(lam.real()))) continue;
    vals.push_back(lam.real());
  }
  std::sort(vals.begin(), vals.end());
  require(static_cast<int>(vals.size()) >= count, Errc::EigsolveFailure,
          "too few finite eigenvalues in the pencil");
  vals.resize(count);
  return vals;
}

}  // namespace detail

// Lowest `count` eigenvalues with Richardson extrapolation over grids h, h/2.
inline std::vector<double> fd_spectrum(const MetricGraph& g, const Potential& pot,
                                       const BcVariant& variant, int nodes_per_unit, int count) {
  auto vc = detail::fd_conditions(g, pot, variant);
  std::vector<double> coarse =
      detail::fd_lowest(fd_assemble(g, pot, vc, nodes_per_unit), count);
  std::vector<double> fine =
      detail::fd_lowest(fd_assemble(g, pot, vc, 2 * nodes_per_unit), count);
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
  return out;
}

struct SpectraComparison {
  double max_rel_deviation = 0.0;
  int multiplicity_mismatches = 0;
  int reconciled_splits = 0;
};

// Pairs two sorted multiplicity-expanded spectra by order. Multiplicity
// mismatches that disappear after clustering values within rtol are only
// noted as reconciled splits.
inline SpectraComparison compare_spectra(const std::vector<Eigenvalue>& a,
                                         const std::vector<Eigenvalue>& b, int count,
                                         double rtol) {
  auto flatten = [&](const std::vector<Eigenvalue>& s) {
    std::vector<double> f;
    for (const auto& ev : s)
      for (int i = 0; i < ev.multiplicity; ++i) f.push_back(ev.lambda);
    return f;
  };
  std::vector<double> fa = flatten(a), fb = flatten(b);
  require(static_cast<int>(fa.size()) >= count && static_cast<int>(fb.size()) >= count,
          Errc::CountMismatch, "spectra shorter than the requested comparison count");
  SpectraComparison rep;
  for (int i = 0; i < count; ++i) {
    double dev = std::abs(fa[i] - fb[i]) / std::max({1.0, std::abs(fa[i]), std::abs(fb[i])});
    rep.max_rel_deviation = std::max(rep.max_rel_deviation, dev);
  }
  auto clusters = [&](const std::vector<double>& f) {
    std::vector<int> sizes;
    for (int i = 0; i < count;) {
      int j = i;
      while (j + 1 < count && std::abs(f[j + 1] - f[i]) <= rtol * std::max(1.0, std::abs(f[i])))
        ++j;
      sizes.push_back(j - i + 1);
      i = j + 1;
    }
    return sizes;
  };
  std::vector<int> ca = clusters(fa), cb = clusters(fb);
  if (ca == cb) return rep;
  // walk clusters in parallel; a multiplicity that one side splits into
  // nearby simple values is reconciled by widening the smaller side
  std::size_t ia = 0, ib = 0;
  int pa = 0, pb = 0;
  while (ia < ca.size() && ib < cb.size()) {
    int na = ca[ia++], nb = cb[ib++];
    double band = 100.0 * rtol * std::max(1.0, std::abs(fa[pa]));
    bool widened = false;
    while (na < nb && ia < ca.size() && std::abs(fa[pa + na] - fa[pa]) <= band) {
      na += ca[ia++];
      widened = true;
    }
    while (nb < na && ib < cb.size() && std::abs(fb[pb + nb] - fb[pb]) <= band) {
      nb += cb[ib++];
      widened = true;
    }
    if (na == nb) {
      if (widened) rep.reconciled_splits += 1;
    } else {
      rep.multiplicity_mismatches += 1;
    }
    pa += na;
    pb += nb;
  }
  return rep;
}

}  // namespace graphsl
