#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "graphsl/config.hpp"
#include "graphsl/metric_graph.hpp"
#include "graphsl/potential.hpp"

namespace graphsl {

// One term coeff * y^(deriv) evaluated at an edge endpoint. deriv 0 or 1 with
// the plain d/dx derivative; inward orientation is applied by row builders.
struct EndpointTerm {
  Endpoint ep;
  int deriv = 0;
  Complex coeff{1.0, 0.0};
};

struct ConditionRow {
  std::vector<EndpointTerm> terms;
};

inline double inward_sign(const Endpoint& ep) { return ep.at_head ? -1.0 : 1.0; }

// What to impose at one vertex when assembling a boundary value problem.
struct VertexCondition {
  enum class Kind {
    Auto,            // internal: matching rows; boundary: the graph's bc row
    Bc,              // an explicit boundary row at a valency-1 vertex
    DirichletAll,    // y = 0 at every endpoint of the vertex
    Mc,              // standard matching over this vertex's endpoints
    McWithoutPlusNu  // matching without endpoint w, plus the d^nu row at w
  } kind = Kind::Auto;
  BoundaryCondition bc{};
  Endpoint w{};
  int nu = 0;

  static VertexCondition auto_rows() { return {}; }
  static VertexCondition boundary(BoundaryCondition b) {
    VertexCondition c;
    c.kind = Kind::Bc;
    c.bc = b;
    return c;
  }
  static VertexCondition dirichlet_all() {
    VertexCondition c;
    c.kind = Kind::DirichletAll;
    return c;
  }
  static VertexCondition matching() {
    VertexCondition c;
    c.kind = Kind::Mc;
    return c;
  }
  static VertexCondition matching_without(Endpoint w, int nu) {
    VertexCondition c;
    c.kind = Kind::McWithoutPlusNu;
    c.w = w;
    c.nu = nu;
    return c;
  }
};

using VertexConditionMap = std::map<int, VertexCondition>;  // vertex id -> condition

namespace detail {

inline ConditionRow value_row(Endpoint ep) {
  return ConditionRow{{EndpointTerm{ep, 0, 1.0}}};
}

inline ConditionRow inward_deriv_row(Endpoint ep) {
  return ConditionRow{{EndpointTerm{ep, 1, inward_sign(ep)}}};
}

inline ConditionRow bc_row(const MetricGraph& g, const Potential& pot, int vidx,
                           const BoundaryCondition& bc) {
  require(g.valency(vidx) == 1, Errc::BadInput, "bc row needs a valency-1 vertex");
  Endpoint ep = g.endpoints_at(vidx)[0];
  switch (bc.type) {
    case BcType::Dirichlet:
      return value_row(ep);
    case BcType::Neumann:
      return inward_deriv_row(ep);
    case BcType::Robin: {
      ConditionRow r = inward_deriv_row(ep);
      r.terms.push_back(EndpointTerm{ep, 0, bc.h});
      return r;
    }
  }
  return {};
}

inline void standard_mc_rows(const MetricGraph& g, int vidx, std::optional<Endpoint> excluded,
                             std::vector<ConditionRow>& out) {
  std::vector<Endpoint> eps;
  for (const Endpoint& ep : g.endpoints_at(vidx))
    if (!(excluded && *excluded == ep)) eps.push_back(ep);
  require(!eps.empty(), Errc::BadInput, "matching at a vertex with no endpoints left");
  for (std::size_t i = 1; i < eps.size(); ++i) {
    ConditionRow r;
    r.terms.push_back(EndpointTerm{eps[0], 0, 1.0});
    r.terms.push_back(EndpointTerm{eps[i], 0, -1.0});
    out.push_back(r);
  }
  ConditionRow kirchhoff;
  for (const Endpoint& ep : eps) kirchhoff.terms.push_back(EndpointTerm{ep, 1, inward_sign(ep)});
  out.push_back(kirchhoff);
}

// General matching (2.2): the unique tail endpoint at the vertex is the parent
// edge, heads are children. y_par(0) = a_j y_j(l_j); y'_par(0) = sum a1_j
// y'_j(l_j) + a0_j y_j(l_j).
inline void general_mc_rows(const MetricGraph& g, int vidx, std::vector<ConditionRow>& out) {
  std::optional<Endpoint> parent;
  std::vector<Endpoint> children;
  for (const Endpoint& ep : g.endpoints_at(vidx)) {
    if (!ep.at_head) {
      require(!parent, Errc::BadInput,
              "general matching needs exactly one tail endpoint per internal vertex");
      parent = ep;
    } else {
      children.push_back(ep);
    }
  }
  require(parent.has_value(), Errc::BadInput, "general matching: no parent edge at vertex");
  ConditionRow kirchhoff;
  kirchhoff.terms.push_back(EndpointTerm{*parent, 1, 1.0});
  for (const Endpoint& ch : children) {
    MatchingCoeff mc = g.matching_coeff(vidx, ch.edge);
    ConditionRow cont;
    cont.terms.push_back(EndpointTerm{*parent, 0, 1.0});
    cont.terms.push_back(EndpointTerm{ch, 0, -mc.a});
    out.push_back(cont);
    kirchhoff.terms.push_back(EndpointTerm{ch, 1, -mc.a1});
    kirchhoff.terms.push_back(EndpointTerm{ch, 0, -mc.a0});
  }
  out.push_back(kirchhoff);
}

}  // namespace detail

// An assembled boundary value problem: the graph, per-edge potentials and the
// canonical row list. Row order is deterministic (vertices ascending by index;
// a variant override changes row content in place, never positions).
class AssembledProblem {
 public:
  AssembledProblem(const MetricGraph& g, const Potential& pot, const VertexConditionMap& overrides,
                   const RunConfig& cfg)
      : graph_(g), cfg_(cfg) {
    pots_.reserve(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) pots_.push_back(make_edge_potential(g, pot, e));
    vertex_first_row_.assign(g.vertex_count(), -1);
    for (int vi = 0; vi < g.vertex_count(); ++vi) {
      vertex_first_row_[vi] = static_cast<int>(rows_.size());
      VertexCondition vc;
      if (auto it = overrides.find(g.vertex(vi).id); it != overrides.end()) vc = it->second;
      switch (vc.kind) {
        case VertexCondition::Kind::Auto: {
          if (g.is_boundary(vi)) {
            auto b = g.bc(vi);
            require(b.has_value(), Errc::BadInput,
                    "vertex " + std::to_string(g.vertex(vi).id) + " needs a condition");
            BoundaryCondition bc = *b;
            if (bc.type == BcType::Robin) bc.h = effective_h(g, pot, vi);
            rows_.push_back(detail::bc_row(g, pot, vi, bc));
          } else if (g.standard_matching()) {
            detail::standard_mc_rows(g, vi, std::nullopt, rows_);
          } else {
            detail::general_mc_rows(g, vi, rows_);
          }
          break;
        }
        case VertexCondition::Kind::Bc:
          rows_.push_back(detail::bc_row(g, pot, vi, vc.bc));
          break;
        case VertexCondition::Kind::DirichletAll:
          for (const Endpoint& ep : g.endpoints_at(vi)) rows_.push_back(detail::value_row(ep));
          break;
        case VertexCondition::Kind::Mc:
          detail::standard_mc_rows(g, vi, std::nullopt, rows_);
          break;
        case VertexCondition::Kind::McWithoutPlusNu: {
          detail::standard_mc_rows(g, vi, vc.w, rows_);
          rows_.push_back(vc.nu == 0 ? detail::value_row(vc.w) : detail::inward_deriv_row(vc.w));
          break;
        }
      }
    }
    require(static_cast<int>(rows_.size()) == 2 * g.edge_count(), Errc::BadInput,
            "condition count must equal 2 x edge count");
  }

  const MetricGraph& graph() const { return graph_; }
  const std::vector<EdgePotential>& edge_potentials() const { return pots_; }
  int size() const { return static_cast<int>(rows_.size()); }
  int first_row_of_vertex(int vidx) const { return vertex_first_row_[vidx]; }
  double total_length() const { return graph_.total_length(); }

  // Endpoint basis for all edges at one lambda; unknowns per edge are the
  // coefficients (a1, a2) of y = a1 C + a2 S.
  std::vector<Transfer2x2> edge_bases(Complex lambda) const {
    std::vector<Transfer2x2> t(pots_.size());
    for (std::size_t e = 0; e < pots_.size(); ++e) t[e] = transfer(pots_[e], lambda);
    return t;
  }

  Eigen::MatrixXcd matrix(Complex lambda) const {
    return matrix_from_bases(edge_bases(lambda));
  }

  Eigen::MatrixXcd matrix_from_bases(const std::vector<Transfer2x2>& bases) const {
    int n = size();
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    for (int r = 0; r < n; ++r) {
      for (const EndpointTerm& t : rows_[r].terms) {
        Complex vc, vs;  // values of (C, S) or (C', S') at the endpoint
        if (!t.ep.at_head) {
          vc = t.deriv == 0 ? 1.0 : 0.0;
          vs = t.deriv == 0 ? 0.0 : 1.0;
        } else {
          const Transfer2x2& tb = bases[t.ep.edge];
          vc = t.deriv == 0 ? tb.c : tb.dc;
          vs = t.deriv == 0 ? tb.s : tb.ds;
        }
        a(r, 2 * t.ep.edge) += t.coeff * vc;
        a(r, 2 * t.ep.edge + 1) += t.coeff * vs;
      }
    }
    return a;
  }

  Complex det(Complex lambda) const {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(matrix(lambda));
    return lu.determinant();
  }

  // Solves A(lambda) x = e_row (unit right-hand side at one condition row).
  // Throws NearSingularSystem when lambda sits on the problem's spectrum.
  Eigen::VectorXcd solve_unit_rhs(Complex lambda, int row) const {
    Eigen::MatrixXcd a = matrix(lambda);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    double rc = lu.rcond();
    require(std::isfinite(rc) && rc > 1e-13, Errc::NearSingularSystem,
            "assembled system is near singular at this lambda");
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(size());
    rhs(row) = 1.0;
    return lu.solve(rhs);
  }

  // y^(deriv) on edge eidx at x for a coefficient vector.
  Complex eval(const Eigen::VectorXcd& coeffs, int eidx, Complex lambda, double x,
               int deriv) const {
    Transfer2x2 t = propagate(pots_[eidx], lambda, x);
    Complex vc = deriv == 0 ? t.c : t.dc;
    Complex vs = deriv == 0 ? t.s : t.ds;
    return coeffs(2 * eidx) * vc + coeffs(2 * eidx + 1) * vs;
  }

 private:
  MetricGraph graph_;
  RunConfig cfg_;
  std::vector<EdgePotential> pots_;
  std::vector<ConditionRow> rows_;
  std::vector<int> vertex_first_row_;
};

}  // namespace graphsl
