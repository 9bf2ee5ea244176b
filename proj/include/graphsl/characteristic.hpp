#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "graphsl/assembly.hpp"
#include "graphsl/parallel.hpp"

namespace graphsl {

// Boundary-condition variant selecting which problem's determinant we build.
struct BcVariant {
  enum class Tag { L0, Lk, Lw } tag = Tag::L0;
  int k_vertex_id = -1;
  int xi_edge_id = -1;
  int nu = 0;
  int eps = 0;  // which endpoint of the cycle edge becomes w (0 = head)

  static BcVariant l0() { return {}; }
  static BcVariant lk(int vertex_id) {
    BcVariant v;
    v.tag = Tag::Lk;
    v.k_vertex_id = vertex_id;
    return v;
  }
  static BcVariant lw(int edge_id, int nu, int eps = 0) {
    BcVariant v;
    v.tag = Tag::Lw;
    v.xi_edge_id = edge_id;
    v.nu = nu;
    v.eps = eps;
    return v;
  }

  std::string str() const {
    std::ostringstream os;
    switch (tag) {
      case Tag::L0: os << "L0"; break;
      case Tag::Lk: os << "Lk:" << k_vertex_id; break;
      case Tag::Lw: os << "Lw:" << xi_edge_id << ":" << nu; break;
    }
    return os.str();
  }

  static BcVariant parse(const std::string& s) {
    if (s == "L0" || s.empty()) return l0();
    if (s.rfind("Lk:", 0) == 0) return lk(std::stoi(s.substr(3)));
    if (s.rfind("Lw:", 0) == 0) {
      auto rest = s.substr(3);
      auto colon = rest.find(':');
      require(colon != std::string::npos, Errc::BadInput, "variant syntax Lw:<edge>:<nu>");
      return lw(std::stoi(rest.substr(0, colon)), std::stoi(rest.substr(colon + 1)));
    }
    fail(Errc::BadInput, "unknown variant '" + s + "'");
  }
};

inline BoundaryCondition flipped_bc(const BoundaryCondition& bc) {
  BoundaryCondition out;
  out.type = bc.type == BcType::Dirichlet ? BcType::Neumann : BcType::Dirichlet;
  return out;
}

inline VertexConditionMap conditions_for(const MetricGraph& g, const BcVariant& v) {
  VertexConditionMap m;
  switch (v.tag) {
    case BcVariant::Tag::L0:
      break;
    case BcVariant::Tag::Lk: {
      int vi = g.vindex(v.k_vertex_id);
      require(g.is_boundary(vi), Errc::BadInput, "Lk needs a boundary vertex");
      auto bc = g.bc(vi);
      require(bc.has_value(), Errc::BadInput, "Lk vertex has no base condition");
      m[v.k_vertex_id] = VertexCondition::boundary(flipped_bc(*bc));
      break;
    }
    case BcVariant::Tag::Lw: {
      int ei = g.eindex(v.xi_edge_id);
      require(!g.find_bridges()[ei], Errc::NotSimpleEdge, "Lw needs a cycle edge");
      Endpoint w{ei, v.eps == 0};
      int wv = g.endpoint_vertex(w);
      m[g.vertex(wv).id] = VertexCondition::matching_without(w, v.nu);
      break;
    }
  }
  return m;
}

struct Eigenvalue {
  double lambda = 0.0;
  int multiplicity = 1;
};

struct Spectrum {
  std::vector<Eigenvalue> values;  // ascending
  double lambda_min_auto = 0.0;
  double lambda_max = 0.0;

  // flattened list, multiplicities expanded
  std::vector<double> flat(std::size_t count = SIZE_MAX) const {
    std::vector<double> out;
    for (const auto& ev : values)
      for (int i = 0; i < ev.multiplicity && out.size() < count; ++i) out.push_back(ev.lambda);
    return out;
  }
};

// Multiplicity s and Taylor coefficient data of Delta at lambda = 0.
struct ZeroInfo {
  int s = 0;
  Complex a0{0.0, 0.0};       // (-1)^s / s! * d^s Delta / d lambda^s at 0
  double radii_rel_dev = 0.0; // two-radius cross-check of the Cauchy integral
};

namespace detail {

inline double phase_increment(const std::function<Complex(Complex)>& f, Complex za, Complex zb,
                              Complex fa, Complex fb, int depth) {
  require(std::abs(fa) > 0 && std::abs(fb) > 0, Errc::ScanTooCoarse,
          "winding contour passes through a zero");
  double d = std::arg(fb / fa);
  if (std::abs(d) <= 1.3 || depth >= 48) {
    require(std::abs(d) < 2.8, Errc::ScanTooCoarse, "winding phase step unresolved");
    return d;
  }
  Complex zm = 0.5 * (za + zb);
  Complex fm = f(zm);
  return phase_increment(f, za, zm, fa, fm, depth + 1) +
         phase_increment(f, zm, zb, fm, fb, depth + 1);
}

inline int winding_closed(const std::function<Complex(Complex)>& f,
                          const std::vector<Complex>& pts) {
  double total = 0.0;
  std::vector<Complex> fv(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) fv[i] = f(pts[i]);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::size_t j = (i + 1) % pts.size();
    total += phase_increment(f, pts[i], pts[j], fv[i], fv[j], 0);
  }
  double w = total / (2.0 * std::numbers::pi);
  int wi = static_cast<int>(std::lround(w));
  require(std::abs(w - wi) < 0.2, Errc::ScanTooCoarse, "winding number did not converge");
  return wi;
}

inline int winding_circle(const std::function<Complex(Complex)>& f, Complex center, double r,
                          int npts = 96) {
  std::vector<Complex> pts(npts);
  for (int i = 0; i < npts; ++i) {
    double th = 2.0 * std::numbers::pi * i / npts;
    pts[i] = center + Complex(r * std::cos(th), r * std::sin(th));
  }
  return winding_closed(f, pts);
}

// One-dimensional minimizer of |Delta| by golden-section.
inline double refine_min_abs(const std::function<double(double)>& absf, double a, double b) {
  const double gr = 0.6180339887498949;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = absf(c), fd = absf(d);
  for (int it = 0; it < 80 && (b - a) > 1e-13 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = absf(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = absf(d);
    }
  }
  return 0.5 * (a + b);
}

inline double bisect(const std::function<double(double)>& f, double a, double b, double fa,
                     double fb, double tol) {
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    double m = 0.5 * (a + b), fm = f(m);
    if (fm == 0.0) return m;
    if ((fa < 0) != (fm < 0)) {
      b = m;
      fb = fm;
    } else {
      a = m;
      fa = fm;
    }
  }
  (void)fb;
  return 0.5 * (a + b);
}

}  // namespace detail

// Locates all zeros of an entire characteristic function on
// (lambda_min_auto, lambda_max], with multiplicities from winding numbers.
// density_factor > 1 refines the scan; results must be scan-density sound.
inline Spectrum find_spectrum(const std::function<Complex(Complex)>& delta, double total_length,
                              double lambda_max, const RunConfig& cfg, double density_factor = 1.0,
                              bool verify_count = true) {
  require(lambda_max > 0, Errc::BadInput, "lambda_max must be positive");
  auto realf = [&](double lam) { return delta(Complex(lam, 0.0)).real(); };

  // self-adjointness probe: Delta must be essentially real on the real axis
  for (double probe : {0.37, -3.1, 7.7}) {
    Complex d = delta(Complex(probe, 0.0));
    double mag = std::abs(d);
    require(mag == 0.0 || std::abs(d.imag()) <= 1e-6 * mag, Errc::ComplexRootDetected,
            "characteristic function is not real on the real axis (non-self-adjoint data?)");
  }

  const double drho = std::numbers::pi / (8.0 * std::max(total_length, 1e-3)) / density_factor;
  const double lam_handover = std::pow(2.0 * drho, 2);

  // ---- negative axis: coarse walk until the sign is settled for a width-10 margin
  double lambda_min = 0.0;
  {
    double step = 0.5;
    double last_change = 0.0;
    double prev = realf(0.0);
    double lam = 0.0;
    while (lam > -1e6) {
      lam -= step;
      double v = realf(lam);
      if ((v < 0) != (prev < 0)) last_change = lam;
      prev = v;
      if (lam <= last_change - 10.0 && lam <= -10.0) break;
    }
    lambda_min = lam;
  }

  struct Root {
    double lambda;
    int mult;
  };
  std::vector<Root> roots;
  std::vector<double> minima_candidates;

  auto scan_grid = [&](const std::vector<double>& xs, const std::function<double(double)>& var_to_lambda,
                       double tol_x) {
    std::vector<double> fx(xs.size());
    parallel_for(xs.size(), cfg.worker_count(),
                 [&](std::size_t i) { fx[i] = realf(var_to_lambda(xs[i])); });
    auto fvar = [&](double x) { return realf(var_to_lambda(x)); };
    for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
      if (fx[j] == 0.0) {
        roots.push_back(Root{var_to_lambda(xs[j]), 1});
        continue;
      }
      if ((fx[j] < 0) != (fx[j + 1] < 0)) {
        double x = detail::bisect(fvar, xs[j], xs[j + 1], fx[j], fx[j + 1], tol_x);
        roots.push_back(Root{var_to_lambda(x), 1});
      }
    }
    // tangential candidates: interior minima of |f| without a sign change
    for (std::size_t j = 1; j + 1 < xs.size(); ++j) {
      if ((fx[j - 1] < 0) != (fx[j + 1] < 0)) continue;
      if (std::abs(fx[j]) < std::abs(fx[j - 1]) && std::abs(fx[j]) <= std::abs(fx[j + 1])) {
        double scale = std::max({std::abs(fx[j - 1]), std::abs(fx[j + 1]), 1e-300});
        if (std::abs(fx[j]) > 0.2 * scale) continue;
        double x = detail::refine_min_abs([&](double t) { return std::abs(fvar(t)); }, xs[j - 1],
                                          xs[j + 1]);
        if (std::abs(fvar(x)) < 1e-5 * scale) minima_candidates.push_back(var_to_lambda(x));
      }
    }
  };

  // negative / near-zero region scanned uniformly in lambda
  {
    std::vector<double> xs;
    for (double lam = lambda_min; lam < lam_handover + 0.05; lam += 0.1 / density_factor)
      xs.push_back(lam);
    xs.push_back(lam_handover + 0.05);
    scan_grid(xs, [](double x) { return x; }, cfg.tol_root);
  }
  // positive region scanned uniformly in rho
  {
    std::vector<double> xs;
    for (double r = std::sqrt(lam_handover); r < std::sqrt(lambda_max); r += drho) xs.push_back(r);
    xs.push_back(std::sqrt(lambda_max));
    scan_grid(xs, [](double x) { return x * x; }, cfg.tol_root);
  }

  // merge bracketed roots
  std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return a.lambda < b.lambda; });
  std::vector<Root> merged;
  for (const Root& r : roots) {
    if (!merged.empty() && std::abs(r.lambda - merged.back().lambda) < 1e-8 * (1.0 + std::abs(r.lambda)))
      continue;
    merged.push_back(r);
  }

  // multiplicities for tangential candidates via winding circles
  for (double lam : minima_candidates) {
    double near = 1e300;
    for (const Root& r : merged) near = std::min(near, std::abs(r.lambda - lam));
    double gap_rho = drho;  // half a scan cell in rho converted to lambda scale
    double rho = std::sqrt(std::abs(lam)) + 1.0;
    double r_mult = std::min(0.5 * near, std::min(0.1 * (1.0 + 2.0 * rho), gap_rho * rho));
    if (near < 0.75 * gap_rho * rho) continue;  // already found as a simple root
    r_mult = std::max(r_mult, 1e-7);
    int w = 0;
    try {
      w = detail::winding_circle(delta, Complex(lam, 0.0), r_mult);
    } catch (const Error&) {
      continue;
    }
    if (w >= 1) merged.push_back(Root{lam, w});
  }
  std::sort(merged.begin(), merged.end(),
            [](const Root& a, const Root& b) { return a.lambda < b.lambda; });

  // root-count verification over the positive strip by the argument principle
  if (verify_count && lambda_max > lam_handover * 4.0) {
    double rho_a = std::sqrt(lam_handover) * 1.000001, rho_b = std::sqrt(lambda_max);
    auto clear_of_roots = [&](double rho) {
      double lam = rho * rho;
      for (const Root& r : merged)
        if (std::abs(r.lambda - lam) < 0.5 * drho * std::max(rho, 1.0)) return false;
      return true;
    };
    for (int k = 0; k < 16 && !clear_of_roots(rho_a); ++k) rho_a += 0.25 * drho;
    for (int k = 0; k < 16 && !clear_of_roots(rho_b); ++k) rho_b -= 0.25 * drho;
    int expected = 0;
    for (const Root& r : merged)
      if (r.lambda > rho_a * rho_a && r.lambda < rho_b * rho_b) expected += r.mult;
    double eps = 1.5 * drho;
    std::vector<Complex> pts;
    int nh = std::max(8, static_cast<int>((rho_b - rho_a) / (0.5 * drho)));
    auto frho = [&](Complex rho) { return delta(rho * rho); };
    for (int i = 0; i < nh; ++i) pts.push_back(Complex(rho_a + (rho_b - rho_a) * i / nh, -eps));
    for (int i = 0; i < 8; ++i) pts.push_back(Complex(rho_b, -eps + 2 * eps * i / 8.0));
    for (int i = 0; i < nh; ++i) pts.push_back(Complex(rho_b - (rho_b - rho_a) * i / nh, eps));
    for (int i = 0; i < 8; ++i) pts.push_back(Complex(rho_a, eps - 2 * eps * i / 8.0));
    int counted = -1;
    try {
      counted = detail::winding_closed(frho, pts);
    } catch (const Error&) {
      counted = -1;  // contour unresolved; fall back to scan-density soundness
    }
    if (counted >= 0 && counted != expected) {
      if (density_factor < 4.0)
        return find_spectrum(delta, total_length, lambda_max, cfg, density_factor * 2.0,
                             verify_count);
      require(counted <= expected, Errc::ScanTooCoarse, "root scan missed zeros");
      fail(Errc::ComplexRootDetected,
           "argument principle counts more zeros than found on the real axis");
    }
  }

  Spectrum out;
  out.lambda_min_auto = lambda_min;
  out.lambda_max = lambda_max;
  for (const Root& r : merged)
    if (r.lambda <= lambda_max) out.values.push_back(Eigenvalue{r.lambda, r.mult});
  return out;
}

// Multiplicity of the zero eigenvalue and the Taylor coefficient A^0, via
// winding and Cauchy integrals on two radii.
inline ZeroInfo zero_info_of(const std::function<Complex(Complex)>& delta, double safe_radius,
                             const RunConfig& cfg) {
  ZeroInfo zi;
  double scale = std::max(std::abs(delta(Complex(safe_radius, 0))),
                          std::abs(delta(Complex(-safe_radius, 0))));
  if (std::abs(delta(Complex(0, 0))) > 1e-9 * scale) {
    zi.s = 0;
    zi.a0 = delta(Complex(0, 0));
    zi.radii_rel_dev = 0.0;
    return zi;
  }
  double r = safe_radius;
  zi.s = detail::winding_circle(delta, Complex(0, 0), r);
  auto cauchy = [&](double rad) {
    const int m = 256;
    Complex acc = 0.0;
    for (int i = 0; i < m; ++i) {
      double th = 2.0 * std::numbers::pi * i / m;
      Complex z = Complex(rad * std::cos(th), rad * std::sin(th));
      acc += delta(z) * std::exp(Complex(0.0, -zi.s * th));
    }
    return acc / static_cast<double>(m) / std::pow(rad, zi.s);
  };
  Complex c1 = cauchy(r), c2 = cauchy(0.5 * r);
  zi.radii_rel_dev = std::abs(c1 - c2) / std::max(std::abs(c1), 1e-300);
  require(zi.radii_rel_dev < 1e-4, Errc::ContourTooTight,
          "Taylor coefficient at 0 did not stabilize across radii");
  double sgn = (zi.s % 2 == 0) ? 1.0 : -1.0;
  zi.a0 = sgn * 0.5 * (c1 + c2);
  (void)cfg;
  return zi;
}

// Evaluator of one characteristic determinant with a cached spectrum.
class CharFn {
 public:
  CharFn() = default;

  static CharFn make(const MetricGraph& g, const Potential& pot, const BcVariant& v,
                     const RunConfig& cfg) {
    return CharFn(std::make_shared<Impl>(g, pot, conditions_for(g, v), cfg, v.str()));
  }

  static CharFn make_with_conditions(const MetricGraph& g, const Potential& pot,
                                     const VertexConditionMap& rows, const RunConfig& cfg,
                                     const std::string& label) {
    return CharFn(std::make_shared<Impl>(g, pot, rows, cfg, label));
  }

  bool valid() const { return impl_ != nullptr; }

  Complex operator()(Complex lambda) const { return impl_->prob.det(lambda); }

  const AssembledProblem& problem() const { return impl_->prob; }
  const MetricGraph& graph() const { return impl_->prob.graph(); }
  const RunConfig& config() const { return impl_->cfg; }
  const std::string& label() const { return impl_->label; }

  Spectrum spectrum(double lambda_max) const {
    std::lock_guard<std::mutex> lock(impl_->mu);
    if (impl_->spec && impl_->spec->lambda_max >= lambda_max) {
      Spectrum s = *impl_->spec;
      std::erase_if(s.values, [&](const Eigenvalue& ev) { return ev.lambda > lambda_max; });
      s.lambda_max = lambda_max;
      return s;
    }
    auto self = impl_;
    Spectrum s = find_spectrum([self](Complex z) { return self->prob.det(z); },
                               impl_->prob.total_length(), lambda_max, impl_->cfg);
    impl_->spec = s;
    return s;
  }

  // First `count` eigenvalues (multiplicities expanded), extending the scan
  // window as needed.
  std::vector<double> first_eigenvalues(int count) const {
    double total = impl_->prob.total_length();
    double guess_rho = (count + 2.0) * std::numbers::pi / total;
    double lmax = std::max(10.0, guess_rho * guess_rho);
    for (int it = 0; it < 8; ++it) {
      Spectrum s = spectrum(lmax);
      auto f = s.flat(count);
      if (static_cast<int>(f.size()) >= count) return f;
      lmax *= 1.8;
    }
    fail(Errc::InsufficientSamples, "could not collect the requested eigenvalue count");
  }

  ZeroInfo zero_info() const {
    std::lock_guard<std::mutex> lock(impl_->mu);
    if (impl_->zinfo) return *impl_->zinfo;
    auto self = impl_;
    auto f = [self](Complex z) { return self->prob.det(z); };
    // keep the contour away from the nearest nonzero eigenvalue
    Spectrum near = find_spectrum(f, impl_->prob.total_length(), 4.0, impl_->cfg, 1.0, false);
    double safe = 0.25;
    for (const auto& ev : near.values)
      if (std::abs(ev.lambda) > 1e-7) safe = std::min(safe, std::abs(ev.lambda) / 3.0);
    safe = std::max(safe, 1e-3);
    ZeroInfo zi = zero_info_of(f, safe, impl_->cfg);
    impl_->zinfo = zi;
    return zi;
  }

 private:
  struct Impl {
    AssembledProblem prob;
    RunConfig cfg;
    std::string label;
    mutable std::mutex mu;
    mutable std::optional<Spectrum> spec;
    mutable std::optional<ZeroInfo> zinfo;
    Impl(const MetricGraph& g, const Potential& pot, const VertexConditionMap& rows,
         const RunConfig& c, const std::string& lbl)
        : prob(g, pot, rows, c), cfg(c), label(lbl) {}
  };
  explicit CharFn(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<Impl> impl_;
};

inline std::pair<Eigen::MatrixXcd, Complex> assemble(const MetricGraph& g, const Potential& pot,
                                                     const BcVariant& v, Complex lambda,
                                                     const RunConfig& cfg) {
  AssembledProblem prob(g, pot, conditions_for(g, v), cfg);
  Eigen::MatrixXcd m = prob.matrix(lambda);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  return {m, lu.determinant()};
}

// Characteristic function of the variant with q = 0 and h = 0 on the same
// graph, exposing s_k and A_k^0 through zero_info().
inline CharFn zero_potential_charfn(const MetricGraph& g, const BcVariant& v,
                                    const RunConfig& cfg) {
  Potential zero = Potential::zero(g, cfg.grid_n);
  for (auto& [vid, h] : zero.robin) h = 0.0;
  return CharFn::make(g, zero, v, cfg);
}

}  // namespace graphsl
