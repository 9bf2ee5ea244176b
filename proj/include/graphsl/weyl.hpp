#pragma once

#include <numbers>

#include "graphsl/characteristic.hpp"

namespace graphsl {

// Truncated pole/residue data of one Weyl function plus the companion data of
// the same graph with q = 0, h = 0.
struct SpectralData {
  int vertex_id = -1;
  int trunc = 0;
  std::vector<double> poles;
  std::vector<double> residues;
  std::vector<double> model_poles;
  std::vector<double> model_residues;

  void check() const {
    require(trunc > 0 && !poles.empty(), Errc::EmptyData, "spectral data is empty");
    require(poles.size() == residues.size() && model_poles.size() == model_residues.size() &&
                poles.size() == model_poles.size(),
            Errc::LengthMismatch, "data and model lists must share the truncation");
    for (std::size_t l = 1; l < poles.size(); ++l)
      require(poles[l] > poles[l - 1], Errc::BadInput, "poles must be strictly increasing");
    // single sign of the (significantly nonzero) residues
    double scale = 0.0;
    for (double a : residues) scale = std::max(scale, std::abs(a));
    int sign = 0;
    for (double a : residues) {
      if (std::abs(a) < 1e-6 * scale) continue;
      int s = a > 0 ? 1 : -1;
      require(sign == 0 || s == sign, Errc::BadInput,
              "residues of a self-adjoint Weyl function must share one sign");
      sign = s;
    }
    // pairing sanity: sqrt-scale mismatch against the model stays bounded
    auto rho = [](double lam) { return lam >= 0 ? std::sqrt(lam) : -std::sqrt(-lam); };
    double bound = 1.5;
    for (std::size_t l = 0; l + 1 < model_poles.size(); ++l)
      bound = std::max(bound, 0.9 * (rho(model_poles[l + 1]) - rho(model_poles[l])));
    for (std::size_t l = poles.size() / 2; l < poles.size(); ++l)
      require(std::abs(rho(poles[l]) - rho(model_poles[l])) <= bound, Errc::InterlacedMismatch,
              "data poles do not pair with the zero-potential model");
  }
};

// (1/2 pi i) closed contour integral of f on a circle, i.e. the residue sum inside.
inline Complex contour_residue(const std::function<Complex(Complex)>& f, Complex center, double r,
                               int npts = 64) {
  require(r > 1e-12, Errc::ContourTooTight, "contour radius underflow");
  Complex acc = 0.0;
  for (int i = 0; i < npts; ++i) {
    double th = 2.0 * std::numbers::pi * i / npts;
    Complex e(std::cos(th), std::sin(th));
    acc += f(center + r * e) * e;
  }
  return acc * r / static_cast<double>(npts);
}

// Variant pair whose exact Cramer ratio is the Robin-normalized Weyl function
// at a boundary vertex: numerator flips the vertex to Dirichlet, denominator
// keeps (or installs) the derivative-type condition.
struct WeylVariantPair {
  BcVariant num;  // Dirichlet at the vertex
  BcVariant den;  // Robin/Neumann at the vertex
};

inline WeylVariantPair robin_type_pair(const MetricGraph& g, int vertex_id) {
  int vi = g.vindex(vertex_id);
  auto bc = g.bc(vi);
  require(bc.has_value(), Errc::BadInput, "Weyl vertex must be a boundary vertex");
  if (bc->type == BcType::Dirichlet)
    return {BcVariant::l0(), BcVariant::lk(vertex_id)};
  return {BcVariant::lk(vertex_id), BcVariant::l0()};
}

class WeylFn {
 public:
  enum class Repr { Ratio, Data, TwoSpectra };

  WeylFn() = default;

  static WeylFn ratio(CharFn num, CharFn den, int vertex_id) {
    auto impl = std::make_shared<Impl>();
    impl->repr = Repr::Ratio;
    impl->num = std::move(num);
    impl->den = std::move(den);
    impl->vertex_id = vertex_id;
    return WeylFn(impl);
  }

  static WeylFn from_data(SpectralData sd, CharFn model_num, CharFn model_den) {
    sd.check();
    auto impl = std::make_shared<Impl>();
    impl->repr = Repr::Data;
    impl->sd = std::move(sd);
    impl->num = std::move(model_num);
    impl->den = std::move(model_den);
    impl->vertex_id = impl->sd.vertex_id;
    return WeylFn(impl);
  }

  static WeylFn two_spectra(std::vector<double> poles, std::vector<double> zeros,
                            std::vector<double> model_poles, std::vector<double> model_zeros,
                            CharFn model_num, CharFn model_den, Complex c_norm,
                            std::vector<Complex> c_by_radius, int vertex_id) {
    auto impl = std::make_shared<Impl>();
    impl->repr = Repr::TwoSpectra;
    impl->poles = std::move(poles);
    impl->zeros = std::move(zeros);
    impl->model_poles = std::move(model_poles);
    impl->model_zeros = std::move(model_zeros);
    impl->num = std::move(model_num);
    impl->den = std::move(model_den);
    impl->c_norm = c_norm;
    impl->c_by_radius = std::move(c_by_radius);
    impl->vertex_id = vertex_id;
    return WeylFn(impl);
  }

  bool valid() const { return impl_ != nullptr; }
  Repr repr() const { return impl_->repr; }
  int vertex_id() const { return impl_->vertex_id; }
  const SpectralData& data() const { return impl_->sd; }
  const std::vector<Complex>& normalization_by_radius() const { return impl_->c_by_radius; }

  Complex operator()(Complex lambda) const {
    Complex v;
    switch (impl_->repr) {
      case Repr::Ratio: {
        Complex n = impl_->num(lambda), d = impl_->den(lambda);
        require(std::abs(d) > 0 && std::abs(n) < 1e250 && std::abs(d) > 1e-250 * std::abs(n),
                Errc::EvaluationAtPole, "Weyl evaluation too close to a pole");
        v = n / d;
        break;
      }
      case Repr::Data: {
        v = impl_->num(lambda) / impl_->den(lambda);
        for (int l = 0; l < impl_->sd.trunc; ++l) {
          v += impl_->sd.residues[l] / (lambda - impl_->sd.poles[l]) -
               impl_->sd.model_residues[l] / (lambda - impl_->sd.model_poles[l]);
        }
        break;
      }
      case Repr::TwoSpectra: {
        v = impl_->c_norm * impl_->num(lambda) / impl_->den(lambda);
        for (std::size_t l = 0; l < impl_->poles.size(); ++l) {
          v *= (impl_->zeros[l] - lambda) / (impl_->poles[l] - lambda);
          v *= (impl_->model_poles[l] - lambda) / (impl_->model_zeros[l] - lambda);
        }
        break;
      }
    }
    bool finite = std::isfinite(v.real()) && std::isfinite(v.imag());
    require(finite, Errc::EvaluationAtPole, "Weyl evaluation overflowed near a pole");
    return v;
  }

  // First `count` poles of the representation.
  std::vector<double> pole_list(int count) const {
    switch (impl_->repr) {
      case Repr::Ratio: {
        std::vector<double> flat = impl_->den.first_eigenvalues(count);
        return flat;
      }
      case Repr::Data: {
        require(count <= impl_->sd.trunc, Errc::InsufficientSamples,
                "truncated data holds fewer poles");
        return std::vector<double>(impl_->sd.poles.begin(), impl_->sd.poles.begin() + count);
      }
      case Repr::TwoSpectra: {
        require(count <= static_cast<int>(impl_->poles.size()), Errc::InsufficientSamples,
                "truncated spectra hold fewer poles");
        return std::vector<double>(impl_->poles.begin(), impl_->poles.begin() + count);
      }
    }
    return {};
  }

 private:
  struct Impl {
    Repr repr = Repr::Ratio;
    CharFn num, den;  // ratio pair, or the zero-potential model pair
    SpectralData sd;
    std::vector<double> poles, zeros, model_poles, model_zeros;
    Complex c_norm{1.0, 0.0};
    std::vector<Complex> c_by_radius;
    int vertex_id = -1;
  };
  explicit WeylFn(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<Impl> impl_;
};

// M_k = Delta_k / Delta by Cramer's rule; poles are the spectrum of the base
// problem. The pair is oriented so that i rho M -> 1 (Robin-normalized).
inline WeylFn weyl_ratio(const MetricGraph& g, const Potential& pot, int vertex_id,
                         const RunConfig& cfg) {
  WeylVariantPair pair = robin_type_pair(g, vertex_id);
  return WeylFn::ratio(CharFn::make(g, pot, pair.num, cfg), CharFn::make(g, pot, pair.den, cfg),
                       vertex_id);
}

// With the U = y' + h y normalization the residues of M are positive and
// Im M < 0 in the upper half-plane; checks that fixed sign.
inline bool weyl_sign_consistent(const WeylFn& m, const std::vector<Complex>& probes) {
  for (Complex z : probes) {
    if (z.imag() == 0.0) continue;
    Complex v = m(z);
    if (v.imag() * z.imag() >= 0.0) return false;
  }
  return true;
}

namespace detail {

// Residues at known simple poles by contour integration with a two-radius
// consistency check.
struct ResidueSet {
  std::vector<double> residues;
  double worst_two_radius_dev = 0.0;
};

inline ResidueSet residues_at(const std::function<Complex(Complex)>& f,
                              const std::vector<double>& poles, const RunConfig& cfg) {
  ResidueSet out;
  out.residues.resize(poles.size());
  std::vector<double> dev(poles.size());
  std::vector<double> radii(poles.size());
  for (std::size_t l = 0; l < poles.size(); ++l) {
    double gap = 1e300;
    if (l > 0) gap = std::min(gap, poles[l] - poles[l - 1]);
    if (l + 1 < poles.size()) gap = std::min(gap, poles[l + 1] - poles[l]);
    if (poles.size() == 1) gap = std::max(1.0, std::abs(poles[0]));
    radii[l] = gap / 3.0;
  }
  std::vector<Complex> a1(poles.size()), a2(poles.size());
  parallel_for(poles.size(), cfg.worker_count(), [&](std::size_t l) {
    a1[l] = contour_residue(f, Complex(poles[l], 0.0), radii[l]);
    a2[l] = contour_residue(f, Complex(poles[l], 0.0), radii[l] / 2.0);
  });
  double amax = 0.0;
  for (std::size_t l = 0; l < poles.size(); ++l) amax = std::max(amax, std::abs(a1[l]));
  for (std::size_t l = 0; l < poles.size(); ++l) {
    double scale = std::max(std::abs(a1[l]), 0.01 * amax);
    double d = std::abs(a1[l] - a2[l]) / std::max(scale, 1e-300);
    out.worst_two_radius_dev = std::max(out.worst_two_radius_dev, d);
    require(d <= 100 * cfg.tol_residue, Errc::ContourTooTight,
            "residue did not stabilize across contour radii");
    Complex a = a1[l];
    require(std::abs(a.imag()) <= 1e-6 * (std::abs(a.real()) + 0.01 * amax) + 1e-12,
            Errc::PoleExtractionFailed, "residue is not real for self-adjoint data");
    out.residues[l] = a.real();
  }
  return out;
}

// First L eigenvalues of a CharFn, all required simple.
inline std::vector<double> simple_poles(const CharFn& cf, int count) {
  double total = cf.problem().total_length();
  double guess_rho = (count + 2.0) * std::numbers::pi / total;
  double lmax = std::max(10.0, guess_rho * guess_rho);
  for (int it = 0; it < 8; ++it) {
    Spectrum s = cf.spectrum(lmax);
    std::vector<double> flat;
    for (const auto& ev : s.values) {
      require(ev.multiplicity == 1 || static_cast<int>(flat.size()) >= count, Errc::MultiplePole,
              "multiple pole in the truncation window; outside this artifact's scope");
      for (int i = 0; i < ev.multiplicity; ++i) flat.push_back(ev.lambda);
    }
    if (static_cast<int>(flat.size()) >= count) {
      flat.resize(count);
      return flat;
    }
    lmax *= 1.8;
  }
  fail(Errc::InsufficientSamples, "could not collect the requested pole count");
}

}  // namespace detail

// Poles of the denominator with residues of M by contour integration, plus
// the same-graph zero-potential companion.
inline SpectralData extract_spectral_data(const MetricGraph& g, const Potential& pot,
                                          int vertex_id, int trunc, const RunConfig& cfg) {
  WeylVariantPair pair = robin_type_pair(g, vertex_id);
  CharFn num = CharFn::make(g, pot, pair.num, cfg);
  CharFn den = CharFn::make(g, pot, pair.den, cfg);
  CharFn num0 = zero_potential_charfn(g, pair.num, cfg);
  CharFn den0 = zero_potential_charfn(g, pair.den, cfg);

  SpectralData sd;
  sd.vertex_id = vertex_id;
  sd.trunc = trunc;
  sd.poles = detail::simple_poles(den, trunc);
  sd.model_poles = detail::simple_poles(den0, trunc);
  auto m = [&](Complex z) { return num(z) / den(z); };
  auto m0 = [&](Complex z) { return num0(z) / den0(z); };
  sd.residues = detail::residues_at(m, sd.poles, cfg).residues;
  sd.model_residues = detail::residues_at(m0, sd.model_poles, cfg).residues;
  sd.check();
  return sd;
}

inline WeylFn weyl_from_spectral_data(const SpectralData& sd, const MetricGraph& g,
                                      const RunConfig& cfg) {
  require(!sd.poles.empty(), Errc::EmptyData, "no spectral data");
  WeylVariantPair pair = robin_type_pair(g, sd.vertex_id);
  return WeylFn::from_data(sd, zero_potential_charfn(g, pair.num, cfg),
                           zero_potential_charfn(g, pair.den, cfg));
}

// Builds M from the base spectrum and the flipped spectrum via the Hadamard
// quotient with the exact zero-potential tail; the constant comes from the
// i rho M -> 1 limit evaluated on arg rho = pi/4 at three radii.
inline WeylFn weyl_from_two_spectra(const MetricGraph& g, int vertex_id,
                                    std::vector<double> base_spectrum,
                                    std::vector<double> flip_spectrum, const RunConfig& cfg) {
  require(base_spectrum.size() == flip_spectrum.size(), Errc::LengthMismatch,
          "the two spectra must share the truncation");
  int L = static_cast<int>(base_spectrum.size());
  require(L >= 20, Errc::BadInput, "two-spectra reconstruction needs L >= 20");

  // orient so 'poles' belong to the Robin/Neumann-type base at the vertex
  int vi = g.vindex(vertex_id);
  bool dirichlet_base = g.bc(vi)->type == BcType::Dirichlet;
  std::vector<double> poles = dirichlet_base ? flip_spectrum : base_spectrum;
  std::vector<double> zeros = dirichlet_base ? base_spectrum : flip_spectrum;

  // identical lists cannot belong to a regular pair
  bool identical = true;
  for (int l = 0; l < L; ++l)
    if (std::abs(poles[l] - zeros[l]) > 1e-9 * (1.0 + std::abs(poles[l]))) identical = false;
  require(!identical, Errc::InterlacedMismatch,
          "base and flipped spectra coincide; lists are misaligned");
  // interlacing with the direction the orientation fixes: the derivative-type
  // problem lies below its Dirichlet flip, lambda_l <= lambda_lk <= lambda_{l+1}
  for (int l = 0; l < L; ++l) {
    double slack = 1e-9 * (1.0 + std::abs(poles[l]));
    require(poles[l] <= zeros[l] + slack, Errc::InterlacedMismatch,
            "spectra do not interlace in the expected order (lists swapped?)");
    if (l + 1 < L)
      require(zeros[l] <= poles[l + 1] + slack, Errc::InterlacedMismatch,
              "spectra do not interlace");
  }

  WeylVariantPair pair = robin_type_pair(g, vertex_id);
  CharFn num0 = zero_potential_charfn(g, pair.num, cfg);
  CharFn den0 = zero_potential_charfn(g, pair.den, cfg);
  std::vector<double> model_poles = detail::simple_poles(den0, L);
  std::vector<double> model_zeros = detail::simple_poles(num0, L);

  auto raw = [&](Complex lam) {
    Complex v = num0(lam) / den0(lam);
    for (int l = 0; l < L; ++l) {
      v *= (zeros[l] - lam) / (poles[l] - lam);
      v *= (model_poles[l] - lam) / (model_zeros[l] - lam);
    }
    return v;
  };
  std::vector<Complex> c_by_radius;
  for (double R : {40.0, 60.0, 80.0}) {
    Complex rho = R * std::exp(Complex(0, std::numbers::pi / 4));
    Complex lam = rho * rho;
    Complex irho(0, 1);
    irho *= rho;
    c_by_radius.push_back(1.0 / (irho * raw(lam)));
  }
  // median by absolute value
  std::vector<Complex> sorted = c_by_radius;
  std::sort(sorted.begin(), sorted.end(),
            [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
  Complex c = sorted[1];

  return WeylFn::two_spectra(poles, zeros, model_poles, model_zeros, num0, den0, c, c_by_radius,
                             vertex_id);
}

// Entire-function reconstruction of one characteristic function from its
// spectrum: Delta^0(lambda) * prod (lambda_n - lambda)/(lambda_n^0 - lambda),
// which equals the A_k^0-normalized Hadamard display with the tail completed
// by the zero-potential eigenvalues.
class HadamardCharFn {
 public:
  HadamardCharFn() = default;
  HadamardCharFn(CharFn model, std::vector<double> data_eigs, std::vector<double> model_eigs)
      : model_(std::move(model)), data_(std::move(data_eigs)), model_eigs_(std::move(model_eigs)) {
    require(data_.size() == model_eigs_.size(), Errc::LengthMismatch,
            "hadamard reconstruction needs paired eigenvalue lists");
    int zdata = 0, zmodel = 0;
    for (double l : data_)
      if (std::abs(l) < 1e-9) ++zdata;
    for (double l : model_eigs_)
      if (std::abs(l) < 1e-9) ++zmodel;
    require(zdata == zmodel, Errc::ZeroHandling,
            "zero-eigenvalue multiplicity differs between data and the model");
  }

  Complex operator()(Complex lambda) const {
    Complex v = model_(lambda);
    for (std::size_t n = 0; n < data_.size(); ++n) {
      if (std::abs(data_[n]) < 1e-9 && std::abs(model_eigs_[n]) < 1e-9) continue;
      v *= (data_[n] - lambda) / (model_eigs_[n] - lambda);
    }
    return v;
  }

  const CharFn& model() const { return model_; }

 private:
  CharFn model_;
  std::vector<double> data_;
  std::vector<double> model_eigs_;
};

inline HadamardCharFn hadamard_charfn(const std::vector<double>& spectrum, const MetricGraph& g,
                                      const BcVariant& variant, const RunConfig& cfg) {
  CharFn model = zero_potential_charfn(g, variant, cfg);
  std::vector<double> model_eigs = model.spectrum(1.0).flat();  // warm small scan
  model_eigs = [&] {
    double total = model.problem().total_length();
    double guess = (spectrum.size() + 2.0) * std::numbers::pi / total;
    double lmax = std::max(10.0, guess * guess);
    for (int it = 0; it < 8; ++it) {
      auto flat = model.spectrum(lmax).flat(spectrum.size());
      if (flat.size() >= spectrum.size()) return flat;
      lmax *= 1.8;
    }
    fail(Errc::InsufficientSamples, "zero-potential reference spectrum too short");
  }();
  return HadamardCharFn(model, spectrum, model_eigs);
}

}  // namespace graphsl
