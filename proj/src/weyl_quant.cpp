#include "orbitq/weyl_quant.hpp"

namespace orbitq {
namespace weyl_quant {

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

unsigned long binom_ul(unsigned long n, unsigned long k) {
  if (k > n) return 0;
  unsigned long out = 1;
  for (unsigned long i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
  return out;
}

unsigned long fact_ul(unsigned long n) {
  unsigned long out = 1;
  for (unsigned long i = 2; i <= n; ++i) out *= i;
  return out;
}

}  // namespace

WeylElement::WeylElement(RegistryPtr frame) : poly_(std::move(frame)) {}

WeylElement WeylElement::constant(const RegistryPtr& frame, const Scalar& c) {
  return from_normal_symbol(SparsePoly::constant(frame, c));
}

WeylElement WeylElement::generator(const RegistryPtr& frame, std::size_t var) {
  return from_normal_symbol(SparsePoly::variable(frame, var));
}

WeylElement WeylElement::from_normal_symbol(SparsePoly p) {
  WeylElement w(p.registry());
  w.poly_ = std::move(p);
  return w;
}

bool WeylElement::is_even() const {
  for (const auto& [m, c] : poly_.terms())
    if (poly_symplectic::monomial_degree(m) % 2 != 0) return false;
  return true;
}

WeylElement& WeylElement::operator+=(const WeylElement& o) {
  poly_ += o.poly_;
  return *this;
}

WeylElement& WeylElement::operator-=(const WeylElement& o) {
  poly_ -= o.poly_;
  return *this;
}

WeylElement WeylElement::operator-() const {
  return from_normal_symbol(-poly_);
}

WeylElement WeylElement::scaled(const Scalar& c) const {
  return from_normal_symbol(poly_.scaled(c));
}

WeylElement weyl_mul(const WeylElement& a, const WeylElement& b) {
  poly_symplectic::require_same_registry(a.normal_symbol(), b.normal_symbol());
  const RegistryPtr& reg = a.registry();
  const std::size_t m = reg->size() / 2;
  SparsePoly out(reg);
  struct Part {
    Monomial mono;
    Scalar c;
  };
  for (const auto& [ma, ca] : a.normal_symbol().terms()) {
    for (const auto& [mb, cb] : b.normal_symbol().terms()) {
      std::vector<Part> parts{{Monomial(2 * m, 0), ca * cb}};
      for (std::size_t i = 0; i < m; ++i) {
        const unsigned long aq = ma[i], ap = ma[m + i];
        const unsigned long bq = mb[i], bp = mb[m + i];
        const unsigned long kmax = std::min(ap, bq);
        std::vector<Part> next;
        next.reserve(parts.size() * (kmax + 1));
        for (const Part& part : parts) {
          for (unsigned long k = 0; k <= kmax; ++k) {
            Part np = part;
            np.mono[i] = static_cast<std::uint8_t>(aq + bq - k);
            np.mono[m + i] = static_cast<std::uint8_t>(ap + bp - k);
            if (k > 0)
              np.c *= Scalar(static_cast<long>(
                  binom_ul(ap, k) * binom_ul(bq, k) * fact_ul(k)));
            next.push_back(std::move(np));
          }
        }
        parts = std::move(next);
      }
      for (Part& part : parts) out.add_term(part.mono, part.c);
    }
  }
  return WeylElement::from_normal_symbol(std::move(out));
}

Quantization::Quantization(const KPModel& model) : model_(&model) {
  theta_frame_ = model.to_frame * model.theta_mat * model.from_frame;
  for (const auto& el : model.g_basis) xig_.push_back(xi_of(el.moment));
  for (const auto& el : model.s_basis) xis_.push_back(xi_of(el.moment));
  verify();
}

WeylElement Quantization::hat(std::size_t natural_var) const {
  SparsePoly f(frame());
  const std::size_t n = model_->registry->size();
  for (std::size_t j = 0; j < n; ++j) {
    const Scalar& c = model_->from_frame.at(natural_var, j);
    if (c.is_zero()) continue;
    Monomial m(n, 0);
    m[j] = 1;
    f.add_term(m, c);
  }
  return WeylElement::from_normal_symbol(std::move(f));
}

SparsePoly Quantization::natural_to_frame(const SparsePoly& f) const {
  return f.linear_substitute(model_->from_frame, frame());
}

SparsePoly Quantization::frame_to_natural(const SparsePoly& f) const {
  return f.linear_substitute(model_->to_frame, model_->registry);
}

WeylElement Quantization::xi_of(const SparsePoly& quadratic) const {
  WeylElement out(frame());
  if (quadratic.is_zero()) return out;
  if (!quadratic.is_homogeneous() || quadratic.degree() != 2)
    fail(ErrorCode::ModelInconsistency,
         "quantization input is not a homogeneous quadratic");
  SparsePoly f = natural_to_frame(quadratic);
  const Scalar half(mpq_class(1, 2));
  for (const auto& [m, c] : f.terms()) {
    std::size_t i = 0, j = 0;
    int seen = 0;
    for (std::size_t v = 0; v < m.size(); ++v) {
      for (int k = 0; k < m[v]; ++k) {
        (seen == 0 ? i : j) = v;
        ++seen;
      }
    }
    WeylElement gi = WeylElement::generator(frame(), i);
    WeylElement gj = WeylElement::generator(frame(), j);
    if (i == j)
      out += weyl_mul(gi, gj).scaled(c);
    else
      out += anticommutator(gi, gj).scaled(c * half);
  }
  return out;
}

SparsePoly Quantization::symbol(const WeylElement& a, int d) const {
  SparsePoly top(frame());
  for (const auto& [m, c] : a.normal_symbol().terms()) {
    const int deg = poly_symplectic::monomial_degree(m);
    if (deg > 2 * d)
      fail(ErrorCode::DegreeTooSmall,
           "element does not lie in the requested filtration level");
    if (deg == 2 * d) top.add_term(m, c);
  }
  return frame_to_natural(top);
}

WeylElement Quantization::tau(const WeylElement& a) const {
  const RegistryPtr& reg = a.registry();
  const std::size_t m = reg->size() / 2;
  WeylElement out(reg);
  for (const auto& [mono, c] : a.normal_symbol().terms()) {
    // tau(q^al p^be) = i^(|al|+|be|) p^be q^al, then renormal-order.
    Monomial qpart(2 * m, 0), ppart(2 * m, 0);
    int len = 0;
    for (std::size_t i = 0; i < m; ++i) {
      qpart[i] = mono[i];
      ppart[m + i] = mono[m + i];
      len += mono[i] + mono[m + i];
    }
    Scalar phase(1);
    for (int k = 0; k < len % 4; ++k) phase *= Scalar::i();
    SparsePoly pp(reg), qp(reg);
    pp.add_term(ppart, c * phase);
    qp.add_term(qpart, Scalar(1));
    out += weyl_mul(WeylElement::from_normal_symbol(std::move(pp)),
                    WeylElement::from_normal_symbol(std::move(qp)));
  }
  return out;
}

WeylElement Quantization::theta(const WeylElement& a) const {
  const RegistryPtr& reg = a.registry();
  const std::size_t n = reg->size();
  // Images of the frame generators under the conjugation matrix.
  std::vector<WeylElement> im;
  im.reserve(n);
  for (std::size_t v = 0; v < n; ++v) {
    SparsePoly f(reg);
    for (std::size_t j = 0; j < n; ++j) {
      const Scalar& c = theta_frame_.at(v, j);
      if (c.is_zero()) continue;
      Monomial mm(n, 0);
      mm[j] = 1;
      f.add_term(mm, c);
    }
    im.push_back(WeylElement::from_normal_symbol(std::move(f)));
  }
  WeylElement out(reg);
  for (const auto& [mono, c] : a.normal_symbol().terms()) {
    WeylElement prod = WeylElement::constant(reg, c.conj());
    for (std::size_t v = 0; v < n; ++v)
      for (int k = 0; k < mono[v]; ++k) prod = weyl_mul(prod, im[v]);
    out += prod;
  }
  return out;
}

void Quantization::verify() const {
  const KPModel& model = *model_;
  const RegistryPtr& freg = frame();
  const std::size_t n = model.registry->size();
  const std::size_t m = n / 2;

  // Canonical commutation relations of the frame generators.
  ExactMatrix frame_poisson =
      model.to_frame * model.omega.poisson * model.to_frame.transpose();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      WeylElement lhs = commutator(WeylElement::generator(freg, i),
                                   WeylElement::generator(freg, j));
      if (!(lhs == WeylElement::constant(freg, frame_poisson.at(i, j))))
        fail(ErrorCode::ModelInconsistency,
             "canonical commutation relations fail");
    }

  // Bracket compatibility with the classical momenta, across both families.
  std::vector<const kp_model::LieElement*> els;
  std::vector<const WeylElement*> xis;
  for (std::size_t k = 0; k < model.g_basis.size(); ++k) {
    els.push_back(&model.g_basis[k]);
    xis.push_back(&xig_[k]);
  }
  for (std::size_t k = 0; k < model.s_basis.size(); ++k) {
    els.push_back(&model.s_basis[k]);
    xis.push_back(&xis_[k]);
  }
  for (std::size_t a = 0; a < els.size(); ++a)
    for (std::size_t b = 0; b < els.size(); ++b) {
      SparsePoly cl = poly_symplectic::poisson_bracket(
          els[a]->moment, els[b]->moment, model.omega);
      if (!(commutator(*xis[a], *xis[b]) == xi_of(cl)))
        fail(ErrorCode::ModelInconsistency,
             "commutators do not match the classical brackets");
    }

  // Derivation identity on the linear generators.
  for (std::size_t a = 0; a < els.size(); ++a)
    for (std::size_t v = 0; v < n; ++v) {
      WeylElement rhs(freg);
      for (std::size_t w = 0; w < n; ++w) {
        const Scalar& c = els[a]->coord_action.at(v, w);
        if (!c.is_zero()) rhs += hat(w).scaled(c);
      }
      if (!(commutator(*xis[a], hat(v)) == rhs))
        fail(ErrorCode::ModelInconsistency,
             "quantized momentum does not generate its action");
    }

  // Principal symbols.
  for (std::size_t a = 0; a < els.size(); ++a)
    if (!(symbol(*xis[a], 1) == els[a]->moment))
      fail(ErrorCode::ModelInconsistency,
           "principal symbol does not recover the momentum");

  // Involution identities.  Samples cover generators, their products, and
  // the quantized momenta.
  for (std::size_t a = 0; a < els.size(); ++a) {
    if (!(tau(*xis[a]) == -*xis[a]))
      fail(ErrorCode::InvolutionInconsistency,
           "tau does not negate a quantized momentum");
    WeylElement th = theta(*xis[a]);
    WeylElement expect(freg);
    const bool in_g = a < model.g_basis.size();
    const ExactMatrix& vs = in_g ? model.varsigma_g : model.varsigma_s;
    const std::size_t base = in_g ? 0 : model.g_basis.size();
    for (std::size_t l = 0; l < vs.cols(); ++l) {
      const Scalar& c = vs.at(a - base, l);
      if (!c.is_zero()) expect += (*xis[base + l]).scaled(c);
    }
    if (!(th == expect))
      fail(ErrorCode::InvolutionInconsistency,
           "theta does not conjugate the momenta correctly");
  }
  std::vector<WeylElement> samples;
  for (std::size_t v = 0; v < std::min<std::size_t>(n, 4); ++v)
    samples.push_back(hat(v));
  if (!els.empty()) {
    samples.push_back(*xis[0]);
    samples.push_back(*xis[els.size() - 1]);
  }
  for (std::size_t a = 0; a < samples.size(); ++a)
    for (std::size_t b = 0; b < samples.size(); ++b) {
      const WeylElement ab = weyl_mul(samples[a], samples[b]);
      if (!(tau(ab) == weyl_mul(tau(samples[b]), tau(samples[a]))))
        fail(ErrorCode::InvolutionInconsistency,
             "tau is not an anti-homomorphism");
      if (!(theta(ab) == weyl_mul(theta(samples[a]), theta(samples[b]))))
        fail(ErrorCode::InvolutionInconsistency,
             "theta is not a homomorphism");
      if (ab.is_even()) {
        if (!(tau(tau(ab)) == ab))
          fail(ErrorCode::InvolutionInconsistency,
               "tau squared is not the identity on even elements");
        if (!(theta(theta(ab)) == ab))
          fail(ErrorCode::InvolutionInconsistency,
               "theta squared is not the identity on even elements");
        if (!(tau(theta(ab)) == theta(tau(ab))))
          fail(ErrorCode::InvolutionInconsistency,
               "tau and theta do not commute on even elements");
      }
    }
}

}  // namespace weyl_quant
}  // namespace orbitq
