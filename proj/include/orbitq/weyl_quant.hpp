#pragma once

// Exact Weyl algebra over the torus-homogeneous Darboux frame of a model:
// normal-ordered elements, the noncommutative product, the quadratic lift
// xi of every momentum polynomial, principal symbols back in the natural
// coordinates, and the two involutions (the linear anti-automorphism tau
// and the antilinear automorphism theta).  Constructing a Quantization runs
// an exact verification battery: canonical commutation relations, bracket
// compatibility of all xi's with the classical momenta, the derivation
// identity [xi, hat z] = hat(action z), principal symbols of the xi's, and
// the involution identities on generators and samples.

#include "orbitq/kp_model.hpp"

#include <vector>

namespace orbitq {
namespace weyl_quant {

using exact_linalg::ExactMatrix;
using exact_linalg::Scalar;
using kp_model::KPModel;
using poly_symplectic::Monomial;
using poly_symplectic::RegistryPtr;
using poly_symplectic::SparsePoly;

// A Weyl algebra element in normal order (all q's left of all p's) over the
// frame registry q_1..q_m, p_1..p_m.  The coefficient data is stored as a
// commutative polynomial whose monomial (a, b) stands for q^a p^b.
class WeylElement {
 public:
  explicit WeylElement(RegistryPtr frame);
  static WeylElement constant(const RegistryPtr& frame, const Scalar& c);
  static WeylElement generator(const RegistryPtr& frame, std::size_t var);
  // Adopts a commutative polynomial as normal-ordered coefficients.
  static WeylElement from_normal_symbol(SparsePoly p);

  const SparsePoly& normal_symbol() const { return poly_; }
  const RegistryPtr& registry() const { return poly_.registry(); }
  bool is_zero() const { return poly_.is_zero(); }
  int degree() const { return poly_.degree(); }  // natural filtration degree
  bool is_even() const;

  WeylElement& operator+=(const WeylElement& o);
  WeylElement& operator-=(const WeylElement& o);
  WeylElement operator-() const;
  WeylElement scaled(const Scalar& c) const;
  friend WeylElement operator+(WeylElement a, const WeylElement& b) {
    a += b;
    return a;
  }
  friend WeylElement operator-(WeylElement a, const WeylElement& b) {
    a -= b;
    return a;
  }
  friend bool operator==(const WeylElement& a, const WeylElement& b) {
    return a.poly_ == b.poly_;
  }

 private:
  SparsePoly poly_;
};

// Normal-ordered product, by pairwise contraction
// p^b q^c = sum_k C(b,k) C(c,k) k!  q^(c-k) p^(b-k)  per Darboux pair.
WeylElement weyl_mul(const WeylElement& a, const WeylElement& b);

inline WeylElement commutator(const WeylElement& a, const WeylElement& b) {
  return weyl_mul(a, b) - weyl_mul(b, a);
}
inline WeylElement anticommutator(const WeylElement& a, const WeylElement& b) {
  return weyl_mul(a, b) + weyl_mul(b, a);
}

class Quantization {
 public:
  explicit Quantization(const KPModel& model);

  const KPModel& model() const { return *model_; }
  const RegistryPtr& frame() const { return model_->frame_registry; }

  const WeylElement& xi_g(std::size_t k) const { return xig_[k]; }
  const WeylElement& xi_s(std::size_t k) const { return xis_[k]; }

  // The natural coordinate z_a as a linear Weyl element.
  WeylElement hat(std::size_t natural_var) const;

  // Symmetrized quantization of a homogeneous quadratic in natural coords.
  WeylElement xi_of(const SparsePoly& quadratic) const;

  SparsePoly natural_to_frame(const SparsePoly& f) const;
  SparsePoly frame_to_natural(const SparsePoly& f) const;

  // Principal symbol at filtration level d, as a natural-coordinate
  // polynomial of degree 2d.  Throws DegreeTooSmall if the element has
  // terms above 2d.
  SparsePoly symbol(const WeylElement& a, int d) const;

  // Linear anti-automorphism with tau(hat z) = i hat z.
  WeylElement tau(const WeylElement& a) const;
  // Antilinear automorphism with theta(hat z) = hat(theta_mat z).
  WeylElement theta(const WeylElement& a) const;

 private:
  void verify() const;

  const KPModel* model_;
  ExactMatrix theta_frame_;  // to_frame * theta_mat * from_frame
  std::vector<WeylElement> xig_, xis_;
};

}  // namespace weyl_quant
}  // namespace orbitq
