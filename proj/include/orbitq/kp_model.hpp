#pragma once

// The symplectic model of an orbit closure: coordinates of the ladder Hom
// space L, the symplectic form and Poisson tensor, weight-adapted bases of
// the acting Lie algebras with their momentum quadratics, reflection
// generators, a torus-homogeneous Darboux frame, and the antilinear
// conjugation matrix used by the quantized involutions.  Every pinned sign
// convention is re-verified symbolically while the model is built.

#include "orbitq/exact_linalg.hpp"
#include "orbitq/orbit_catalog.hpp"
#include "orbitq/poly_symplectic.hpp"

#include <string>
#include <vector>

namespace orbitq {
namespace kp_model {

using exact_linalg::ExactMatrix;
using exact_linalg::Scalar;
using orbit_catalog::OrbitSpec;
using poly_symplectic::OmegaData;
using poly_symplectic::RegistryPtr;
using poly_symplectic::SparsePoly;

// One basis element of g (level 0) or of an s factor (level >= 1).
struct LieElement {
  int level = 0;
  ExactMatrix mat;           // matrix on V_level in the standardized basis
  ExactMatrix point_action;  // induced linear map on L (point flow)
  ExactMatrix coord_action;  // derivation rule on coordinates: -point_action
  std::vector<int> weight;   // torus weight of the momentum polynomial
  SparsePoly moment;         // gamma (level 0) or sigma (level >= 1)
};

// A reflection generator: an involutive symplectic substitution of the
// coordinates coming from diag(-1,1,...,1) on one orthogonal level.
struct Reflection {
  int level = 0;
  ExactMatrix subst;  // coordinate substitution matrix, subst^2 = I
};

struct KPModel {
  OrbitSpec spec;
  orbit_catalog::LadderData lad;
  RegistryPtr registry;  // natural coordinates of L
  OmegaData omega;

  std::vector<LieElement> g_basis;
  std::vector<LieElement> s_basis;
  std::vector<Reflection> reflections;    // S-side generators (levels >= 1)
  bool has_g_reflection = false;
  Reflection g_reflection;                // present when G is orthogonal

  // varsigma(x) = -conj-transpose(x), expanded in the stored bases:
  // varsigma(basis_k) = sum_l varsigma_*(k,l) basis_l.
  ExactMatrix varsigma_g, varsigma_s;

  // Torus-homogeneous Darboux frame: q_k is the coordinate q_vars[k]; p_k is
  // the combination of opposite-weight coordinates with {q_k, p_l} = -delta.
  std::vector<std::size_t> q_vars;
  ExactMatrix to_frame;    // rows: q_1..q_m, p_1..p_m over natural coords
  ExactMatrix from_frame;  // its inverse
  RegistryPtr frame_registry;

  // Antilinear conjugation z -> theta_mat * z (plus coefficient conjugation)
  // realizing the quantized antilinear involution; theta_mat^2 = -identity.
  ExactMatrix theta_mat;
  long theta_lambda = 1;  // theta_mat = omega / theta_lambda

  // Weight-vector components [s_weight_begin, weight_dim) belong to the
  // level->=1 torus factors; the prefix belongs to the level-0 torus.
  std::size_t s_weight_begin = 0;

  std::size_t dim_L() const { return registry->size(); }
  std::size_t dim_s() const { return s_basis.size(); }
  std::size_t dim_g() const { return g_basis.size(); }

  // Pinned-convention fingerprint; part of every cache key and report.
  std::string convention_summary() const;
};

// Builds the model and verifies, exactly and on full bases: antisymmetry and
// nondegeneracy of the form; invariance of the form under all actions and
// reflections; commutation of the level-0 and level->=1 actions; the
// Hamiltonian correspondence {moment_y, z} = y.z; both bracket families
// {gamma_y, gamma_y'} = gamma_[y,y'], {sigma_x, sigma_x'} = sigma_[x,x'];
// {gamma_y, sigma_x} = 0; invariance of every gamma under the level->=1
// actions and reflections; torus homogeneity of all data; and the
// conjugation-matrix identities theta_mat^2 = -I, theta*(moment_y) =
// moment_varsigma(y).  Throws ModelInconsistency (or, for the conjugation
// checks, InvolutionInconsistency) on any failure.
KPModel build_model(const OrbitSpec& spec);

// The standardized Gram matrix of a level: identity (orthogonal) or the
// standard block form [[0, I], [-I, 0]] (symplectic).
ExactMatrix standardized_gram(orbit_catalog::FormKind kind, std::size_t dim);

// Weight-adapted basis of gl(d) / o(d) (identity Gram) / sp(d) (standard J).
std::vector<ExactMatrix> lie_basis_for(orbit_catalog::GroupKind kind,
                                       std::size_t d);

// Derivation action of a Lie element on a polynomial, from its coord_action.
SparsePoly apply_derivation(const LieElement& el, const SparsePoly& f);

// Substitution action of a reflection (or any coordinate substitution).
SparsePoly apply_substitution(const ExactMatrix& subst, const SparsePoly& f);

// theta as an operation on polynomials: substitute z -> theta_mat z and
// conjugate coefficients.
SparsePoly apply_theta(const KPModel& model, const SparsePoly& f);

}  // namespace kp_model
}  // namespace orbitq
