#pragma once

// Sparse multivariate polynomials over Q(i) with a graded-lex canonical
// order, variable registries carrying ladder metadata and torus weights, and
// the constant-coefficient Poisson bracket attached to a symplectic pairing.

#include "orbitq/exact_linalg.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace orbitq {
namespace poly_symplectic {

using exact_linalg::ExactMatrix;
using exact_linalg::Scalar;

// Exponent vector, dense over the registry's variables.
using Monomial = std::vector<std::uint8_t>;

int monomial_degree(const Monomial& m);

// Canonical order: by total degree, then lexicographic on exponents.
struct MonomialOrder {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

struct VarInfo {
  std::string name;
  int level = 0;    // ladder level the Hom block belongs to
  char block = 0;   // 'A', 'B' (GL sides) or 'C' (O/Sp)
  int row = 0, col = 0;
  std::vector<int> weight;  // T0 torus weight of the coordinate
};

class VariableRegistry {
 public:
  VariableRegistry() = default;
  explicit VariableRegistry(std::vector<VarInfo> vars);

  std::size_t size() const { return vars_.size(); }
  const VarInfo& info(std::size_t k) const { return vars_[k]; }
  const std::string& name(std::size_t k) const { return vars_[k].name; }
  std::size_t weight_dim() const { return weight_dim_; }
  std::vector<int> monomial_weight(const Monomial& m) const;

  // Identity used to detect cross-registry operations.
  std::uint64_t id() const { return id_; }

 private:
  std::vector<VarInfo> vars_;
  std::size_t weight_dim_ = 0;
  std::uint64_t id_ = 0;
};

using RegistryPtr = std::shared_ptr<const VariableRegistry>;

class SparsePoly {
 public:
  SparsePoly() = default;
  explicit SparsePoly(RegistryPtr reg) : reg_(std::move(reg)) {}
  static SparsePoly constant(RegistryPtr reg, const Scalar& c);
  static SparsePoly variable(RegistryPtr reg, std::size_t index);

  const RegistryPtr& registry() const { return reg_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;  // -1 for the zero polynomial
  bool is_homogeneous() const;
  std::size_t term_count() const { return terms_.size(); }
  const std::map<Monomial, Scalar, MonomialOrder>& terms() const {
    return terms_;
  }

  void add_term(const Monomial& m, const Scalar& c);

  SparsePoly& operator+=(const SparsePoly& o);
  SparsePoly& operator-=(const SparsePoly& o);
  SparsePoly operator-() const;
  SparsePoly operator+(const SparsePoly& o) const;
  SparsePoly operator-(const SparsePoly& o) const;
  SparsePoly operator*(const SparsePoly& o) const;
  SparsePoly scaled(const Scalar& c) const;
  friend bool operator==(const SparsePoly& a, const SparsePoly& b);

  SparsePoly derivative(std::size_t var) const;
  // Substitute each variable by a linear form; images[k] is the coefficient
  // row of the image of variable k over the target registry.
  SparsePoly linear_substitute(const ExactMatrix& images,
                               const RegistryPtr& target) const;
  // Coefficients conjugated (antilinear half of an antilinear map).
  SparsePoly conj_coefficients() const;

  std::string str() const;

 private:
  RegistryPtr reg_;
  std::map<Monomial, Scalar, MonomialOrder> terms_;
};

void require_same_registry(const SparsePoly& a, const SparsePoly& b);

// Symplectic pairing data on the coordinate space: the form matrix and the
// Poisson tensor used for brackets ({z_a, z_b} = poisson(a,b)).
struct OmegaData {
  RegistryPtr registry;
  ExactMatrix omega;    // pairing of basis vectors of L
  ExactMatrix poisson;  // omega^{-1}: bracket of coordinate functions
};

SparsePoly poisson_bracket(const SparsePoly& f, const SparsePoly& g,
                           const OmegaData& omega);

// All monomials of the exact natural degree, in canonical order.
std::vector<Monomial> monomial_basis(const VariableRegistry& reg, int degree);

// Coefficient row of f over an indexed monomial list (error if f has support
// outside the list).
std::vector<Scalar> coords_of(
    const SparsePoly& f,
    const std::map<Monomial, std::size_t, MonomialOrder>& index);

}  // namespace poly_symplectic
}  // namespace orbitq
