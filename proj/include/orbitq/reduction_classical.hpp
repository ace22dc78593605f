#pragma once

// Classical side of the correspondence: the invariant polynomials on the
// ladder space, the ideal generated by the level->=1 momentum quadratics,
// graded dimensions of the reduction (invariants modulo the invariant part
// of the ideal), the image of the level-0 momenta inside that quotient, and
// a Koszul window certifying the complete-intersection property of the
// momentum ideal at small degrees.  All linear algebra runs per torus-weight
// block, which keeps every rank computation dense but small.

#include "orbitq/kp_model.hpp"

#include <gmpxx.h>

#include <map>
#include <utility>
#include <vector>

namespace orbitq {
namespace reduction_classical {

using exact_linalg::ExactMatrix;
using exact_linalg::Scalar;
using kp_model::KPModel;
using poly_symplectic::Monomial;
using poly_symplectic::MonomialOrder;
using poly_symplectic::RegistryPtr;
using poly_symplectic::SparsePoly;

// Monomials of one natural degree and one torus weight, in canonical order.
struct WeightBlock {
  std::vector<Monomial> monos;
  std::map<Monomial, std::size_t, MonomialOrder> index;
};
using BlockMap = std::map<std::vector<int>, WeightBlock>;

// Degree-d monomials of a registry split by torus weight.
BlockMap weight_blocks(const poly_symplectic::VariableRegistry& reg,
                       int degree);

mpz_class binomial(unsigned long n, unsigned long k);

// One row of the graded dimension table, at natural degree 2j.
struct HilbertRow {
  int j = 0;
  mpz_class dim_p;                // all polynomials of natural degree 2j
  std::size_t dim_inv = 0;        // invariants under the level->=1 symmetry
  std::size_t dim_ideal = 0;      // momentum ideal
  std::size_t dim_ideal_inv = 0;  // invariant part of the ideal
  std::size_t dim_quotient = 0;   // dim_inv - dim_ideal_inv
  std::size_t gamma_image = 0;    // level-0 momentum products in the quotient
};

// One row of the Koszul window, at natural degree n.
struct KoszulRow {
  int n = 0;
  mpz_class dim_p;
  std::size_t dim_quotient = 0;   // polynomials modulo the momentum ideal
  mpz_class expected_quotient;    // coefficient of (1-t^2)^m / (1-t)^N
  std::size_t dim_h1 = 0;
  std::size_t dim_h2 = 0;
};

// Incremental reduction engine over one model.  Caches monomial blocks and
// all computed row spaces, so successive degrees share work.  The model must
// outlive the engine.
class Reduction {
 public:
  explicit Reduction(const KPModel& model);

  HilbertRow hilbert_row(int j);
  KoszulRow koszul_row(int n);

  // Verifies {f, g} stays inside the invariant part of the ideal for every
  // invariant quadratic f and every degree-2j invariant ideal element g.
  bool poisson_closed(int j);

  const KPModel& model() const { return *model_; }

 private:
  using Key = std::pair<int, std::vector<int>>;

  const BlockMap& blocks(int degree);
  const ExactMatrix& inv_rows(int degree, const std::vector<int>& w);
  std::size_t ideal_rank(int degree, const std::vector<int>& w);
  const ExactMatrix& ideal_rows(int degree, const std::vector<int>& w);
  const ExactMatrix& ideal_inv_rows(int degree, const std::vector<int>& w);
  std::size_t ideal_dim(int degree);
  std::size_t koszul_rank(int t, int n);
  std::size_t gamma_image_dim(int j);
  bool s_zero(const std::vector<int>& w) const;
  ExactMatrix ideal_row_matrix(int degree, const std::vector<int>& w);

  const KPModel* model_;
  RegistryPtr reg_;
  std::map<int, BlockMap> blocks_;
  std::map<Key, ExactMatrix> inv_rows_;
  std::map<Key, std::size_t> ideal_rank_;
  std::map<Key, ExactMatrix> ideal_rows_;      // kept for s-trivial weights
  std::map<Key, ExactMatrix> ideal_inv_rows_;
  std::map<std::pair<int, int>, std::size_t> koszul_rank_;
};

// Convenience drivers for whole windows.
std::vector<HilbertRow> reduced_hilbert(Reduction& red, int jmax);
std::vector<KoszulRow> koszul_window(Reduction& red, int nmax);

}  // namespace reduction_classical
}  // namespace orbitq
