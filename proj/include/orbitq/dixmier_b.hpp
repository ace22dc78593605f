#pragma once

// Filtered quotient algebra built on top of the Weyl quantization.
//
// Inside the even part of the Weyl algebra, the span of the elements
// xi^x A - A xi^y (x, y in the reducing Lie algebra) together with the
// images of 1 - rho for the finite reflection generators defines a
// two-sided "reduction" subspace M.  The quotient B = W^even / M is a
// filtered algebra whose associated graded ring is expected to match the
// classical symplectic-reduction ring computed by reduction_classical.
//
// Two independent routes are computed per filtration degree:
//   route 1: dim B_d = dim W^even_d - dim M_d (plain codimension), and
//   route 2: a concrete basis of invariant representatives, i.e. the
//            quotient of the joint-invariant subspace W^inv_d by
//            M_d \cap W^inv_d.  Route 2 carries the algebra structure
//            (products, involutions, trace), because M \cap W^inv is a
//            two-sided ideal of W^inv while M itself is only a
//            sub-bimodule of W^even.
//
// Truncation ("slack"): M is infinitely generated, so degree-d pieces are
// approximated from generators A of filtration <= d - 1 + slack.  The
// commutator and reflection parts are always taken over all of W^even_d
// (they stay inside the filtration level); only the anticommutator part
// grows with slack, and its overflow into higher degrees is removed by
// echelon elimination against the high-degree monomial columns.  The
// engine escalates the slack per degree until the graded dimension
// matches the classical prediction or the configured maximum is reached.

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "orbitq/exact_linalg.hpp"
#include "orbitq/reduction_classical.hpp"
#include "orbitq/weyl_quant.hpp"

namespace orbitq::dixmier_b {

using exact_linalg::ExactMatrix;
using exact_linalg::Scalar;
using weyl_quant::Quantization;
using weyl_quant::WeylElement;

// One line of the graded-dimension comparison between the quantized
// quotient and the classical reduction ring.
struct BRow {
  int d = 0;                        // filtration degree
  int slack = 0;                    // truncation slack actually used
  std::size_t dim_weven = 0;        // dim W^even_d
  std::size_t dim_winv = 0;         // dim of the joint-invariant subspace
  std::size_t dim_mpart = 0;        // dim M_d (route 1)
  std::size_t dim_b = 0;            // dim B_d via route 1 (codimension)
  std::size_t dim_b_invariant = 0;  // dim B_d via route 2 (basis size)
  std::size_t gr_b = 0;             // dim B_d - dim B_{d-1}
  std::size_t predicted = 0;        // classical quotient dimension in degree d
  bool match = false;               // routes agree and gr_b == predicted
};

// Applies an exact linear change of natural coordinates to a Weyl element.
// The map must commute with the diagonal torus (equivalently: preserve the
// spans of the position and momentum generators separately), so that
// substitution into normal symbols is an algebra automorphism; otherwise
// Internal is thrown.  Used for the finite reflection actions.
WeylElement apply_frame_map(const Quantization& quant,
                            const ExactMatrix& natural_map,
                            const WeylElement& a);

class BAlgebra {
 public:
  // max_slack bounds the automatic truncation escalation in row().
  explicit BAlgebra(const Quantization& quant, int max_slack = 1);

  // Graded-dimension data for one filtration degree; cached.  Escalates
  // the slack until BRow::match or max_slack.
  const BRow& row(int d);
  std::vector<BRow> window(int dmax);

  // Element of B_d in the route-2 basis: for each torus weight, the
  // coordinate vector over that weight's quotient-basis positions.
  struct Element {
    int d = 0;
    std::map<std::vector<int>, std::vector<Scalar>> coords;
    bool is_zero() const;
  };

  std::size_t dim_b(int d);
  std::vector<Element> basis(int d);

  // Projection W^even_d -> B_d.  The input must be even, of filtration
  // <= d, and invariant (the projection is computed through invariant
  // representatives); a non-invariant input throws Internal.
  Element reduce(const WeylElement& a, int d);
  // Canonical invariant representative of an element of B_d.
  WeylElement lift(const Element& e);
  // Filtration embedding B_d -> B_{d'} for d' >= e.d.
  Element embed(const Element& e, int d);

  Element mul(const Element& a, const Element& b);
  Element add(const Element& a, const Element& b);
  Element scaled(const Element& a, const Scalar& c);
  Element one(int d = 0);

  // Induced involutions (order-reversing tau, antilinear theta).
  Element tau(const Element& e);
  Element theta(const Element& e);

  // Image of a reducing-group generator in B_1.
  Element lie_image(std::size_t g_index);

  // Coordinates of e over the full degree-e.d basis, in basis() order.
  std::vector<Scalar> flat(const Element& e);

  // Invariant trace functional B_d -> C normalized by T(1) = 1.  Requires
  // the span of the group-action images inside B_d to have codimension
  // exactly one and to miss the identity; otherwise SplitFailure.
  Scalar trace(const Element& e);
  // Gram matrix G[i][j] = T(b_i * theta(b_j)) over the basis of B_d.
  ExactMatrix gram(int d);

  // Image of the quadratic Casimir element in B_2.  Must be an exact
  // scalar multiple of the identity (else NotScalar); the computation is
  // repeated in a transformed generator basis and the two scalars must
  // agree (else NotScalar).
  Scalar casimir_scalar();

  // dims[p] = rank in B_p of all ordered products of <= p reducing-group
  // generators (enveloping-algebra image), for p = 0..pmax.
  std::vector<std::size_t> enveloping_dims(int pmax);

  // Diagnostic: route-1 dimension of M_d at a forced slack, computed
  // fresh without touching the caches.  Used by consistency tests.
  std::size_t mpart_dim_at(int d, int slack);

  const Quantization& quant() const { return *quant_; }
  reduction_classical::Reduction& reduction() { return red_; }
  int max_slack() const { return max_slack_; }

 private:
  struct Block {
    reduction_classical::WeightBlock monos;  // even monomials, deg <= 2d
    bool s_trivial = false;
    std::size_t mpart = 0;  // route-1 rank of M within this block
    // Route-2 data (s_trivial blocks only):
    ExactMatrix inv_red;                // canonical invariant basis (rref)
    std::vector<std::size_t> inv_piv;   // its pivot columns
    ExactMatrix m_red;                  // rref of M cap W^inv in inv coords
    std::vector<std::size_t> m_piv;     // its pivot positions
    std::vector<std::size_t> b_pos;     // complement positions = B basis
  };
  struct DegreeData {
    int slack = -1;
    std::map<std::vector<int>, Block> blocks;
    BRow row;
    // Global ordering of the route-2 basis: (weight, local position).
    std::vector<std::pair<std::vector<int>, std::size_t>> b_index;
    std::map<std::vector<int>, std::size_t> b_offset;
    // Trace data (lazy): columns are the action-image span and the
    // identity, so a trace evaluation is one linear solve.
    bool trace_ready = false;
    ExactMatrix trace_cols;
    std::size_t trace_rank = 0;
  };

  DegreeData& data(int d);
  DegreeData build_degree(int d, int slack) const;
  void build_trace(DegreeData& dd, int d);
  bool s_trivial_weight(const std::vector<int>& w) const;
  std::vector<Scalar> block_coords(const Block& blk, const WeylElement& a,
                                   const std::vector<int>& w) const;

  const Quantization* quant_;
  reduction_classical::Reduction red_;
  int max_slack_;
  std::vector<ExactMatrix> refl_frame_;  // natural maps of the reflections
  bool has_g_refl_ = false;
  ExactMatrix g_refl_frame_;
  std::map<int, DegreeData> degrees_;
};

// Runs the graded-dimension comparison for degrees 0..dmax.
std::vector<BRow> verify_quotient(BAlgebra& alg, int dmax);

}  // namespace orbitq::dixmier_b
