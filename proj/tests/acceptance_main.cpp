// Acceptance battery for the orbit workbench.  Twelve independent checks,
// each printed as one line "CRITERION k: PASS/FAIL — detail"; the process
// exits 0 only when every criterion passes.  All equalities are exact
// (rational arithmetic); no tolerances appear anywhere.
//
// Desk catalog: gl2[2], gl3[2,1], gl3[3], sp2[2], o3[3], sp4[2,2] and the
// very-even o4[2,2].  Windows per criterion:
//   1  reduction dims equal sampled orbit-function dims, degrees <= 3
//      (<= 2 for the two rank-4 specs); wall-clock budget 600 s
//   2  graded quotient-algebra dims equal classical reduction dims,
//      filtration <= 2 (<= 3 for gl2[2], sp2[2]), truncation slack <= 1
//   3  complete-intersection Hilbert series and Koszul H1 = H2 = 0 through
//      polynomial degree 6
//   4  momentum identities on full bases
//   5  quantized momentum identities on full bases, filtration jumps <= 2
//   6  dim L - 2 dim s = orbit dimension
//   7  involution axioms on the quotient algebra, 20 sampled pairs per spec
//   8  trace functional: split at filtration <= 2, cyclicity on 20 pairs,
//      Hermitian Gram, unit pairing, action invariance on samples
//   9  positive-definite Gram for the GL specs (gl2[2] d <= 2,
//      gl3[2,1] d <= 1)
//  10  Casimir image is an exact scalar, stable under a basis change
//  11  generator words span the quotient algebra through filtration 2
//  12  command-line infrastructure: warm cache reproduces cold-cache
//      reports byte for byte under --stable; catalog batch run exits 0

#include "orbitq/dixmier_b.hpp"
#include "orbitq/sampling_oracle.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace {

using orbitq::exact_linalg::ExactMatrix;
using orbitq::exact_linalg::Scalar;
using orbitq::kp_model::KPModel;
using orbitq::kp_model::LieElement;
using orbitq::poly_symplectic::SparsePoly;
using BElement = orbitq::dixmier_b::BAlgebra::Element;

// ---------------------------------------------------------------------------
// Shared per-spec engines.  The model, quantization and quotient algebra
// hold references into each other, so every stage lives behind a stable
// heap address.

struct Bench {
  orbitq::orbit_catalog::OrbitSpec spec;
  std::unique_ptr<KPModel> model;
  std::unique_ptr<orbitq::weyl_quant::Quantization> quant;
  std::unique_ptr<orbitq::dixmier_b::BAlgebra> alg;
  int oracle_pmax = 3;  // criterion 1 window
  int b_dmax = 2;       // criterion 2 window
};

std::vector<Bench> build_benches() {
  using orbitq::orbit_catalog::GroupKind;
  const std::vector<std::tuple<GroupKind, int, std::vector<int>>> catalog = {
      {GroupKind::GL, 2, {2}},    {GroupKind::GL, 3, {2, 1}},
      {GroupKind::GL, 3, {3}},    {GroupKind::Sp, 2, {2}},
      {GroupKind::O, 3, {3}},     {GroupKind::Sp, 4, {2, 2}},
      {GroupKind::O, 4, {2, 2}}};
  std::vector<Bench> out;
  for (const auto& [g, n, parts] : catalog) {
    Bench b;
    b.spec = orbitq::orbit_catalog::validate(g, n, parts);
    b.model = std::make_unique<KPModel>(orbitq::kp_model::build_model(b.spec));
    b.quant = std::make_unique<orbitq::weyl_quant::Quantization>(*b.model);
    b.alg = std::make_unique<orbitq::dixmier_b::BAlgebra>(*b.quant, 1);
    const std::string name = b.spec.name();
    b.oracle_pmax = (name == "sp4[2,2]" || name == "o4[2,2]") ? 2 : 3;
    b.b_dmax = (name == "gl2[2]" || name == "sp2[2]") ? 3 : 2;
    out.push_back(std::move(b));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Small helpers.

struct Verdict {
  bool pass = true;
  std::string detail;
};

// Exact coefficients expanding `target` over `mats`; nullopt if outside the
// span.  Columns of the stacked system are the vectorized matrices plus the
// target; a kernel vector with a nonzero last entry yields the expansion.
std::optional<std::vector<Scalar>> expand_in_span(
    const std::vector<const ExactMatrix*>& mats, const ExactMatrix& target) {
  const std::size_t m = mats.size();
  if (m == 0) {
    if (target.is_zero()) return std::vector<Scalar>{};
    return std::nullopt;
  }
  const std::size_t nr = target.rows();
  const std::size_t nc = target.cols();
  ExactMatrix cols(nr * nc, m + 1);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t c = 0; c < nc; ++c)
        cols.at(r * nc + c, j) = mats[j]->at(r, c);
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t c = 0; c < nc; ++c)
      cols.at(r * nc + c, m) = target.at(r, c);
  ExactMatrix ker = orbitq::exact_linalg::kernel_basis(cols);
  for (std::size_t r = 0; r < ker.rows(); ++r) {
    if (ker.at(r, m).is_zero()) continue;
    const Scalar inv = ker.at(r, m).inverse();
    std::vector<Scalar> coeff(m);
    for (std::size_t j = 0; j < m; ++j) coeff[j] = -(ker.at(r, j) * inv);
    return coeff;
  }
  return std::nullopt;
}

// Indices of the family members living at the same ladder level as els[j].
std::vector<std::size_t> level_peers(const std::vector<LieElement>& els,
                                     std::size_t j) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < els.size(); ++k)
    if (els[k].level == els[j].level) out.push_back(k);
  return out;
}

BElement zero_at(orbitq::dixmier_b::BAlgebra& alg, int d) {
  return alg.scaled(alg.one(d), Scalar(0));
}

bool b_equal(orbitq::dixmier_b::BAlgebra& alg, const BElement& a,
             const BElement& b) {
  return alg.add(a, alg.scaled(b, Scalar(-1))).is_zero();
}

BElement random_element(orbitq::dixmier_b::BAlgebra& alg,
                        const std::vector<BElement>& basis, int d,
                        orbitq::sampling_oracle::Rng& rng) {
  BElement e = zero_at(alg, d);
  for (const BElement& b : basis) {
    Scalar c(rng.next_int(-2, 2));
    c += Scalar::i() * Scalar(rng.next_int(-1, 1));
    if (!c.is_zero()) e = alg.add(e, alg.scaled(b, c));
  }
  return e;
}

mpz_class stars_and_bars(std::size_t vars, int degree) {
  if (degree < 0) return 0;
  if (vars == 0) return degree == 0 ? 1 : 0;
  return orbitq::reduction_classical::binomial(
      vars + static_cast<unsigned long>(degree) - 1,
      static_cast<unsigned long>(degree));
}

// ---------------------------------------------------------------------------
// Criterion 1: graded dims of the reduction equal the stabilized ranks of
// the sampling oracle, exactly, within the wall-clock budget.

Verdict criterion_sampled_dims(std::vector<Bench>& benches) {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t pairs = 0;
  std::ostringstream bad;
  for (Bench& b : benches) {
    for (int p = 0; p <= b.oracle_pmax; ++p) {
      const std::size_t classical =
          b.alg->reduction().hilbert_row(p).dim_quotient;
      orbitq::sampling_oracle::SamplePlan plan;
      plan.spec = b.spec;
      const auto oracle = orbitq::sampling_oracle::orbit_coordinate_dim(plan, p);
      ++pairs;
      if (classical != oracle.dim)
        bad << ' ' << b.spec.name() << " p=" << p << " reduction=" << classical
            << " oracle=" << oracle.dim;
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  Verdict v;
  v.pass = bad.str().empty() && secs < 600.0;
  std::ostringstream os;
  os << "reduction dims equal sampled orbit-function dims on " << pairs
     << " (spec, degree) pairs in " << std::fixed << std::setprecision(1)
     << secs << "s";
  if (!bad.str().empty()) os << "; mismatches:" << bad.str();
  if (secs >= 600.0) os << "; exceeded the 600s budget";
  v.detail = os.str();
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 2: graded dims of the quantized quotient equal the classical
// reduction dims, with truncation slack at most 1.

Verdict criterion_quotient_grading(std::vector<Bench>& benches) {
  std::size_t rows = 0;
  std::ostringstream bad;
  for (Bench& b : benches) {
    for (int d = 0; d <= b.b_dmax; ++d) {
      const auto& row = b.alg->row(d);
      ++rows;
      if (!row.match || row.slack > 1)
        bad << ' ' << b.spec.name() << " d=" << d << " gr=" << row.gr_b
            << " predicted=" << row.predicted << " slack=" << row.slack;
    }
  }
  Verdict v;
  v.pass = bad.str().empty();
  std::ostringstream os;
  os << "graded quotient-algebra dims match the classical reduction on "
     << rows << " rows, slack <= 1, both routes agreeing"
     << " (very-even o4[2,2] included)";
  if (!v.pass) os << "; mismatches:" << bad.str();
  v.detail = os.str();
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 3: the momentum ideal is a complete intersection in the window:
// quotient dims match the series (1-t^2)^m / (1-t)^dimL and the first two
// Koszul homologies vanish, through polynomial degree 6.

Verdict criterion_complete_intersection(std::vector<Bench>& benches) {
  std::size_t rows = 0;
  std::ostringstream bad;
  for (Bench& b : benches) {
    for (int n = 0; n <= 6; ++n) {
      const auto row = b.alg->reduction().koszul_row(n);
      ++rows;
      const bool ok =
          mpz_class(static_cast<unsigned long>(row.dim_quotient)) ==
              row.expected_quotient &&
          row.dim_h1 == 0 && row.dim_h2 == 0;
      if (!ok)
        bad << ' ' << b.spec.name() << " n=" << n << " quotient="
            << row.dim_quotient << " expected=" << row.expected_quotient
            << " h1=" << row.dim_h1 << " h2=" << row.dim_h2;
    }
  }
  Verdict v;
  v.pass = bad.str().empty();
  std::ostringstream os;
  os << "quotient dims match the complete-intersection series and Koszul "
        "H1 = H2 = 0 on "
     << rows << " rows through degree 6";
  if (!v.pass) os << "; failures:" << bad.str();
  v.detail = os.str();
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 4: momentum identities.  The two momentum families are Poisson
// bracket homomorphisms on their full bases, and the level-0 momenta
// Poisson-commute with every level->=1 momentum.

Verdict criterion_moment_identities(std::vector<Bench>& benches) {
  std::size_t cross = 0, brackets = 0;
  std::ostringstream bad;
  for (Bench& b : benches) {
    const KPModel& M = *b.model;
    for (const LieElement& g : M.g_basis)
      for (const LieElement& s : M.s_basis) {
        ++cross;
        if (!orbitq::poly_symplectic::poisson_bracket(g.moment, s.moment,
                                                      M.omega)
                 .is_zero())
          bad << ' ' << b.spec.name() << " level-0/level->=1 bracket nonzero";
      }
    const auto family = [&](const std::vector<LieElement>& els,
                            const char* label) {
      for (std::size_t j = 0; j < els.size(); ++j)
        for (std::size_t k = j + 1; k < els.size(); ++k) {
          ++brackets;
          const SparsePoly br = orbitq::poly_symplectic::poisson_bracket(
              els[j].moment, els[k].moment, M.omega);
          if (els[j].level != els[k].level) {
            // Different ladder levels commute in the acting algebra.
            if (!br.is_zero())
              bad << ' ' << b.spec.name() << ' ' << label
                  << " cross-level bracket nonzero";
            continue;
          }
          const std::vector<std::size_t> peers = level_peers(els, j);
          std::vector<const ExactMatrix*> mats;
          mats.reserve(peers.size());
          for (std::size_t p : peers) mats.push_back(&els[p].mat);
          const ExactMatrix comm =
              els[j].mat * els[k].mat - els[k].mat * els[j].mat;
          const auto coeff = expand_in_span(mats, comm);
          if (!coeff) {
            bad << ' ' << b.spec.name() << ' ' << label
                << " commutator left the basis span";
            continue;
          }
          SparsePoly target = SparsePoly::constant(M.registry, Scalar(0));
          for (std::size_t t = 0; t < peers.size(); ++t)
            if (!(*coeff)[t].is_zero())
              target = target + els[peers[t]].moment.scaled((*coeff)[t]);
          if (!(br == target))
            bad << ' ' << b.spec.name() << ' ' << label << " pair (" << j
                << ',' << k << ") bracket is not the commutator momentum";
        }
    };
    family(M.g_basis, "level-0");
    family(M.s_basis, "level->=1");
  }
  Verdict v;
  v.pass = bad.str().empty();
  std::ostringstream os;
  os << "both momentum families are bracket homomorphisms (" << brackets
     << " pairs) and the families Poisson-commute (" << cross << " pairs)";
  if (!v.pass) os << "; failures:" << bad.str();
  v.detail = os.str();
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 5: the quantized momenta satisfy the same identities inside the
// Weyl algebra, their principal symbols recover the classical momenta, and
// the filtration jumps match the polynomial dimensions.

Verdict criterion_quantized_identities(std::vector<Bench>& benches) {
  std::size_t brackets = 0, cross = 0, symbols = 0, jumps = 0;
  std::ostringstream bad;
  for (Bench& b : benches) {
    const KPModel& M = *b.model;
    const auto& Q = *b.quant;
    using orbitq::weyl_quant::WeylElement;
    const auto family = [&](const std::vector<LieElement>& els,
                            const std::function<const WeylElement&(
                                std::size_t)>& xi,
                            const char* label) {
      for (std::size_t j = 0; j < els.size(); ++j)
        for (std::size_t k = j + 1; k < els.size(); ++k) {
          ++brackets;
          const WeylElement comm = orbitq::weyl_quant::commutator(xi(j), xi(k));
          if (els[j].level != els[k].level) {
            if (!comm.is_zero())
              bad << ' ' << b.spec.name() << ' ' << label
                  << " cross-level commutator nonzero";
            continue;
          }
          const std::vector<std::size_t> peers = level_peers(els, j);
          std::vector<const ExactMatrix*> mats;
          for (std::size_t p : peers) mats.push_back(&els[p].mat);
          const ExactMatrix mcomm =
              els[j].mat * els[k].mat - els[k].mat * els[j].mat;
          const auto coeff = expand_in_span(mats, mcomm);
          if (!coeff) {
            bad << ' ' << b.spec.name() << ' ' << label
                << " commutator left the basis span";
            continue;
          }
          WeylElement target = WeylElement::constant(Q.frame(), Scalar(0));
          for (std::size_t t = 0; t < peers.size(); ++t)
            if (!(*coeff)[t].is_zero())
              target += xi(peers[t]).scaled((*coeff)[t]);
          if (!(comm == target))
            bad << ' ' << b.spec.name() << ' ' << label << " pair (" << j
                << ',' << k << ") commutator is not the lifted momentum";
        }
    };
    family(M.g_basis,
           [&](std::size_t k) -> const WeylElement& { return Q.xi_g(k); },
           "level-0");
    family(M.s_basis,
           [&](std::size_t k) -> const WeylElement& { return Q.xi_s(k); },
           "level->=1");
    for (std::size_t j = 0; j < M.g_basis.size(); ++j)
      for (std::size_t k = 0; k < M.s_basis.size(); ++k) {
        ++cross;
        if (!orbitq::weyl_quant::commutator(Q.xi_g(j), Q.xi_s(k)).is_zero())
          bad << ' ' << b.spec.name() << " level-0/level->=1 lift commutator "
              << "nonzero";
      }
    for (std::size_t j = 0; j < M.g_basis.size(); ++j) {
      ++symbols;
      if (!(Q.symbol(Q.xi_g(j), 1) == M.g_basis[j].moment))
        bad << ' ' << b.spec.name() << " level-0 symbol mismatch";
    }
    for (std::size_t j = 0; j < M.s_basis.size(); ++j) {
      ++symbols;
      if (!(Q.symbol(Q.xi_s(j), 1) == M.s_basis[j].moment))
        bad << ' ' << b.spec.name() << " level->=1 symbol mismatch";
    }
    // Filtration jump W_{t/2} over W_{(t-1)/2} against the degree-t
    // polynomial dimension, through filtration 2 (t <= 4), for both the
    // ordered-monomial basis of the Weyl algebra and the natural registry.
    for (int t = 0; t <= 4; ++t) {
      ++jumps;
      const mpz_class expect = stars_and_bars(M.dim_L(), t);
      const std::size_t weyl =
          orbitq::poly_symplectic::monomial_basis(*Q.frame(), t).size();
      const std::size_t nat =
          orbitq::poly_symplectic::monomial_basis(*M.registry, t).size();
      if (mpz_class(static_cast<unsigned long>(weyl)) != expect ||
          mpz_class(static_cast<unsigned long>(nat)) != expect)
        bad << ' ' << b.spec.name() << " filtration jump t=" << t
            << " weyl=" << weyl << " natural=" << nat
            << " expected=" << expect;
    }
  }
  Verdict v;
  v.pass = bad.str().empty();
  std::ostringstream os;
  os << "lifted momenta form commutator homomorphisms (" << brackets
     << " pairs), the families commute (" << cross
     << " pairs), principal symbols recover all " << symbols
     << " momenta, and " << jumps << " filtration jumps match";
  if (!v.pass) os << "; failures:" << bad.str();
  v.detail = os.str();
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 6: dimension bookkeeping.  The model dimension count
// dim L - 2 dim s equals the orbit dimension computed from centralizer
// ranks of the partition.

Verdict criterion_dimension_count(std::vector<Bench>& benches) {
  std::ostringstream bad, vals;
  for (const Bench& b : benches) {
    const std::size_t model_dim = b.model->dim_L() - 2 * b.model->dim_s();
    const std::size_t orbit = orbitq::orbit_catalog::orbit_dimension(b.spec);
    vals << ' ' << b.spec.name() << '=' << orbit;
    if (model_dim != orbit)
      bad << ' ' << b.spec.name() << " model=" << model_dim
          << " centralizer=" << orbit;
  }
  Verdict v;
  v.pass = bad.str().empty();
  v.detail = "dim L - 2 dim s equals the centralizer-rank orbit dimension:" +
             vals.str();
  if (!v.pass) v.detail += "; mismatches:" + bad.str();
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 7: involution axioms on the quotient algebra.  tau reverses
// products and negates the generator images; theta is antilinear,
// multiplicative, and permutes the generator images by varsigma.

Verdict criterion_involutions(std::vector<Bench>& benches) {
  std::size_t generator_checks = 0, product_pairs = 0;
  std::ostringstream bad;
  for (std::size_t si = 0; si < benches.size(); ++si) {
    Bench& b = benches[si];
    auto& alg = *b.alg;
    const std::size_t ng = b.model->dim_g();
    for (std::size_t k = 0; k < ng; ++k) {
      ++generator_checks;
      const BElement xk = alg.lie_image(k);
      if (!alg.add(alg.tau(xk), xk).is_zero())
        bad << ' ' << b.spec.name() << " tau(x_" << k << ") != -x_" << k;
      BElement expect = zero_at(alg, 1);
      for (std::size_t l = 0; l < ng; ++l) {
        const Scalar& c = b.model->varsigma_g.at(k, l);
        if (!c.is_zero())
          expect = alg.add(expect, alg.scaled(alg.lie_image(l), c));
      }
      if (!b_equal(alg, alg.theta(xk), expect))
        bad << ' ' << b.spec.name() << " theta(x_" << k
            << ") != varsigma image";
    }
    orbitq::sampling_oracle::Rng rng(
        orbitq::sampling_oracle::kDefaultSeed + 101 * si + 7);
    const auto basis1 = alg.basis(1);
    for (int t = 0; t < 20; ++t) {
      ++product_pairs;
      const BElement a = random_element(alg, basis1, 1, rng);
      const BElement c = random_element(alg, basis1, 1, rng);
      const BElement prod = alg.mul(a, c);
      if (!b_equal(alg, alg.tau(prod), alg.mul(alg.tau(c), alg.tau(a))))
        bad << ' ' << b.spec.name() << " tau does not reverse pair " << t;
      if (!b_equal(alg, alg.theta(prod), alg.mul(alg.theta(a), alg.theta(c))))
        bad << ' ' << b.spec.name() << " theta not multiplicative on pair "
            << t;
      const Scalar z = Scalar(2) + Scalar::i() * Scalar(3);
      if (!b_equal(alg, alg.theta(alg.scaled(a, z)),
                   alg.scaled(alg.theta(a), z.conj())))
        bad << ' ' << b.spec.name() << " theta not antilinear on pair " << t;
    }
  }
  Verdict v;
  v.pass = bad.str().empty();
  std::ostringstream os;
  os << "tau anti-automorphism and antilinear theta automorphism verified on "
     << generator_checks << " generator images and " << product_pairs
     << " sampled products";
  if (!v.pass) os << "; failures:" << bad.str();
  v.detail = os.str();
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 8: the invariant trace.  The action split validates through
// filtration 2 with T(1) = 1, the trace is cyclic on sampled pairs, the
// Gram matrix is exactly Hermitian, and the pairing is action-invariant.

Verdict criterion_trace(std::vector<Bench>& benches) {
  std::size_t cyclic_pairs = 0, invariance = 0;
  std::ostringstream bad;
  for (std::size_t si = 0; si < benches.size(); ++si) {
    Bench& b = benches[si];
    auto& alg = *b.alg;
    const std::string name = b.spec.name();
    for (int d = 0; d <= 2; ++d) {
      const Scalar t1 = alg.trace(alg.one(d));  // split validation runs here
      if (!(t1 == Scalar(1)))
        bad << ' ' << name << " T(1) != 1 at filtration " << d;
    }
    orbitq::sampling_oracle::Rng rng(
        orbitq::sampling_oracle::kDefaultSeed + 977 * si + 13);
    const auto basis1 = alg.basis(1);
    for (int t = 0; t < 20; ++t) {
      ++cyclic_pairs;
      const BElement a = random_element(alg, basis1, 1, rng);
      const BElement c = random_element(alg, basis1, 1, rng);
      if (!(alg.trace(alg.mul(a, c)) == alg.trace(alg.mul(c, a))))
        bad << ' ' << name << " T(ab) != T(ba) on pair " << t;
    }
    const ExactMatrix gram1 = alg.gram(1);
    if (!(gram1 == gram1.conj_transpose()))
      bad << ' ' << name << " Gram matrix not Hermitian";
    if (!(alg.gram(0).at(0, 0) == Scalar(1)))
      bad << ' ' << name << " unit pairing (1|1) != 1";
    // Action invariance (x A | B) = (A | B varsigma(x)) for the pairing
    // (U|V) = T(U theta(V)), sampled over all generators with
    // deg A + deg B <= 1, plus every degree-(1,1) pair on the two smallest
    // specs.
    const std::size_t ng = b.model->dim_g();
    std::vector<std::pair<BElement, BElement>> samples;
    samples.emplace_back(alg.one(), alg.one());
    for (const BElement& e : basis1) {
      samples.emplace_back(alg.one(), e);
      samples.emplace_back(e, alg.one());
    }
    if (name == "gl2[2]" || name == "sp2[2]")
      for (const BElement& e : basis1)
        for (const BElement& f : basis1) samples.emplace_back(e, f);
    for (const auto& [A, B] : samples) {
      for (std::size_t k = 0; k < ng; ++k) {
        ++invariance;
        const Scalar lhs =
            alg.trace(alg.mul(alg.mul(alg.lie_image(k), A), alg.theta(B)));
        BElement moved = zero_at(alg, B.d + 1);
        for (std::size_t l = 0; l < ng; ++l) {
          const Scalar& c = b.model->varsigma_g.at(k, l);
          if (!c.is_zero())
            moved = alg.add(moved, alg.scaled(alg.mul(B, alg.lie_image(l)), c));
        }
        const Scalar rhs = alg.trace(alg.mul(A, alg.theta(moved)));
        if (!(lhs == rhs)) {
          bad << ' ' << name << " pairing not action-invariant (generator "
              << k << ')';
          break;
        }
      }
    }
  }
  Verdict v;
  v.pass = bad.str().empty();
  std::ostringstream os;
  os << "trace split validated through filtration 2 with T(1) = 1, "
     << "cyclicity on " << cyclic_pairs << " pairs, Hermitian Gram, and "
     << invariance << " action-invariance samples";
  if (!v.pass) os << "; failures:" << bad.str();
  v.detail = os.str();
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 9: on the GL specs the Gram form is positive definite.

Verdict criterion_gl_positivity(std::vector<Bench>& benches) {
  std::ostringstream bad, got;
  const auto check = [&](Bench& b, int d) {
    const auto [plus, minus, zero] =
        orbitq::exact_linalg::hermitian_signature(b.alg->gram(d));
    const std::size_t dim = b.alg->dim_b(d);
    got << ' ' << b.spec.name() << " d=" << d << " (" << plus << ',' << minus
        << ',' << zero << ')';
    if (plus != dim || minus != 0 || zero != 0)
      bad << ' ' << b.spec.name() << " d=" << d << " signature (" << plus
          << ',' << minus << ',' << zero << ") vs dim " << dim;
  };
  for (Bench& b : benches) {
    const std::string name = b.spec.name();
    if (name == "gl2[2]") {
      check(b, 0);
      check(b, 1);
      check(b, 2);
    } else if (name == "gl3[2,1]") {
      check(b, 0);
      check(b, 1);
    }
  }
  Verdict v;
  v.pass = bad.str().empty();
  v.detail = "Gram signatures are definite:" + got.str();
  if (!v.pass) v.detail += "; failures:" + bad.str();
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 10: the quadratic Casimir maps to an exact scalar, stable under
// a change of generator basis (rechecked inside casimir_scalar), with the
// expected catalog values.

Verdict criterion_casimir(std::vector<Bench>& benches) {
  const std::vector<std::pair<std::string, Scalar>> expected = {
      {"gl2[2]", Scalar::fraction(-1, 2)}, {"gl3[2,1]", Scalar::fraction(-3, 2)},
      {"gl3[3]", Scalar(-2)},              {"sp2[2]", Scalar::fraction(-3, 8)},
      {"o3[3]", Scalar(0)},                {"sp4[2,2]", Scalar(-2)},
      {"o4[2,2]", Scalar(0)}};
  std::ostringstream bad, got;
  for (Bench& b : benches) {
    const Scalar c = b.alg->casimir_scalar();
    got << ' ' << b.spec.name() << '=' << c.str();
    for (const auto& [name, want] : expected)
      if (name == b.spec.name() && !(c == want))
        bad << ' ' << b.spec.name() << " got " << c.str() << " want "
            << want.str();
  }
  Verdict v;
  v.pass = bad.str().empty();
  v.detail =
      "Casimir image is scalar and basis-independent on every spec:" +
      got.str();
  if (!v.pass) v.detail += "; mismatches:" + bad.str();
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 11: words in the generator images span the whole quotient
// algebra through filtration 2, so the kernel of the enveloping map has the
// graded dims forced by the sampled orbit-function dims.

Verdict criterion_enveloping(std::vector<Bench>& benches) {
  std::size_t ranks = 0;
  std::ostringstream bad, kernel;
  for (Bench& b : benches) {
    const auto env = b.alg->enveloping_dims(2);
    kernel << ' ' << b.spec.name() << " grJ=";
    for (int p = 0; p <= 2; ++p) {
      ++ranks;
      if (env[static_cast<std::size_t>(p)] != b.alg->dim_b(p))
        bad << ' ' << b.spec.name() << " word rank " << p << " is "
            << env[static_cast<std::size_t>(p)] << " vs dim "
            << b.alg->dim_b(p);
      const std::size_t gr =
          env[static_cast<std::size_t>(p)] -
          (p == 0 ? 0 : env[static_cast<std::size_t>(p - 1)]);
      const std::size_t classical =
          b.alg->reduction().hilbert_row(p).dim_quotient;
      if (gr != classical)
        bad << ' ' << b.spec.name() << " graded image " << gr
            << " vs reduction " << classical << " at degree " << p;
      const mpz_class grj = stars_and_bars(b.model->dim_g(), p) -
                            mpz_class(static_cast<unsigned long>(classical));
      kernel << (p ? "," : "") << grj;
    }
  }
  Verdict v;
  v.pass = bad.str().empty();
  std::ostringstream os;
  os << "generator words fill the quotient algebra (" << ranks
     << " ranks); kernel graded dims:" << kernel.str();
  if (!v.pass) os << "; failures:" << bad.str();
  v.detail = os.str();
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 12: command-line infrastructure.  Under --stable, a warm cache
// reproduces cold-cache reports byte for byte, and a batch run over the
// whole catalog exits 0.

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Verdict criterion_infrastructure(std::vector<Bench>&) {
  const std::string cli = ORBITQ_CLI_PATH;
  char tmpl[] = "/tmp/orbitq-accept-XXXXXX";
  char* dir = ::mkdtemp(tmpl);
  if (dir == nullptr) return {false, "could not create a scratch directory"};
  const std::string d(dir);
  const auto run = [&](const std::string& args) {
    const std::string cmd = "ORBITQ_CACHE_DIR='" + d + "/cache' '" + cli +
                            "' " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
  };
  std::ostringstream bad;
  const std::string spec_args = "--group gl --n 2 --partition 2 --stable";
  const std::vector<std::pair<std::string, std::string>> stages = {
      {"verify kp", spec_args + " --dmax 2"},
      {"verify dixmier", spec_args + " --dmax 2"}};
  for (std::size_t k = 0; k < stages.size(); ++k) {
    const std::string cold = d + "/cold" + std::to_string(k) + ".json";
    const std::string warm = d + "/warm" + std::to_string(k) + ".json";
    const int rc1 = run(stages[k].first + ' ' + stages[k].second +
                        " --json '" + cold + "'");
    const int rc2 = run(stages[k].first + ' ' + stages[k].second +
                        " --json '" + warm + "'");
    if (rc1 != 0 || rc2 != 0) {
      bad << " '" << stages[k].first << "' exited " << rc1 << '/' << rc2;
      continue;
    }
    const std::string a = slurp(cold), bjson = slurp(warm);
    if (a.empty() || a != bjson)
      bad << " '" << stages[k].first << "' warm report differs from cold";
  }
  const std::string batch_path = d + "/catalog.batch";
  {
    std::ofstream out(batch_path);
    out << "# desk catalog\n"
        << "gl 2 2 pmax=2 dmax=2\n"
        << "gl 3 2,1 pmax=2 dmax=2\n"
        << "gl 3 3 pmax=2 dmax=2\n"
        << "sp 2 2 pmax=2 dmax=2\n"
        << "o 3 3 pmax=2 dmax=2\n"
        << "sp 4 2,2 pmax=2 dmax=2\n"
        << "o 4 2,2 pmax=2 dmax=2\n";
  }
  const std::string batch_json = d + "/batch.json";
  const int rcb =
      run("batch '" + batch_path + "' --stable --json '" + batch_json + "'");
  if (rcb != 0) bad << " catalog batch exited " << rcb;
  Verdict v;
  v.pass = bad.str().empty();
  v.detail =
      "warm cache reproduces cold-cache reports byte for byte under --stable "
      "(verify kp, verify dixmier) and the catalog batch run exits 0";
  if (!v.pass) v.detail += "; failures:" + bad.str();
  return v;
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  std::vector<Bench> benches;
  std::string build_error;
  try {
    benches = build_benches();
  } catch (const std::exception& e) {
    build_error = e.what();
  }
  const std::vector<std::function<Verdict(std::vector<Bench>&)>> criteria = {
      criterion_sampled_dims,      criterion_quotient_grading,
      criterion_complete_intersection, criterion_moment_identities,
      criterion_quantized_identities,  criterion_dimension_count,
      criterion_involutions,       criterion_trace,
      criterion_gl_positivity,     criterion_casimir,
      criterion_enveloping,        criterion_infrastructure};
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Verdict v;
    if (!build_error.empty()) {
      v.pass = false;
      v.detail = "engine construction failed: " + build_error;
    } else {
      try {
        v = criteria[k](benches);
      } catch (const std::exception& e) {
        v.pass = false;
        v.detail = std::string("unexpected exception: ") + e.what();
      }
    }
    std::printf("CRITERION %zu: %s — %s\n", k + 1, v.pass ? "PASS" : "FAIL",
                v.detail.c_str());
    if (!v.pass) ++failures;
  }
  if (failures > 0)
    std::printf("%d of 12 criteria failed\n", failures);
  else
    std::printf("all 12 criteria passed\n");
  return failures > 0 ? 1 : 0;
}
