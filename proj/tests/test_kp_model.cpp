#include "doctest.h"
#include "orbitq/kp_model.hpp"

using namespace orbitq::kp_model;
using orbitq::orbit_catalog::GroupKind;
using orbitq::orbit_catalog::validate;
using orbitq::exact_linalg::ExactMatrix;
using orbitq::exact_linalg::Scalar;
using orbitq::poly_symplectic::poisson_bracket;
using orbitq::poly_symplectic::SparsePoly;

namespace {

const std::vector<orbitq::orbit_catalog::OrbitSpec>& desk_catalog() {
  static const std::vector<orbitq::orbit_catalog::OrbitSpec> specs = {
      validate(GroupKind::GL, 2, {2}),    validate(GroupKind::GL, 3, {2, 1}),
      validate(GroupKind::GL, 3, {3}),    validate(GroupKind::Sp, 2, {2}),
      validate(GroupKind::O, 3, {3}),     validate(GroupKind::Sp, 4, {2, 2}),
      validate(GroupKind::O, 4, {2, 2})};
  return specs;
}

}  // namespace

TEST_CASE("model shape for the smallest regular orbit") {
  auto model = build_model(validate(GroupKind::GL, 2, {2}));
  CHECK(model.dim_L() == 4);   // Hom(C^2, C^1) + Hom(C^1, C^2)
  CHECK(model.dim_g() == 4);   // gl(2)
  CHECK(model.dim_s() == 1);   // gl(1)
  CHECK(model.q_vars.size() == 2);
  CHECK(model.reflections.empty());
  CHECK(!model.has_g_reflection);
  // Momenta of the level-0 action are quadratic.
  for (const auto& el : model.g_basis) {
    CHECK(el.moment.degree() == 2);
  }
}

TEST_CASE("dimension bookkeeping across the desk catalog") {
  const std::size_t expected_L[] = {4, 6, 16, 2, 8, 8, 8};
  const std::size_t expected_s[] = {1, 1, 5, 0, 3, 1, 3};
  std::size_t k = 0;
  for (const auto& spec : desk_catalog()) {
    CAPTURE(spec.name());
    auto model = build_model(spec);
    CHECK(model.dim_L() == expected_L[k]);
    CHECK(model.dim_s() == expected_s[k]);
    // The model's own count of the orbit dimension agrees with the
    // centralizer computation.
    CHECK(model.dim_L() - 2 * model.dim_s() ==
          orbitq::orbit_catalog::orbit_dimension(spec));
    ++k;
  }
}

TEST_CASE("hamiltonian property and bracket representations") {
  auto model = build_model(validate(GroupKind::GL, 3, {2, 1}));
  const auto& om = model.omega;

  // {moment_y, z_a} equals the coordinate action of y on z_a, for every
  // basis element of g and of s.
  auto check_hamiltonian = [&](const LieElement& el) {
    for (std::size_t a = 0; a < model.dim_L(); ++a) {
      auto za = SparsePoly::variable(model.registry, a);
      auto lhs = poisson_bracket(el.moment, za, om);
      auto rhs = apply_derivation(el, za);
      CHECK(lhs == rhs);
    }
  };
  for (const auto& el : model.g_basis) check_hamiltonian(el);
  for (const auto& el : model.s_basis) check_hamiltonian(el);

  // Level-0 momenta Poisson-commute with level->=1 momenta.
  for (const auto& g : model.g_basis) {
    for (const auto& s : model.s_basis) {
      CHECK(poisson_bracket(g.moment, s.moment, om).is_zero());
    }
  }
}

TEST_CASE("darboux frame diagonalizes the bracket") {
  for (const auto& spec : desk_catalog()) {
    CAPTURE(spec.name());
    auto model = build_model(spec);
    const std::size_t m = model.q_vars.size();
    REQUIRE(2 * m == model.dim_L());
    // Bracket matrix of the frame coordinates: {row_i, row_j} =
    // (to_frame * poisson * to_frame^T)_{ij} must be [[0, -I], [I, 0]],
    // i.e. {q_i, p_j} = -delta_ij.
    ExactMatrix br =
        model.to_frame * model.omega.poisson * model.to_frame.transpose();
    ExactMatrix expect(2 * m, 2 * m);
    for (std::size_t i = 0; i < m; ++i) {
      expect.at(i, m + i) = Scalar(-1);
      expect.at(m + i, i) = Scalar(1);
    }
    CHECK(br == expect);
    CHECK((model.to_frame * model.from_frame) ==
          ExactMatrix::identity(2 * m));
  }
}

TEST_CASE("conjugation matrix squares to minus the identity") {
  for (const auto& spec : desk_catalog()) {
    CAPTURE(spec.name());
    auto model = build_model(spec);
    auto sq = model.theta_mat * model.theta_mat;
    CHECK(sq == ExactMatrix::identity(model.dim_L()).scaled(Scalar(-1)));
    // theta_mat = omega / lambda with the pinned normalization.
    CHECK(model.theta_mat.scaled(Scalar(model.theta_lambda)) ==
          model.omega.omega);
  }
}

TEST_CASE("reflections are involutive symplectic substitutions") {
  auto model = build_model(validate(GroupKind::O, 3, {3}));
  REQUIRE(!model.reflections.empty());
  CHECK(model.has_g_reflection);
  auto check_refl = [&](const Reflection& r) {
    CHECK((r.subst * r.subst) == ExactMatrix::identity(model.dim_L()));
    // Substitution preserves the symplectic form: S^T omega S = omega.
    CHECK((r.subst.transpose() * model.omega.omega * r.subst) ==
          model.omega.omega);
  };
  for (const auto& r : model.reflections) check_refl(r);
  check_refl(model.g_reflection);

  // The very even orbit keeps a level-0 reflection as well.
  auto ve = build_model(validate(GroupKind::O, 4, {2, 2}));
  CHECK(ve.has_g_reflection);
}

TEST_CASE("varsigma expands minus conjugate-transpose in the stored bases") {
  auto model = build_model(validate(GroupKind::Sp, 4, {2, 2}));
  for (std::size_t k = 0; k < model.dim_g(); ++k) {
    ExactMatrix expect =
        model.g_basis[k].mat.conj_transpose().scaled(Scalar(-1));
    ExactMatrix got(model.g_basis[k].mat.rows(), model.g_basis[k].mat.cols());
    for (std::size_t l = 0; l < model.dim_g(); ++l) {
      got = got + model.g_basis[l].mat.scaled(model.varsigma_g.at(k, l));
    }
    CHECK(got == expect);
  }
}
