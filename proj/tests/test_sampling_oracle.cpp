#include "doctest.h"
#include "orbitq/sampling_oracle.hpp"

#include <vector>

using namespace orbitq;
using namespace orbitq::sampling_oracle;
using exact_linalg::ExactMatrix;
using orbit_catalog::GroupKind;
using orbit_catalog::validate;

TEST_CASE("mixer is deterministic and covers its range") {
  Rng a(42), b(42);
  for (int k = 0; k < 100; ++k) CHECK(a.next_u64() == b.next_u64());
  Rng c(42), d(43);
  bool differs = false;
  for (int k = 0; k < 10; ++k) differs = differs || c.next_u64() != d.next_u64();
  CHECK(differs);
  Rng e(7);
  bool lo = false, hi = false;
  for (int k = 0; k < 200; ++k) {
    long v = e.next_int(-3, 3);
    CHECK(v >= -3);
    CHECK(v <= 3);
    lo = lo || v == -3;
    hi = hi || v == 3;
  }
  CHECK(lo);
  CHECK(hi);
}

TEST_CASE("sampled points lie on the orbit") {
  for (auto spec : {validate(GroupKind::GL, 3, {2, 1}),
                    validate(GroupKind::O, 3, {3}),
                    validate(GroupKind::Sp, 4, {2, 2})}) {
    CAPTURE(spec.name());
    SamplePlan plan;
    plan.spec = spec;
    auto pts = sample_orbit_points(plan, 6);
    REQUIRE(pts.size() == 6);
    auto lad = orbit_catalog::ladder(spec);
    auto rep = orbit_catalog::nilpotent_representative(spec);
    for (const auto& p : pts) {
      // Jordan type: rank p^e = d_e.
      ExactMatrix power = ExactMatrix::identity(spec.n);
      for (int e = 1; e <= lad.r; ++e) {
        power = power * p;
        CHECK(power.rank() == lad.dims[static_cast<std::size_t>(e)]);
      }
      CHECK((power * p).is_zero());
      if (spec.group != GroupKind::GL) {
        // The sampled conjugation preserved the invariant form.
        CHECK((p.transpose() * rep.gram + rep.gram * p).is_zero());
      }
    }
  }
}

TEST_CASE("point streams are prefix-stable") {
  for (auto spec :
       {validate(GroupKind::GL, 2, {2}), validate(GroupKind::O, 4, {2, 2})}) {
    CAPTURE(spec.name());
    SamplePlan plan;
    plan.spec = spec;
    auto shorter = sample_orbit_points(plan, 4);
    auto longer = sample_orbit_points(plan, 9);
    REQUIRE(longer.size() == 9);
    for (std::size_t k = 0; k < shorter.size(); ++k) {
      CHECK(shorter[k] == longer[k]);
    }
  }
}

TEST_CASE("seed changes the stream, fixed seed reproduces it") {
  SamplePlan plan;
  plan.spec = validate(GroupKind::GL, 2, {2});
  auto first = sample_orbit_points(plan, 3);
  auto second = sample_orbit_points(plan, 3);
  for (std::size_t k = 0; k < 3; ++k) CHECK(first[k] == second[k]);
  plan.seed = plan.seed + 1;
  auto other = sample_orbit_points(plan, 3);
  bool differs = false;
  for (std::size_t k = 0; k < 3; ++k) differs = differs || !(first[k] == other[k]);
  CHECK(differs);
}

TEST_CASE("stabilized evaluation ranks reproduce known dimensions") {
  SamplePlan plan;
  plan.spec = validate(GroupKind::GL, 2, {2});
  CHECK(orbit_coordinate_dim(plan, 0).dim == 1);
  CHECK(orbit_coordinate_dim(plan, 1).dim == 3);
  CHECK(orbit_coordinate_dim(plan, 2).dim == 5);
  CHECK(orbit_coordinate_dim(plan, 3).dim == 7);
  // Degree-1 column count is the full matrix-entry space.
  CHECK(orbit_coordinate_dim(plan, 1).columns == 4);

  SamplePlan o4;
  o4.spec = validate(GroupKind::O, 4, {2, 2});
  CHECK(orbit_coordinate_dim(o4, 1).dim == 6);
  CHECK(orbit_coordinate_dim(o4, 2).dim == 10);

  SamplePlan sp4;
  sp4.spec = validate(GroupKind::Sp, 4, {2, 2});
  CHECK(orbit_coordinate_dim(sp4, 1).dim == 10);
}

TEST_CASE("two-component closures alternate the reflection exactly") {
  // For a very even orbit the determinant -1 coset must appear on every
  // second sample; degree-1 functions then see both components, which is
  // what drives the rank up to the full 6 rather than the 3 of a single
  // component of o4[2,2].
  SamplePlan plan;
  plan.spec = validate(GroupKind::O, 4, {2, 2});
  auto pts = sample_orbit_points(plan, 8);
  // Consecutive points must differ (alternation makes equality impossible).
  for (std::size_t k = 1; k < pts.size(); ++k) {
    CHECK(!(pts[k - 1] == pts[k]));
  }
}
