#pragma once

// Randomized exact oracle for the graded dimensions of the orbit-closure
// coordinate ring.  Random group elements conjugate the standard nilpotent
// representative to exact rational points of the orbit; the rank of the
// evaluation matrix of all degree-p monomials in the matrix entries at
// those points is a certified lower bound for dim R[p], and equals it once
// the rank stabilizes under doubling the sample count.  The computation is
// fully deterministic for a fixed seed and entirely independent of the
// symplectic-reduction pipeline, which is what makes it useful as a check.

#include <cstdint>
#include <vector>

#include "orbitq/exact_linalg.hpp"
#include "orbitq/orbit_catalog.hpp"

namespace orbitq::sampling_oracle {

using exact_linalg::ExactMatrix;
using exact_linalg::Scalar;

inline constexpr std::uint64_t kDefaultSeed = 20260822;

// Small deterministic 64-bit mixer (xorshift-multiply chain over a Weyl
// sequence).  Self-contained so that sample streams are identical across
// platforms and standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64();
  // Uniform draw from {lo, ..., hi} (inclusive); hi > lo required.
  long next_int(long lo, long hi);

 private:
  std::uint64_t state_;
};

struct SamplePlan {
  orbit_catalog::OrbitSpec spec;
  std::size_t count = 0;  // base point count; 0 = derived from the degree
  std::uint64_t seed = kDefaultSeed;
  long height = 3;  // bound on the random group-parameter entries
};

// Exact rational points g . x0 . g^-1 of the orbit.  GL: g is a random
// integer matrix retried until invertible.  O/Sp: g is the Cayley transform
// (I - y)(I + y)^-1 of a random element y of the ambient Lie algebra
// (SingularCayley after bounded retries when I + y stays singular), and a
// form-preserving reflection of determinant -1 is mixed in: on an exact
// even/odd alternation of the samples when the closure has two components
// (all parts even), on a random subset otherwise.  Every point is checked
// to have the Jordan type of the representative, and to satisfy
// p^T Q + Q p = 0 in the O/Sp cases.  Deterministic per seed, and a longer
// prefix-stable list extends a shorter one.
std::vector<ExactMatrix> sample_orbit_points(const SamplePlan& plan,
                                             std::size_t count);

struct OracleResult {
  std::size_t dim = 0;          // stabilized rank of the evaluation matrix
  std::size_t points_used = 0;  // sample count at stabilization
  std::size_t columns = 0;      // number of degree-p matrix-entry monomials
};

// Stabilized rank of the (points x monomials) evaluation matrix in degree
// p.  Starts from plan.count points (or the monomial count plus a margin
// when plan.count is 0) and doubles until two successive ranks agree;
// throws RankUnstable when the doubling budget is exhausted first.
OracleResult orbit_coordinate_dim(const SamplePlan& plan, int degree);

}  // namespace orbitq::sampling_oracle
