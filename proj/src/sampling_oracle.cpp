#include "orbitq/sampling_oracle.hpp"

#include <sstream>
#include <string>

namespace orbitq::sampling_oracle {

namespace {

using orbit_catalog::GroupKind;
using orbit_catalog::OrbitSpec;
using orbit_catalog::Representative;

[[noreturn]] void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

constexpr int kCayleyRetries = 64;
constexpr int kDoublings = 3;

ExactMatrix random_square(Rng& rng, std::size_t n, long height) {
  ExactMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m.at(i, j) = Scalar(rng.next_int(-height, height));
    }
  }
  return m;
}

bool invertible(const ExactMatrix& m) { return m.rank() == m.rows(); }

// Form-preserving reflection of determinant -1: the Q-orthogonal reflection
// along a vector v with Q(v, v) != 0.
ExactMatrix form_reflection(const ExactMatrix& q) {
  const std::size_t n = q.rows();
  std::vector<Scalar> v(n, Scalar(0));
  Scalar qvv(0);
  for (std::size_t i = 0; i < n && qvv.is_zero(); ++i) {
    if (!q.at(i, i).is_zero()) {
      v.assign(n, Scalar(0));
      v[i] = Scalar(1);
      qvv = q.at(i, i);
    }
  }
  for (std::size_t i = 0; i < n && qvv.is_zero(); ++i) {
    for (std::size_t j = i + 1; j < n && qvv.is_zero(); ++j) {
      if (!q.at(i, j).is_zero()) {
        v.assign(n, Scalar(0));
        v[i] = Scalar(1);
        v[j] = Scalar(1);
        qvv = q.at(i, i) + q.at(i, j) + q.at(j, i) + q.at(j, j);
      }
    }
  }
  if (qvv.is_zero()) {
    fail(ErrorCode::Internal, "no anisotropic vector for the reflection");
  }
  // R x = x - 2 Q(v, x) / Q(v, v) * v
  ExactMatrix r = ExactMatrix::identity(n);
  std::vector<Scalar> qv(n, Scalar(0));  // row vector v^T Q
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) qv[j] += v[i] * q.at(i, j);
  }
  const Scalar two_over = Scalar(2) / qvv;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      r.at(i, j) -= two_over * v[i] * qv[j];
    }
  }
  return r;
}

bool preserves_form(const ExactMatrix& g, const ExactMatrix& q) {
  return g.transpose() * q * g == q;
}

void check_point(const OrbitSpec& spec, const Representative& rep,
                 const ExactMatrix& p) {
  auto lad = orbit_catalog::ladder(spec);
  ExactMatrix power = p;
  for (int e = 1; e <= lad.r + 1; ++e) {
    const std::size_t expected =
        e <= lad.r ? lad.dims[static_cast<std::size_t>(e)] : 0;
    if (power.rank() != expected) {
      fail(ErrorCode::Internal, "sampled point has the wrong Jordan type");
    }
    power = power * p;
  }
  if (rep.has_gram) {
    ExactMatrix balance = p.transpose() * rep.gram + rep.gram * p;
    if (!balance.is_zero()) {
      fail(ErrorCode::Internal, "sampled point violates the invariant form");
    }
  }
}

// Degree-p exponent vectors over nvars variables, lexicographic.
void enumerate_monomials(std::size_t nvars, int degree,
                         std::vector<int>& current, std::size_t pos,
                         int remaining,
                         std::vector<std::vector<int>>& out) {
  if (pos + 1 == nvars) {
    current[pos] = remaining;
    out.push_back(current);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[pos] = e;
    enumerate_monomials(nvars, degree, current, pos + 1, remaining - e, out);
  }
  current[pos] = 0;
}

}  // namespace

std::uint64_t Rng::next_u64() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

long Rng::next_int(long lo, long hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<long>(next_u64() % span);
}

std::vector<ExactMatrix> sample_orbit_points(const SamplePlan& plan,
                                             std::size_t count) {
  const OrbitSpec& spec = plan.spec;
  Representative rep = orbit_catalog::nilpotent_representative(spec);
  const std::size_t n = spec.n;
  Rng rng(plan.seed);
  const long height = plan.height < 1 ? 1 : plan.height;

  const bool is_gl = spec.group == GroupKind::GL;
  std::vector<ExactMatrix> lie;
  ExactMatrix reflection;
  bool mix_components = false;
  bool force_split = false;
  if (!is_gl) {
    lie = orbit_catalog::ambient_lie_basis(spec, rep);
    if (spec.group == GroupKind::O) {
      reflection = form_reflection(rep.gram);
      if (!preserves_form(reflection, rep.gram)) {
        fail(ErrorCode::Internal, "reflection does not preserve the form");
      }
      mix_components = true;
      force_split = spec.components == 2;
    }
  }

  std::vector<ExactMatrix> points;
  points.reserve(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    ExactMatrix g;
    if (is_gl) {
      int tries = 0;
      do {
        if (++tries > kCayleyRetries) {
          fail(ErrorCode::SingularCayley,
               "no invertible random matrix within the retry budget");
        }
        g = random_square(rng, n, height);
      } while (!invertible(g));
    } else {
      int tries = 0;
      for (;;) {
        if (++tries > kCayleyRetries) {
          fail(ErrorCode::SingularCayley,
               "Cayley transform stayed singular within the retry budget");
        }
        ExactMatrix y(n, n);
        for (const auto& b : lie) {
          const long c = rng.next_int(-height, height);
          if (c != 0) y = y + b.scaled(Scalar(c));
        }
        ExactMatrix iplus = ExactMatrix::identity(n) + y;
        if (!invertible(iplus)) continue;
        g = (ExactMatrix::identity(n) - y) * iplus.inverse();
        break;
      }
      if (rep.has_gram && !preserves_form(g, rep.gram)) {
        fail(ErrorCode::Internal, "Cayley transform left the group");
      }
      if (mix_components) {
        const bool flip =
            force_split ? (idx % 2 == 1) : (rng.next_u64() % 2 == 1);
        if (flip) g = reflection * g;
      }
    }
    ExactMatrix p = g * rep.x0 * g.inverse();
    check_point(spec, rep, p);
    points.push_back(std::move(p));
  }
  return points;
}

OracleResult orbit_coordinate_dim(const SamplePlan& plan, int degree) {
  if (degree < 0) fail(ErrorCode::InvalidInput, "negative degree");
  const std::size_t n = plan.spec.n;
  const std::size_t nvars = n * n;
  std::vector<std::vector<int>> monos;
  {
    std::vector<int> current(nvars, 0);
    enumerate_monomials(nvars, degree, current, 0, degree, monos);
  }
  OracleResult res;
  res.columns = monos.size();

  std::size_t count = plan.count > 0 ? plan.count : monos.size() + 8;
  if (count == 0) count = 1;

  std::vector<ExactMatrix> points = sample_orbit_points(plan, count);
  auto evaluate = [&](std::size_t from, std::size_t to, ExactMatrix& rows) {
    for (std::size_t k = from; k < to; ++k) {
      const ExactMatrix& p = points[k];
      std::vector<Scalar> row(monos.size());
      for (std::size_t c = 0; c < monos.size(); ++c) {
        Scalar val(1);
        for (std::size_t v = 0; v < nvars && !val.is_zero(); ++v) {
          for (int e = 0; e < monos[c][v]; ++e) {
            val *= p.at(v / n, v % n);
          }
        }
        row[c] = val;
      }
      rows.append_row(row);
    }
  };

  ExactMatrix rows(0, monos.size());
  evaluate(0, count, rows);
  std::size_t rank = rows.rank();
  for (int step = 0; step < kDoublings; ++step) {
    const std::size_t next_count = 2 * count;
    points = sample_orbit_points(plan, next_count);  // prefix-stable
    evaluate(count, next_count, rows);
    count = next_count;
    const std::size_t next_rank = rows.rank();
    if (next_rank == rank) {
      res.dim = rank;
      res.points_used = count;
      return res;
    }
    rank = next_rank;
  }
  std::ostringstream os;
  os << "rank did not stabilize in degree " << degree << " after " << count
     << " samples";
  fail(ErrorCode::RankUnstable, os.str());
}

}  // namespace orbitq::sampling_oracle
