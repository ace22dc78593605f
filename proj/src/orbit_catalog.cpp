#include "orbitq/orbit_catalog.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace orbitq {
namespace orbit_catalog {

using exact_linalg::Scalar;

const char* group_name(GroupKind g) {
  switch (g) {
    case GroupKind::GL: return "gl";
    case GroupKind::O: return "o";
    case GroupKind::Sp: return "sp";
  }
  return "?";
}

std::string OrbitSpec::name() const {
  std::ostringstream os;
  os << group_name(group) << n << "[";
  for (std::size_t i = 0; i < partition.size(); ++i) {
    if (i) os << ",";
    os << partition[i];
  }
  os << "]";
  return os.str();
}

OrbitSpec validate(GroupKind group, std::size_t n,
                   const std::vector<int>& partition) {
  if (partition.empty())
    throw Error(ErrorCode::InvalidOrbit, "empty partition");
  int sum = 0;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    if (partition[i] <= 0)
      throw Error(ErrorCode::InvalidOrbit, "partition parts must be positive");
    if (i && partition[i] > partition[i - 1])
      throw Error(ErrorCode::InvalidOrbit,
                  "partition must be weakly decreasing");
    sum += partition[i];
  }
  if (static_cast<std::size_t>(sum) != n)
    throw Error(ErrorCode::InvalidOrbit, "partition does not sum to n");

  std::map<int, int> mult;
  for (int p : partition) ++mult[p];
  if (group == GroupKind::O) {
    for (const auto& [p, m] : mult)
      if (p % 2 == 0 && m % 2 != 0)
        throw Error(ErrorCode::InvalidOrbit,
                    "even part with odd multiplicity is not an o(n) type");
  } else if (group == GroupKind::Sp) {
    if (n % 2 != 0)
      throw Error(ErrorCode::InvalidOrbit, "sp(n) requires even n");
    for (const auto& [p, m] : mult)
      if (p % 2 != 0 && m % 2 != 0)
        throw Error(ErrorCode::InvalidOrbit,
                    "odd part with odd multiplicity is not an sp(n) type");
  }

  OrbitSpec spec;
  spec.group = group;
  spec.n = n;
  spec.partition = partition;
  if (group == GroupKind::O) {
    spec.very_even = true;
    for (int p : partition)
      if (p % 2 != 0) spec.very_even = false;
    spec.components = spec.very_even ? 2 : 1;
  }
  return spec;
}

LadderData ladder(const OrbitSpec& spec) {
  LadderData lad;
  lad.r = *std::max_element(spec.partition.begin(), spec.partition.end()) - 1;
  for (int e = 0; e <= lad.r; ++e) {
    long d = 0;
    for (int p : spec.partition) d += std::max(p - e, 0);
    lad.dims.push_back(static_cast<std::size_t>(d));
  }
  for (int e = 0; e <= lad.r; ++e) {
    if (spec.group == GroupKind::GL) {
      lad.forms.push_back(FormKind::None);
      lad.s_levels.push_back(GroupKind::GL);
    } else {
      const bool base_orth = spec.group == GroupKind::O;
      const bool orth = (e % 2 == 0) ? base_orth : !base_orth;
      lad.forms.push_back(orth ? FormKind::Orthogonal : FormKind::Symplectic);
      lad.s_levels.push_back(orth ? GroupKind::O : GroupKind::Sp);
      if (!orth && lad.dims[e] % 2 != 0)
        throw Error(ErrorCode::Internal,
                    "symplectic ladder level of odd dimension");
    }
  }
  return lad;
}

namespace {

// Single Jordan block: the shift e_j -> e_{j-1} together with the
// antidiagonal form Q[i][m-1-i] = (-1)^i, symmetric for odd m and
// antisymmetric for even m; shift^T Q + Q shift = 0 in both cases.
void append_single_block(std::size_t m, bool with_form, ExactMatrix& x,
                         ExactMatrix& q, std::size_t base) {
  for (std::size_t i = 0; i + 1 < m; ++i) x.at(base + i, base + i + 1) = 1;
  if (!with_form) return;
  for (std::size_t i = 0; i < m; ++i)
    q.at(base + i, base + m - 1 - i) = (i % 2 == 0) ? 1 : -1;
}

// Two blocks of size m as a hyperbolic pair W + W*: the shift on W, minus
// the dual shift on W*, with the pairing form [[0, I], [eps I, 0]].
void append_paired_block(std::size_t m, int eps, ExactMatrix& x,
                         ExactMatrix& q, std::size_t base) {
  for (std::size_t i = 0; i + 1 < m; ++i) {
    x.at(base + i, base + i + 1) = 1;               // shift on W
    x.at(base + m + i + 1, base + m + i) = -1;      // minus dual shift on W*
  }
  for (std::size_t i = 0; i < m; ++i) {
    q.at(base + i, base + m + i) = 1;
    q.at(base + m + i, base + i) = eps;
  }
}

}  // namespace

Representative nilpotent_representative(const OrbitSpec& spec) {
  Representative rep;
  rep.x0 = ExactMatrix(spec.n, spec.n);
  if (spec.group == GroupKind::GL) {
    std::size_t base = 0;
    for (int p : spec.partition) {
      append_single_block(static_cast<std::size_t>(p), false, rep.x0, rep.gram,
                          base);
      base += static_cast<std::size_t>(p);
    }
  } else {
    rep.gram = ExactMatrix(spec.n, spec.n);
    rep.has_gram = true;
    const int eps = spec.group == GroupKind::O ? 1 : -1;
    // Parts needing the invariant form of the "wrong" parity are laid out as
    // hyperbolic pairs; the rest get single antidiagonal blocks.
    const int pair_parity = spec.group == GroupKind::O ? 0 : 1;
    std::map<int, int> mult;
    for (int p : spec.partition) ++mult[p];
    std::size_t base = 0;
    for (auto it = mult.rbegin(); it != mult.rend(); ++it) {
      auto [p, m] = *it;
      const std::size_t part = static_cast<std::size_t>(p);
      if (p % 2 == pair_parity) {
        for (int k = 0; k < m / 2; ++k) {
          append_paired_block(part, eps, rep.x0, rep.gram, base);
          base += 2 * part;
        }
      } else {
        for (int k = 0; k < m; ++k) {
          append_single_block(part, true, rep.x0, rep.gram, base);
          base += part;
        }
      }
    }
    if (!(rep.x0.transpose() * rep.gram + rep.gram * rep.x0).is_zero())
      throw Error(ErrorCode::Internal, "representative does not lie in g");
  }

  const LadderData lad = ladder(spec);
  ExactMatrix power = ExactMatrix::identity(spec.n);
  for (int d = 0; d <= lad.r + 1; ++d) {
    const std::size_t expected =
        d <= lad.r ? lad.dims[static_cast<std::size_t>(d)] : 0;
    if (power.rank() != expected)
      throw Error(ErrorCode::Internal,
                  "representative has the wrong Jordan type");
    power = power * rep.x0;
  }
  return rep;
}

std::vector<ExactMatrix> ambient_lie_basis(const OrbitSpec& spec,
                                           const Representative& rep) {
  const std::size_t n = spec.n;
  std::vector<ExactMatrix> basis;
  if (spec.group == GroupKind::GL) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        ExactMatrix e(n, n);
        e.at(i, j) = 1;
        basis.push_back(std::move(e));
      }
    return basis;
  }
  // Solve y^T Q + Q y = 0: n^2 linear equations in the n^2 entries of y.
  ExactMatrix sys(n * n, n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t k = 0; k < n; ++k) {
        // (y^T Q)_rc picks y_kr Q_kc; (Q y)_rc picks Q_rk y_kc.
        sys.at(r * n + c, k * n + r) += rep.gram.at(k, c);
        sys.at(r * n + c, k * n + c) += rep.gram.at(r, k);
      }
  ExactMatrix ker = kernel_basis(sys);
  const std::size_t expected = spec.group == GroupKind::O
                                   ? n * (n - 1) / 2
                                   : n * (n + 1) / 2;
  if (ker.rows() != expected)
    throw Error(ErrorCode::Internal, "unexpected classical Lie algebra dim");
  for (std::size_t v = 0; v < ker.rows(); ++v) {
    ExactMatrix y(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) y.at(i, j) = ker.at(v, i * n + j);
    basis.push_back(std::move(y));
  }
  return basis;
}

std::size_t orbit_dimension(const OrbitSpec& spec) {
  const Representative rep = nilpotent_representative(spec);
  const std::vector<ExactMatrix> basis = ambient_lie_basis(spec, rep);
  const std::size_t n = spec.n;
  ExactMatrix ad(basis.size(), n * n);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    ExactMatrix br = basis[k] * rep.x0 - rep.x0 * basis[k];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) ad.at(k, i * n + j) = br.at(i, j);
  }
  return ad.rank();
}

namespace {
void partitions_rec(int remaining, int maxpart, std::vector<int>& cur,
                    std::vector<std::vector<int>>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(remaining, maxpart); p >= 1; --p) {
    cur.push_back(p);
    partitions_rec(remaining - p, p, cur, out);
    cur.pop_back();
  }
}
}  // namespace

std::vector<std::vector<int>> all_partitions(std::size_t n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  partitions_rec(static_cast<int>(n), static_cast<int>(n), cur, out);
  return out;
}

std::vector<OrbitSpec> valid_orbits(GroupKind group, std::size_t n) {
  std::vector<OrbitSpec> out;
  for (const auto& part : all_partitions(n)) {
    try {
      out.push_back(validate(group, n, part));
    } catch (const Error&) {
    }
  }
  return out;
}

}  // namespace orbit_catalog
}  // namespace orbitq
