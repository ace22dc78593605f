#pragma once

// Nilpotent orbits of the classical groups by Jordan-type partition: spec
// validation, ladder dimensions and form kinds, explicit nilpotent
// representatives with their invariant bilinear forms, and an independent
// orbit-dimension computation through the centralizer.

#include "orbitq/exact_linalg.hpp"

#include <string>
#include <vector>

namespace orbitq {
namespace orbit_catalog {

using exact_linalg::ExactMatrix;

enum class GroupKind { GL, O, Sp };
enum class FormKind { None, Orthogonal, Symplectic };

const char* group_name(GroupKind g);

struct OrbitSpec {
  GroupKind group = GroupKind::GL;
  std::size_t n = 0;
  std::vector<int> partition;  // weakly decreasing, sums to n
  int components = 1;          // 2 for O with a very even partition
  bool very_even = false;

  // "gl3[2,1]" — used in reports and cache keys.
  std::string name() const;
};

// Throws InvalidOrbit unless the partition is weakly decreasing, positive,
// sums to n, and obeys the multiplicity parity rule of the group (O: even
// parts have even multiplicity; Sp: odd parts have even multiplicity).
OrbitSpec validate(GroupKind group, std::size_t n,
                   const std::vector<int>& partition);

struct LadderData {
  int r = 0;                        // largest part minus one
  std::vector<std::size_t> dims;    // d_e = sum_i max(part_i - e, 0), e = 0..r
  std::vector<FormKind> forms;      // per level; all None for GL
  std::vector<GroupKind> s_levels;  // acting group kind per level (level 0 = G)
};

LadderData ladder(const OrbitSpec& spec);

struct Representative {
  ExactMatrix x0;    // nilpotent with Jordan type = partition
  ExactMatrix gram;  // invariant form with x0^T Q + Q x0 = 0 (O/Sp only)
  bool has_gram = false;
};

Representative nilpotent_representative(const OrbitSpec& spec);

// Basis of the ambient Lie algebra: all of gl(n) for GL, else the solutions
// of y^T Q + Q y = 0 for the representative's form Q.
std::vector<ExactMatrix> ambient_lie_basis(const OrbitSpec& spec,
                                           const Representative& rep);

// dim G*x0 = rank of y -> [y, x0] on the ambient Lie algebra.
std::size_t orbit_dimension(const OrbitSpec& spec);

// All partitions of n in decreasing order (lexicographically descending).
std::vector<std::vector<int>> all_partitions(std::size_t n);

// Partitions of n that are valid for the group, in enumeration order.
std::vector<OrbitSpec> valid_orbits(GroupKind group, std::size_t n);

}  // namespace orbit_catalog
}  // namespace orbitq
