#include "orbitq/kp_model.hpp"

#include <algorithm>
#include <sstream>

namespace orbitq {
namespace kp_model {

using orbit_catalog::FormKind;
using orbit_catalog::GroupKind;
using orbit_catalog::LadderData;
using poly_symplectic::Monomial;
using poly_symplectic::VariableRegistry;
using poly_symplectic::VarInfo;

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw Error(ErrorCode::ModelInconsistency, what);
}

// ----- small exact solvers ------------------------------------------------

// Solves A x = b (A given by columns as flattened matrices); throws if
// inconsistent.  Sizes here are tiny (Lie algebra dimensions).
std::vector<Scalar> solve_linear(const ExactMatrix& a,
                                 const std::vector<Scalar>& b) {
  ExactMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug.at(r, c) = a.at(r, c);
    aug.at(r, a.cols()) = b[r];
  }
  auto pivots = aug.rref();
  std::vector<Scalar> x(a.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] == a.cols())
      throw Error(ErrorCode::Internal, "inconsistent linear system");
    x[pivots[r]] = aug.at(r, a.cols());
  }
  return x;
}

std::vector<Scalar> flatten(const ExactMatrix& m) {
  std::vector<Scalar> v;
  v.reserve(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) v.push_back(m.at(i, j));
  return v;
}

// Coefficients of target in the span of basis matrices.
std::vector<Scalar> expand_in_basis(const std::vector<ExactMatrix>& basis,
                                    const ExactMatrix& target) {
  if (basis.empty()) {
    if (!target.is_zero())
      throw Error(ErrorCode::Internal, "expansion over an empty basis");
    return {};
  }
  const std::size_t d2 = basis[0].rows() * basis[0].cols();
  ExactMatrix a(d2, basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    auto fk = flatten(basis[k]);
    for (std::size_t r = 0; r < d2; ++r) a.at(r, k) = fk[r];
  }
  return solve_linear(a, flatten(target));
}

// ----- polynomial matrices ------------------------------------------------

using PolyMat = std::vector<std::vector<SparsePoly>>;

PolyMat zero_pm(const RegistryPtr& reg, std::size_t rows, std::size_t cols) {
  return PolyMat(rows, std::vector<SparsePoly>(cols, SparsePoly(reg)));
}

PolyMat mul_pm(const PolyMat& a, const PolyMat& b) {
  PolyMat out = zero_pm(a[0][0].registry(), a.size(), b[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < b[0].size(); ++j)
        out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

PolyMat sub_pm(PolyMat a, const PolyMat& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] -= b[i][j];
  return a;
}

PolyMat neg_pm(PolyMat a) {
  for (auto& row : a)
    for (auto& p : row) p = -p;
  return a;
}

PolyMat transpose_pm(const PolyMat& a) {
  PolyMat out = zero_pm(a[0][0].registry(), a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) out[j][i] = a[i][j];
  return out;
}

PolyMat scalar_left(const ExactMatrix& m, const PolyMat& a) {
  PolyMat out = zero_pm(a[0][0].registry(), m.rows(), a[0].size());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (m.at(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < a[0].size(); ++j)
        out[i][j] += a[k][j].scaled(m.at(i, k));
    }
  return out;
}

PolyMat scalar_right(const PolyMat& a, const ExactMatrix& m) {
  PolyMat out = zero_pm(a[0][0].registry(), a.size(), m.cols());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < a[i].size(); ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (!m.at(k, j).is_zero()) out[i][j] += a[i][k].scaled(m.at(k, j));
    }
  return out;
}

// <pm, y> via the trace pairing: tr(pm * y) = sum_{l,k} pm[l][k] y[k][l].
SparsePoly trace_pair(const PolyMat& pm, const ExactMatrix& y) {
  SparsePoly out(pm[0][0].registry());
  for (std::size_t l = 0; l < pm.size(); ++l)
    for (std::size_t k = 0; k < pm[l].size(); ++k)
      if (!y.at(k, l).is_zero()) out += pm[l][k].scaled(y.at(k, l));
  return out;
}

// ----- coordinate block bookkeeping --------------------------------------

struct Block {
  char letter;            // 'a', 'b', 'c'
  int level;              // ladder index e of the Hom space L(V_{e-1}, V_e)
  int row_level, col_level;
  std::size_t rows, cols;
  std::size_t first;      // first variable index
  std::size_t idx(std::size_t i, std::size_t j) const {
    return first + i * cols + j;
  }
};

struct Layout {
  std::vector<Block> blocks;
  std::size_t total = 0;
  std::size_t weight_dim = 0;
  std::vector<std::size_t> torus_offset;  // per ladder level
  std::vector<std::size_t> torus_slots;   // per ladder level

  // Weight of the k-th standardized basis vector of V_level.
  std::vector<int> vec_weight(int level, std::size_t k) const {
    std::vector<int> w(weight_dim, 0);
    const std::size_t slots = torus_slots[level];
    if (slots == 0) return w;
    const std::size_t off = torus_offset[level];
    if (slots == 0) return w;
    if (k < slots)
      w[off + k] = 1;
    else
      w[off + (k - slots)] = -1;
    return w;
  }
};

std::vector<int> sub_weights(const std::vector<int>& a,
                             const std::vector<int>& b) {
  std::vector<int> w(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) w[i] = b[i] - a[i];
  return w;
}

Layout make_layout(const OrbitSpec& spec, const LadderData& lad) {
  Layout lay;
  lay.torus_offset.resize(lad.dims.size());
  lay.torus_slots.resize(lad.dims.size());
  for (std::size_t e = 0; e < lad.dims.size(); ++e) {
    lay.torus_offset[e] = lay.weight_dim;
    std::size_t slots = 0;
    if (spec.group == GroupKind::GL)
      slots = lad.dims[e];
    else if (lad.forms[e] == FormKind::Symplectic)
      slots = lad.dims[e] / 2;
    lay.torus_slots[e] = slots;
    lay.weight_dim += slots;
  }
  for (int e = 1; e <= lad.r; ++e) {
    const std::size_t up = lad.dims[e - 1], dn = lad.dims[e];
    if (spec.group == GroupKind::GL) {
      lay.blocks.push_back({'a', e, e - 1, e, up, dn, lay.total});
      lay.total += up * dn;
      lay.blocks.push_back({'b', e, e, e - 1, dn, up, lay.total});
      lay.total += dn * up;
    } else {
      lay.blocks.push_back({'c', e, e - 1, e, up, dn, lay.total});
      lay.total += up * dn;
    }
  }
  return lay;
}

bool lex_positive(const std::vector<int>& w) {
  for (int v : w) {
    if (v > 0) return true;
    if (v < 0) return false;
  }
  return false;
}

std::string frame_name(const char* base, std::size_t k) {
  std::ostringstream os;
  os << base << (k + 1);
  return os.str();
}

}  // namespace

ExactMatrix standardized_gram(FormKind kind, std::size_t dim) {
  if (kind == FormKind::Orthogonal) return ExactMatrix::identity(dim);
  if (kind != FormKind::Symplectic)
    throw Error(ErrorCode::Internal, "no Gram for a level without a form");
  if (dim % 2 != 0)
    throw Error(ErrorCode::Internal, "odd symplectic dimension");
  ExactMatrix j(dim, dim);
  const std::size_t k = dim / 2;
  for (std::size_t i = 0; i < k; ++i) {
    j.at(i, k + i) = 1;
    j.at(k + i, i) = -1;
  }
  return j;
}

std::vector<ExactMatrix> lie_basis_for(GroupKind kind, std::size_t d) {
  std::vector<ExactMatrix> out;
  if (kind == GroupKind::GL) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        ExactMatrix m(d, d);
        m.at(i, j) = 1;
        out.push_back(std::move(m));
      }
    return out;
  }
  if (kind == GroupKind::O) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) {
        ExactMatrix m(d, d);
        m.at(i, j) = 1;
        m.at(j, i) = -1;
        out.push_back(std::move(m));
      }
    return out;
  }
  // sp(d) with the standard block form: [[X, Y], [Z, -X^T]], Y and Z
  // symmetric; every element is a torus weight vector.
  if (d % 2 != 0) throw Error(ErrorCode::Internal, "odd symplectic dimension");
  const std::size_t k = d / 2;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      ExactMatrix m(d, d);
      m.at(i, j) = 1;
      m.at(k + j, k + i) = -1;
      out.push_back(std::move(m));
    }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) {
      ExactMatrix m(d, d);
      m.at(i, k + j) = 1;
      m.at(j, k + i) = 1;
      out.push_back(std::move(m));
      ExactMatrix z(d, d);
      z.at(k + i, j) = 1;
      z.at(k + j, i) = 1;
      out.push_back(std::move(z));
    }
  return out;
}

SparsePoly apply_derivation(const LieElement& el, const SparsePoly& f) {
  SparsePoly out(f.registry());
  const std::size_t n = f.registry()->size();
  for (std::size_t a = 0; a < n; ++a) {
    SparsePoly df = f.derivative(a);
    if (df.is_zero()) continue;
    for (std::size_t b = 0; b < n; ++b) {
      const Scalar& c = el.coord_action.at(a, b);
      if (c.is_zero()) continue;
      for (const auto& [m, v] : df.terms()) {
        Monomial mm = m;
        ++mm[b];
        out.add_term(mm, v * c);
      }
    }
  }
  return out;
}

SparsePoly apply_substitution(const ExactMatrix& subst, const SparsePoly& f) {
  return f.linear_substitute(subst, f.registry());
}

SparsePoly apply_theta(const KPModel& model, const SparsePoly& f) {
  return f.conj_coefficients().linear_substitute(model.theta_mat,
                                                 model.registry);
}

std::string KPModel::convention_summary() const {
  std::ostringstream os;
  os << "format=1;poisson=omega_inverse;omega_gl=tr(AB')-tr(BA');"
     << "omega_osp=-2tr(C*C');hamiltonian={moment_y,f}=y.f;"
     << "adjoint=Qe_inv.Ct.Qe_prev;frame={q,p}=-1;tau=i.z;"
     << "theta=omega/" << theta_lambda << ".conj";
  return os.str();
}

KPModel build_model(const OrbitSpec& spec) {
  KPModel model;
  model.spec = spec;
  model.lad = orbit_catalog::ladder(spec);
  const LadderData& lad = model.lad;
  const Layout lay = make_layout(spec, lad);
  const bool is_gl = spec.group == GroupKind::GL;

  // --- registry with torus weights ---
  std::size_t max_dim = 0;
  for (auto d : lad.dims) max_dim = std::max(max_dim, d);
  std::vector<VarInfo> vars(lay.total);
  for (const Block& blk : lay.blocks) {
    for (std::size_t i = 0; i < blk.rows; ++i)
      for (std::size_t j = 0; j < blk.cols; ++j) {
        VarInfo v;
        std::ostringstream os;
        os << blk.letter << blk.level << "_";
        if (max_dim > 9)
          os << (i + 1) << "_" << (j + 1);
        else
          os << (i + 1) << (j + 1);
        v.name = os.str();
        v.level = blk.level;
        v.block = blk.letter;
        v.row = static_cast<int>(i);
        v.col = static_cast<int>(j);
        v.weight = sub_weights(lay.vec_weight(blk.row_level, i),
                               lay.vec_weight(blk.col_level, j));
        v.weight.resize(lay.weight_dim, 0);
        vars[blk.idx(i, j)] = std::move(v);
      }
  }
  model.registry = std::make_shared<const VariableRegistry>(std::move(vars));
  model.s_weight_begin = lay.torus_slots[0];
  const RegistryPtr& reg = model.registry;
  const std::size_t N = lay.total;

  // --- standardized Grams and their inverses per level ---
  std::vector<ExactMatrix> gram(lad.dims.size()), gram_inv(lad.dims.size());
  if (!is_gl)
    for (std::size_t e = 0; e < lad.dims.size(); ++e) {
      gram[e] = standardized_gram(lad.forms[e], lad.dims[e]);
      gram_inv[e] = gram[e].inverse();
    }

  // --- symplectic form ---
  ExactMatrix omega(N, N);
  for (const Block& blk : lay.blocks) {
    if (blk.letter == 'a') {
      const Block* bblk = nullptr;
      for (const Block& other : lay.blocks)
        if (other.letter == 'b' && other.level == blk.level) bblk = &other;
      for (std::size_t i = 0; i < blk.rows; ++i)
        for (std::size_t j = 0; j < blk.cols; ++j) {
          // tr(E_ij E_ji) pairing between A and B entries.
          omega.at(blk.idx(i, j), bblk->idx(j, i)) += 1;
          omega.at(bblk->idx(j, i), blk.idx(i, j)) += -1;
        }
    } else if (blk.letter == 'c') {
      const std::size_t e = static_cast<std::size_t>(blk.level);
      for (std::size_t i = 0; i < blk.rows; ++i)
        for (std::size_t j = 0; j < blk.cols; ++j)
          for (std::size_t k = 0; k < blk.rows; ++k)
            for (std::size_t l = 0; l < blk.cols; ++l) {
              Scalar v = gram[e - 1].at(i, k) * gram_inv[e].at(l, j);
              if (!v.is_zero())
                omega.at(blk.idx(i, j), blk.idx(k, l)) += v * Scalar(-2);
            }
    }
  }
  if (!(omega.transpose() + omega).is_zero()) fail("form is not antisymmetric");
  if (omega.rank() != N) fail("form is degenerate");
  model.omega.registry = reg;
  model.omega.omega = omega;
  model.omega.poisson = omega.inverse();

  // --- coordinate variable matrices per block ---
  auto block_of = [&](char letter, int level) -> const Block* {
    for (const Block& b : lay.blocks)
      if (b.letter == letter && b.level == level) return &b;
    return nullptr;
  };
  auto var_pm = [&](const Block& blk) {
    PolyMat pm = zero_pm(reg, blk.rows, blk.cols);
    for (std::size_t i = 0; i < blk.rows; ++i)
      for (std::size_t j = 0; j < blk.cols; ++j)
        pm[i][j] = SparsePoly::variable(reg, blk.idx(i, j));
    return pm;
  };

  // Momentum matrices: level 0 holds the level-0 moment source (gamma), the
  // others the per-level sigma sources.
  std::vector<PolyMat> moment_mat(lad.dims.size());
  if (is_gl) {
    std::vector<PolyMat> A(lad.dims.size()), B(lad.dims.size());
    for (int e = 1; e <= lad.r; ++e) {
      A[e] = var_pm(*block_of('a', e));
      B[e] = var_pm(*block_of('b', e));
    }
    moment_mat[0] = neg_pm(mul_pm(A[1], B[1]));
    for (int e = 1; e <= lad.r; ++e) {
      moment_mat[e] = mul_pm(B[e], A[e]);
      if (e + 1 <= lad.r)
        moment_mat[e] = sub_pm(moment_mat[e], mul_pm(A[e + 1], B[e + 1]));
    }
  } else {
    std::vector<PolyMat> C(lad.dims.size() + 1), Cs(lad.dims.size() + 1);
    for (int e = 1; e <= lad.r; ++e) {
      C[e] = var_pm(*block_of('c', e));
      Cs[e] = scalar_left(gram_inv[e],
                          scalar_right(transpose_pm(C[e]), gram[e - 1]));
    }
    moment_mat[0] = neg_pm(mul_pm(C[1], Cs[1]));
    for (int e = 1; e <= lad.r; ++e) {
      moment_mat[e] = mul_pm(Cs[e], C[e]);
      if (e + 1 <= lad.r)
        moment_mat[e] = sub_pm(moment_mat[e], mul_pm(C[e + 1], Cs[e + 1]));
    }
  }

  // --- Lie bases with actions and moments ---
  auto make_element = [&](int level, const ExactMatrix& mat) {
    LieElement el;
    el.level = level;
    el.mat = mat;
    ExactMatrix act(N, N);
    for (const Block& blk : lay.blocks) {
      if (blk.row_level == level) {
        // left composition: (u m)_{ij} = sum_k u_{ik} m_{kj}
        for (std::size_t i = 0; i < blk.rows; ++i)
          for (std::size_t k = 0; k < blk.rows; ++k) {
            if (mat.at(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < blk.cols; ++j)
              act.at(blk.idx(i, j), blk.idx(k, j)) += mat.at(i, k);
          }
      }
      if (blk.col_level == level) {
        // minus right composition: -(m u)_{ij} = -sum_k m_{ik} u_{kj}
        for (std::size_t k = 0; k < blk.cols; ++k)
          for (std::size_t j = 0; j < blk.cols; ++j) {
            if (mat.at(k, j).is_zero()) continue;
            for (std::size_t i = 0; i < blk.rows; ++i)
              act.at(blk.idx(i, j), blk.idx(i, k)) -= mat.at(k, j);
          }
      }
    }
    el.point_action = act;
    el.coord_action = act.scaled(Scalar(-1));
    el.moment = trace_pair(moment_mat[static_cast<std::size_t>(level)], mat);

    // Operator weight, from any nonzero action entry; all entries and the
    // moment must agree with it.
    bool found = false;
    std::vector<int> wt(lay.weight_dim, 0);
    for (std::size_t a = 0; a < N; ++a)
      for (std::size_t b = 0; b < N; ++b) {
        if (act.at(a, b).is_zero()) continue;
        std::vector<int> cand =
            sub_weights(reg->info(a).weight, reg->info(b).weight);
        if (!found) {
          wt = cand;
          found = true;
        } else if (cand != wt) {
          fail("action is not torus homogeneous");
        }
      }
    el.weight = wt;
    if (!el.moment.is_zero()) {
      if (!el.moment.is_homogeneous() || el.moment.degree() != 2)
        fail("momentum polynomial is not a quadratic");
      for (const auto& [mon, coeff] : el.moment.terms())
        if (reg->monomial_weight(mon) != wt)
          fail("momentum polynomial weight does not match its action");
    }
    return el;
  };

  const GroupKind g_kind = is_gl ? GroupKind::GL : lad.s_levels[0];
  for (const ExactMatrix& m : lie_basis_for(g_kind, lad.dims[0]))
    model.g_basis.push_back(make_element(0, m));
  std::vector<std::size_t> s_level_first(lad.dims.size() + 1, 0);
  for (int e = 1; e <= lad.r; ++e) {
    s_level_first[e] = model.s_basis.size();
    const GroupKind kind = is_gl ? GroupKind::GL : lad.s_levels[e];
    for (const ExactMatrix& m : lie_basis_for(kind, lad.dims[e]))
      model.s_basis.push_back(make_element(e, m));
  }
  s_level_first[lad.r + 1] = model.s_basis.size();

  // --- reflections ---
  auto make_reflection = [&](int level) {
    Reflection ref;
    ref.level = level;
    ExactMatrix r = ExactMatrix::identity(N);
    for (const Block& blk : lay.blocks) {
      if (blk.row_level == level)
        for (std::size_t j = 0; j < blk.cols; ++j) {
          Scalar& v = r.at(blk.idx(0, j), blk.idx(0, j));
          v = -v;
        }
      if (blk.col_level == level)
        for (std::size_t i = 0; i < blk.rows; ++i) {
          Scalar& v = r.at(blk.idx(i, 0), blk.idx(i, 0));
          v = -v;
        }
    }
    ref.subst = r;
    return ref;
  };
  if (!is_gl) {
    for (int e = 1; e <= lad.r; ++e)
      if (lad.forms[e] == FormKind::Orthogonal)
        model.reflections.push_back(make_reflection(e));
    if (lad.forms[0] == FormKind::Orthogonal) {
      model.has_g_reflection = true;
      model.g_reflection = make_reflection(0);
    }
  }

  // --- varsigma = minus transpose, expanded in the stored bases ---
  auto varsigma_matrix = [&](const std::vector<LieElement>& basis,
                             const std::vector<std::size_t>& level_first,
                             bool by_level) {
    ExactMatrix vs(basis.size(), basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const int lvl = basis[k].level;
      std::size_t first = 0, last = basis.size();
      if (by_level) {
        first = level_first[static_cast<std::size_t>(lvl)];
        last = level_first[static_cast<std::size_t>(lvl) + 1];
      }
      std::vector<ExactMatrix> mats;
      for (std::size_t l = first; l < last; ++l) mats.push_back(basis[l].mat);
      auto coeffs =
          expand_in_basis(mats, basis[k].mat.transpose().scaled(Scalar(-1)));
      for (std::size_t l = 0; l < coeffs.size(); ++l)
        vs.at(k, first + l) = coeffs[l];
    }
    return vs;
  };
  model.varsigma_g = varsigma_matrix(model.g_basis, {}, false);
  model.varsigma_s = varsigma_matrix(model.s_basis, s_level_first, true);

  // --- verification: form invariance, commutation ---
  auto check_invariance = [&](const LieElement& el) {
    if (!(el.point_action.transpose() * omega + omega * el.point_action)
             .is_zero())
      fail("action does not preserve the form");
  };
  for (const auto& el : model.g_basis) check_invariance(el);
  for (const auto& el : model.s_basis) check_invariance(el);
  for (const auto& ge : model.g_basis)
    for (const auto& se : model.s_basis)
      if (!(ge.point_action * se.point_action -
            se.point_action * ge.point_action)
               .is_zero())
        fail("level-0 and higher-level actions do not commute");
  auto check_reflection = [&](const Reflection& ref) {
    if (!(ref.subst * ref.subst - ExactMatrix::identity(N)).is_zero())
      fail("reflection is not an involution");
    if (!(ref.subst.transpose() * omega * ref.subst - omega).is_zero())
      fail("reflection does not preserve the form");
  };
  for (const auto& ref : model.reflections) check_reflection(ref);
  if (model.has_g_reflection) check_reflection(model.g_reflection);

  // --- verification: Hamiltonian correspondence and bracket families ---
  auto bracket = [&](const SparsePoly& f, const SparsePoly& g) {
    return poly_symplectic::poisson_bracket(f, g, model.omega);
  };
  auto moment_combo = [&](const std::vector<LieElement>& basis,
                          std::size_t first,
                          const std::vector<Scalar>& coeffs) {
    SparsePoly out(reg);
    for (std::size_t l = 0; l < coeffs.size(); ++l)
      out += basis[first + l].moment.scaled(coeffs[l]);
    return out;
  };
  auto check_family = [&](const std::vector<LieElement>& basis,
                          std::size_t first, std::size_t last) {
    std::vector<ExactMatrix> mats;
    for (std::size_t l = first; l < last; ++l) mats.push_back(basis[l].mat);
    for (std::size_t i = first; i < last; ++i)
      for (std::size_t j = first; j < last; ++j) {
        ExactMatrix comm =
            basis[i].mat * basis[j].mat - basis[j].mat * basis[i].mat;
        auto coeffs = expand_in_basis(mats, comm);
        if (!(bracket(basis[i].moment, basis[j].moment) ==
              moment_combo(basis, first, coeffs)))
          fail("bracket of momenta does not match the Lie bracket");
      }
  };
  check_family(model.g_basis, 0, model.g_basis.size());
  for (int e = 1; e <= lad.r; ++e)
    check_family(model.s_basis, s_level_first[e], s_level_first[e + 1]);
  for (std::size_t i = 0; i < model.s_basis.size(); ++i)
    for (std::size_t j = 0; j < model.s_basis.size(); ++j)
      if (model.s_basis[i].level != model.s_basis[j].level &&
          !bracket(model.s_basis[i].moment, model.s_basis[j].moment).is_zero())
        fail("momenta of distinct levels do not Poisson commute");
  for (const auto& ge : model.g_basis)
    for (const auto& se : model.s_basis)
      if (!bracket(ge.moment, se.moment).is_zero())
        fail("level-0 momenta do not commute with the higher-level momenta");

  auto check_hamiltonian = [&](const LieElement& el) {
    for (std::size_t a = 0; a < N; ++a) {
      SparsePoly rhs(reg);
      for (std::size_t b = 0; b < N; ++b) {
        if (el.coord_action.at(a, b).is_zero()) continue;
        Monomial m(N, 0);
        m[b] = 1;
        rhs.add_term(m, el.coord_action.at(a, b));
      }
      if (!(bracket(el.moment, SparsePoly::variable(reg, a)) == rhs))
        fail("momentum does not generate its action");
    }
  };
  for (const auto& el : model.g_basis) check_hamiltonian(el);
  for (const auto& el : model.s_basis) check_hamiltonian(el);

  // --- verification: invariance of the level-0 momenta ---
  for (const auto& ge : model.g_basis) {
    for (const auto& se : model.s_basis)
      if (!apply_derivation(se, ge.moment).is_zero())
        fail("level-0 momentum is not infinitesimally invariant");
    for (const auto& ref : model.reflections)
      if (!(apply_substitution(ref.subst, ge.moment) == ge.moment))
        fail("level-0 momentum is not reflection invariant");
  }

  // --- Darboux frame ---
  std::vector<std::size_t> positives, negatives;
  for (std::size_t a = 0; a < N; ++a) {
    const auto& w = reg->info(a).weight;
    if (std::all_of(w.begin(), w.end(), [](int v) { return v == 0; }))
      fail("coordinate with zero torus weight");
    (lex_positive(w) ? positives : negatives).push_back(a);
  }
  if (positives.size() != negatives.size())
    fail("unbalanced weight split of the coordinates");
  const std::size_t m = positives.size();
  model.q_vars = positives;
  ExactMatrix to_frame(N, N);
  for (std::size_t k = 0; k < m; ++k) to_frame.at(k, positives[k]) = 1;
  // Solve {q_i, p_j} = -delta_ij inside each opposite-weight pair of blocks.
  {
    std::map<std::vector<int>, std::vector<std::size_t>> qs, ns;
    for (std::size_t k = 0; k < m; ++k)
      qs[reg->info(positives[k]).weight].push_back(k);
    for (std::size_t a : negatives) ns[reg->info(a).weight].push_back(a);
    for (const auto& [w, qk] : qs) {
      std::vector<int> nw(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) nw[i] = -w[i];
      auto it = ns.find(nw);
      if (it == ns.end() || it->second.size() != qk.size())
        fail("weight blocks do not pair");
      const auto& nk = it->second;
      ExactMatrix pairing(qk.size(), nk.size());
      for (std::size_t i = 0; i < qk.size(); ++i)
        for (std::size_t j = 0; j < nk.size(); ++j)
          pairing.at(i, j) = model.omega.poisson.at(positives[qk[i]], nk[j]);
      ExactMatrix sol = pairing.inverse().scaled(Scalar(-1));
      for (std::size_t j = 0; j < nk.size(); ++j)
        for (std::size_t i = 0; i < qk.size(); ++i)
          to_frame.at(m + qk[i], nk[j]) = sol.at(j, i);
    }
  }
  model.to_frame = to_frame;
  model.from_frame = to_frame.inverse();
  {
    ExactMatrix fp = to_frame * model.omega.poisson * to_frame.transpose();
    ExactMatrix expect(N, N);
    for (std::size_t k = 0; k < m; ++k) {
      expect.at(k, m + k) = -1;
      expect.at(m + k, k) = 1;
    }
    if (!(fp - expect).is_zero()) fail("frame brackets are not standard");
  }
  {
    std::vector<VarInfo> fvars(N);
    for (std::size_t k = 0; k < m; ++k) {
      VarInfo q = reg->info(positives[k]);
      q.name = frame_name("q", k);
      fvars[k] = q;
      VarInfo p;
      p.name = frame_name("p", k);
      p.level = q.level;
      p.block = 'p';
      p.weight = q.weight;
      for (int& v : p.weight) v = -v;
      fvars[m + k] = p;
    }
    model.frame_registry =
        std::make_shared<const VariableRegistry>(std::move(fvars));
  }

  // --- antilinear conjugation matrix ---
  model.theta_lambda = is_gl ? 1 : 2;
  model.theta_mat =
      model.omega.omega.scaled(Scalar(mpq_class(1, model.theta_lambda)));
  if (!(model.theta_mat * model.theta_mat + ExactMatrix::identity(N))
           .is_zero())
    throw Error(ErrorCode::InvolutionInconsistency,
                "conjugation matrix does not square to minus identity");
  auto check_varsigma = [&](const std::vector<LieElement>& basis,
                            const ExactMatrix& vs) {
    for (std::size_t k = 0; k < basis.size(); ++k) {
      SparsePoly lhs = apply_theta(model, basis[k].moment);
      SparsePoly rhs(reg);
      for (std::size_t l = 0; l < basis.size(); ++l)
        if (!vs.at(k, l).is_zero())
          rhs += basis[l].moment.scaled(vs.at(k, l));
      if (!(lhs == rhs))
        throw Error(ErrorCode::InvolutionInconsistency,
                    "conjugation does not intertwine the momenta");
    }
  };
  check_varsigma(model.g_basis, model.varsigma_g);
  check_varsigma(model.s_basis, model.varsigma_s);
  auto check_theta_commutes = [&](const ExactMatrix& subst) {
    if (!(model.theta_mat * subst - subst * model.theta_mat).is_zero())
      throw Error(ErrorCode::InvolutionInconsistency,
                  "conjugation does not commute with a reflection");
  };
  for (const auto& ref : model.reflections) check_theta_commutes(ref.subst);
  if (model.has_g_reflection) check_theta_commutes(model.g_reflection.subst);

  return model;
}

}  // namespace kp_model
}  // namespace orbitq
