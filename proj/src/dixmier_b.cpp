#include "orbitq/dixmier_b.hpp"

#include <algorithm>
#include <sstream>
#include <string>

namespace orbitq::dixmier_b {

namespace {

using poly_symplectic::Monomial;
using poly_symplectic::MonomialOrder;
using poly_symplectic::SparsePoly;
using poly_symplectic::coords_of;
using poly_symplectic::monomial_basis;
using reduction_classical::WeightBlock;
using weyl_quant::anticommutator;
using weyl_quant::commutator;
using weyl_quant::weyl_mul;

[[noreturn]] void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

std::vector<int> add_weights(const std::vector<int>& a,
                             const std::vector<int>& b) {
  std::vector<int> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

std::vector<int> sub_weights(const std::vector<int>& a,
                             const std::vector<int>& b) {
  std::vector<int> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

// Buckets the monomials of the even natural degrees in [deg_lo, deg_hi] by
// torus weight, in canonical (degree, then monomial) order.
std::map<std::vector<int>, WeightBlock> even_weight_blocks(
    const poly_symplectic::VariableRegistry& reg, int deg_lo, int deg_hi) {
  std::map<std::vector<int>, WeightBlock> out;
  for (int deg = deg_lo; deg <= deg_hi; deg += 2) {
    for (const auto& mono : monomial_basis(reg, deg)) {
      auto& blk = out[reg.monomial_weight(mono)];
      blk.index.emplace(mono, blk.monos.size());
      blk.monos.push_back(mono);
    }
  }
  return out;
}

WeylElement monomial_element(const poly_symplectic::RegistryPtr& frame,
                             const Monomial& mono) {
  SparsePoly p(frame);
  p.add_term(mono, Scalar(1));
  return WeylElement::from_normal_symbol(std::move(p));
}

// Substitution automorphism given by a frame-coordinate linear map whose
// rows are the generator images.  Valid only for maps preserving the
// position and momentum spans separately (checked by the callers once).
WeylElement subst_frame(const ExactMatrix& frame_map, const WeylElement& a) {
  return WeylElement::from_normal_symbol(
      a.normal_symbol().linear_substitute(frame_map, a.registry()));
}

void check_frame_split(const ExactMatrix& f, const std::string& what) {
  const std::size_t m = f.rows() / 2;
  for (std::size_t i = 0; i < 2 * m; ++i) {
    for (std::size_t j = 0; j < 2 * m; ++j) {
      const bool cross = (i < m) != (j < m);
      if (cross && !f.at(i, j).is_zero()) {
        fail(ErrorCode::Internal,
             what + ": linear map mixes position and momentum generators");
      }
    }
  }
}

// Splits a Weyl element into weight-homogeneous normal symbols.
std::map<std::vector<int>, SparsePoly> split_by_weight(const WeylElement& a) {
  std::map<std::vector<int>, SparsePoly> out;
  const auto& reg = a.registry();
  for (const auto& [mono, coeff] : a.normal_symbol().terms()) {
    auto w = reg->monomial_weight(mono);
    auto it = out.find(w);
    if (it == out.end()) it = out.emplace(w, SparsePoly(reg)).first;
    it->second.add_term(mono, coeff);
  }
  return out;
}

// Least-squares-free exact solve of A x = b (A injective on its pivots);
// returns one solution.  Throws the given code if inconsistent.
std::vector<Scalar> solve_columns(const ExactMatrix& a,
                                  const std::vector<Scalar>& b, ErrorCode code,
                                  const std::string& what) {
  ExactMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug.at(r, c) = a.at(r, c);
    aug.at(r, a.cols()) = b[r];
  }
  auto piv = aug.rref();
  std::vector<Scalar> x(a.cols(), Scalar(0));
  for (std::size_t r = 0; r < piv.size(); ++r) {
    if (piv[r] == a.cols()) fail(code, what);
    x[piv[r]] = aug.at(r, a.cols());
  }
  return x;
}

}  // namespace

WeylElement apply_frame_map(const Quantization& quant,
                            const ExactMatrix& natural_map,
                            const WeylElement& a) {
  const auto& model = quant.model();
  ExactMatrix f = model.to_frame * natural_map * model.from_frame;
  check_frame_split(f, "apply_frame_map");
  return subst_frame(f, a);
}

bool BAlgebra::Element::is_zero() const {
  for (const auto& [w, v] : coords) {
    for (const auto& c : v) {
      if (!c.is_zero()) return false;
    }
  }
  return true;
}

BAlgebra::BAlgebra(const Quantization& quant, int max_slack)
    : quant_(&quant), red_(quant.model()), max_slack_(max_slack) {
  const auto& model = quant.model();
  for (const auto& refl : model.reflections) {
    ExactMatrix f = model.to_frame * refl.subst * model.from_frame;
    check_frame_split(f, "reflection action");
    refl_frame_.push_back(std::move(f));
  }
  if (model.has_g_reflection) {
    has_g_refl_ = true;
    g_refl_frame_ = model.to_frame * model.g_reflection.subst * model.from_frame;
    check_frame_split(g_refl_frame_, "level-0 reflection action");
  }
}

bool BAlgebra::s_trivial_weight(const std::vector<int>& w) const {
  const auto& model = quant_->model();
  for (std::size_t i = model.s_weight_begin; i < w.size(); ++i) {
    if (w[i] != 0) return false;
  }
  return true;
}

BAlgebra::DegreeData BAlgebra::build_degree(int d, int slack) const {
  const auto& model = quant_->model();
  const auto& frame = quant_->frame();
  const std::size_t ns = model.s_basis.size();

  DegreeData dd;
  dd.slack = slack;
  {
    auto blocks = even_weight_blocks(*frame, 0, 2 * d);
    for (auto& [w, blk] : blocks) {
      Block b;
      b.monos = std::move(blk);
      dd.blocks.emplace(w, std::move(b));
    }
  }
  // Anticommutator sources run over filtration d-1+slack; their products
  // overflow into the even degrees (2d, 2d + 2*slack].
  const int src_hi = 2 * (d - 1 + slack);
  auto src = even_weight_blocks(*frame, 0, std::max(src_hi, -2));
  auto high = slack >= 1 ? even_weight_blocks(*frame, 2 * d + 2, 2 * d + 2 * slack)
                         : std::map<std::vector<int>, WeightBlock>{};

  for (auto& [w, blk] : dd.blocks) {
    blk.s_trivial = s_trivial_weight(w);
    const std::size_t n = blk.monos.monos.size();
    if (!blk.s_trivial) {
      // The group-action images alone fill every nontrivial-weight block,
      // so these blocks lie entirely inside the reduction subspace.
      blk.mpart = n;
      continue;
    }

    // ---- Route 1: rows of M within this block ----
    ExactMatrix low(0, n);
    // Commutator part, over all of W^even_d (commutators do not raise the
    // filtration level).
    for (std::size_t k = 0; k < ns; ++k) {
      auto srcw = sub_weights(w, model.s_basis[k].weight);
      auto it = dd.blocks.find(srcw);
      if (it == dd.blocks.end()) continue;
      for (const auto& mono : it->second.monos.monos) {
        WeylElement c =
            commutator(quant_->xi_s(k), monomial_element(frame, mono));
        if (c.is_zero()) continue;
        low.append_row(coords_of(c.normal_symbol(), blk.monos.index));
      }
    }
    // Reflection part (1 - rho), over this block; the image coordinate
    // rows are reused below for the invariance constraints.
    std::vector<ExactMatrix> refl_diff;
    for (const auto& f : refl_frame_) {
      ExactMatrix diff(0, n);
      for (const auto& mono : blk.monos.monos) {
        WeylElement a = monomial_element(frame, mono);
        WeylElement dd_el = a - subst_frame(f, a);
        diff.append_row(dd_el.is_zero()
                            ? std::vector<Scalar>(n, Scalar(0))
                            : coords_of(dd_el.normal_symbol(), blk.monos.index));
      }
      for (std::size_t r = 0; r < diff.rows(); ++r) {
        auto row = diff.row(r);
        bool nz = false;
        for (const auto& c : row) nz = nz || !c.is_zero();
        if (nz) low.append_row(row);
      }
      refl_diff.push_back(std::move(diff));
    }
    // Anticommutator part, with echelon elimination of the high-degree
    // overflow columns.
    {
      const WeightBlock* hblk = nullptr;
      if (slack >= 1) {
        auto hit = high.find(w);
        if (hit != high.end()) hblk = &hit->second;
      }
      const std::size_t nhigh = hblk ? hblk->monos.size() : 0;
      ExactMatrix ac(0, nhigh + n);
      for (std::size_t k = 0; k < ns; ++k) {
        auto srcw = sub_weights(w, model.s_basis[k].weight);
        auto it = src.find(srcw);
        if (it == src.end()) continue;
        for (const auto& mono : it->second.monos) {
          WeylElement p =
              anticommutator(quant_->xi_s(k), monomial_element(frame, mono));
          if (p.is_zero()) continue;
          std::vector<Scalar> row(nhigh + n, Scalar(0));
          for (const auto& [m, coeff] : p.normal_symbol().terms()) {
            const int deg = poly_symplectic::monomial_degree(m);
            if (deg <= 2 * d) {
              auto mi = blk.monos.index.find(m);
              if (mi == blk.monos.index.end()) {
                fail(ErrorCode::Internal,
                     "anticommutator term left its weight block");
              }
              row[nhigh + mi->second] = coeff;
            } else {
              if (!hblk) {
                fail(ErrorCode::Internal,
                     "anticommutator overflow outside the high blocks");
              }
              auto mi = hblk->index.find(m);
              if (mi == hblk->index.end()) {
                fail(ErrorCode::Internal,
                     "anticommutator overflow outside the high blocks");
              }
              row[mi->second] = coeff;
            }
          }
          ac.append_row(row);
        }
      }
      if (nhigh == 0) {
        for (std::size_t r = 0; r < ac.rows(); ++r) low.append_row(ac.row(r));
      } else if (ac.rows() > 0) {
        auto piv = ac.rref();
        for (std::size_t r = 0; r < piv.size(); ++r) {
          if (piv[r] < nhigh) continue;
          std::vector<Scalar> row(n);
          for (std::size_t c = 0; c < n; ++c) row[c] = ac.at(r, nhigh + c);
          low.append_row(row);
        }
      }
    }
    auto low_piv = low.rref();
    blk.mpart = low_piv.size();
    ExactMatrix mbasis(blk.mpart, n);
    for (std::size_t r = 0; r < blk.mpart; ++r) {
      for (std::size_t c = 0; c < n; ++c) mbasis.at(r, c) = low.at(r, c);
    }

    // ---- Route 2: invariant subspace of the block ----
    ExactMatrix constraints(0, n);
    for (std::size_t k = 0; k < ns; ++k) {
      auto tgtw = add_weights(w, model.s_basis[k].weight);
      auto it = dd.blocks.find(tgtw);
      ExactMatrix images(n, it == dd.blocks.end() ? 0 : it->second.monos.monos.size());
      for (std::size_t i = 0; i < n; ++i) {
        WeylElement c = commutator(quant_->xi_s(k),
                                   monomial_element(frame, blk.monos.monos[i]));
        if (c.is_zero()) continue;
        if (it == dd.blocks.end()) {
          fail(ErrorCode::Internal, "commutator image left the block table");
        }
        auto row = coords_of(c.normal_symbol(), it->second.monos.index);
        for (std::size_t j = 0; j < row.size(); ++j) images.at(i, j) = row[j];
      }
      for (std::size_t j = 0; j < images.cols(); ++j) {
        std::vector<Scalar> cons(n);
        bool nz = false;
        for (std::size_t i = 0; i < n; ++i) {
          cons[i] = images.at(i, j);
          nz = nz || !cons[i].is_zero();
        }
        if (nz) constraints.append_row(cons);
      }
    }
    for (const auto& diff : refl_diff) {
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<Scalar> cons(n);
        bool nz = false;
        for (std::size_t i = 0; i < n; ++i) {
          cons[i] = diff.at(i, j);
          nz = nz || !cons[i].is_zero();
        }
        if (nz) constraints.append_row(cons);
      }
    }
    blk.inv_red = constraints.rows() == 0
                      ? ExactMatrix::identity(n)
                      : exact_linalg::kernel_basis(constraints);
    blk.inv_piv = blk.inv_red.rref();
    const std::size_t ninv = blk.inv_piv.size();
    if (ninv != blk.inv_red.rows()) {
      fail(ErrorCode::Internal, "invariant basis was not independent");
    }

    // ---- M cap W^inv, and the quotient positions ----
    if (ninv == 0) {
      blk.m_red = ExactMatrix(0, 0);
    } else if (blk.mpart == 0) {
      blk.m_red = ExactMatrix(0, ninv);
      for (std::size_t j = 0; j < ninv; ++j) blk.b_pos.push_back(j);
    } else {
      ExactMatrix inter = exact_linalg::intersect_subspaces(mbasis, blk.inv_red);
      ExactMatrix mcoords(0, ninv);
      for (std::size_t r = 0; r < inter.rows(); ++r) {
        auto v = inter.row(r);
        std::vector<Scalar> c(ninv);
        for (std::size_t j = 0; j < ninv; ++j) c[j] = v[blk.inv_piv[j]];
        // Safety: the intersection really lies in the invariant row space.
        std::vector<Scalar> recon(n, Scalar(0));
        for (std::size_t j = 0; j < ninv; ++j) {
          for (std::size_t col = 0; col < n; ++col) {
            recon[col] += c[j] * blk.inv_red.at(j, col);
          }
        }
        for (std::size_t col = 0; col < n; ++col) {
          if (!(recon[col] - v[col]).is_zero()) {
            fail(ErrorCode::Internal,
                 "intersection row outside the invariant space");
          }
        }
        mcoords.append_row(c);
      }
      blk.m_piv = mcoords.rref();
      ExactMatrix compact(blk.m_piv.size(), ninv);
      for (std::size_t r = 0; r < blk.m_piv.size(); ++r) {
        for (std::size_t c = 0; c < ninv; ++c) compact.at(r, c) = mcoords.at(r, c);
      }
      blk.m_red = std::move(compact);
      for (std::size_t j = 0; j < ninv; ++j) {
        if (std::find(blk.m_piv.begin(), blk.m_piv.end(), j) == blk.m_piv.end()) {
          blk.b_pos.push_back(j);
        }
      }
    }
  }

  // ---- Dimension bookkeeping ----
  BRow& row = dd.row;
  row.d = d;
  row.slack = slack;
  for (const auto& [w, blk] : dd.blocks) {
    row.dim_weven += blk.monos.monos.size();
    row.dim_mpart += blk.mpart;
    if (blk.s_trivial) {
      row.dim_winv += blk.inv_piv.size();
      if (!blk.b_pos.empty()) {
        dd.b_offset[w] = dd.b_index.size();
        for (std::size_t k = 0; k < blk.b_pos.size(); ++k) {
          dd.b_index.emplace_back(w, k);
        }
      }
      row.dim_b_invariant += blk.b_pos.size();
    }
  }
  row.dim_b = row.dim_weven - row.dim_mpart;
  return dd;
}

const BRow& BAlgebra::row(int d) {
  auto it = degrees_.find(d);
  if (it != degrees_.end()) return it->second.row;
  const std::size_t predicted = red_.hilbert_row(d).dim_quotient;
  const std::size_t prev = d == 0 ? 0 : row(d - 1).dim_b_invariant;
  DegreeData chosen;
  for (int slack = 0; slack <= max_slack_; ++slack) {
    DegreeData dd = build_degree(d, slack);
    dd.row.predicted = predicted;
    dd.row.gr_b = dd.row.dim_b_invariant - prev;
    dd.row.match = dd.row.dim_b == dd.row.dim_b_invariant &&
                   dd.row.gr_b == predicted;
    chosen = std::move(dd);
    if (chosen.row.match) break;
  }
  auto [pos, ok] = degrees_.emplace(d, std::move(chosen));
  (void)ok;
  return pos->second.row;
}

std::vector<BRow> BAlgebra::window(int dmax) {
  std::vector<BRow> rows;
  for (int d = 0; d <= dmax; ++d) rows.push_back(row(d));
  return rows;
}

BAlgebra::DegreeData& BAlgebra::data(int d) {
  row(d);
  return degrees_.at(d);
}

std::size_t BAlgebra::dim_b(int d) { return data(d).b_index.size(); }

std::vector<BAlgebra::Element> BAlgebra::basis(int d) {
  DegreeData& dd = data(d);
  std::vector<Element> out;
  for (const auto& [w, k] : dd.b_index) {
    Element e;
    e.d = d;
    auto& v = e.coords[w];
    v.assign(dd.blocks.at(w).b_pos.size(), Scalar(0));
    v[k] = Scalar(1);
    out.push_back(std::move(e));
  }
  return out;
}

BAlgebra::Element BAlgebra::reduce(const WeylElement& a, int d) {
  DegreeData& dd = data(d);
  if (a.is_zero()) return Element{d, {}};
  if (a.degree() > 2 * d) {
    fail(ErrorCode::DegreeTooSmall,
         "element does not lie in the requested filtration level");
  }
  if (!a.is_even()) {
    fail(ErrorCode::Internal, "projection applies to even elements only");
  }
  Element e;
  e.d = d;
  for (auto& [w, poly] : split_by_weight(a)) {
    auto bit = dd.blocks.find(w);
    if (bit == dd.blocks.end()) {
      fail(ErrorCode::Internal, "projection input outside the block table");
    }
    Block& blk = bit->second;
    if (!blk.s_trivial) {
      fail(ErrorCode::Internal,
           "projection input is not invariant (nontrivial weight component)");
    }
    auto v = coords_of(poly, blk.monos.index);
    const std::size_t n = v.size();
    const std::size_t ninv = blk.inv_piv.size();
    std::vector<Scalar> c(ninv);
    for (std::size_t j = 0; j < ninv; ++j) c[j] = v[blk.inv_piv[j]];
    std::vector<Scalar> recon(n, Scalar(0));
    for (std::size_t j = 0; j < ninv; ++j) {
      if (c[j].is_zero()) continue;
      for (std::size_t col = 0; col < n; ++col) {
        recon[col] += c[j] * blk.inv_red.at(j, col);
      }
    }
    for (std::size_t col = 0; col < n; ++col) {
      if (!(recon[col] - v[col]).is_zero()) {
        fail(ErrorCode::Internal,
             "projection input is not invariant (outside the fixed space)");
      }
    }
    // Reduce modulo M cap W^inv; the survivors sit at the quotient positions.
    for (std::size_t r = 0; r < blk.m_piv.size(); ++r) {
      const Scalar lead = c[blk.m_piv[r]];
      if (lead.is_zero()) continue;
      for (std::size_t j = 0; j < c.size(); ++j) {
        c[j] -= lead * blk.m_red.at(r, j);
      }
    }
    std::vector<Scalar> out(blk.b_pos.size(), Scalar(0));
    bool nz = false;
    for (std::size_t k = 0; k < blk.b_pos.size(); ++k) {
      out[k] = c[blk.b_pos[k]];
      nz = nz || !out[k].is_zero();
    }
    if (nz) e.coords[w] = std::move(out);
  }
  return e;
}

WeylElement BAlgebra::lift(const Element& e) {
  DegreeData& dd = data(e.d);
  SparsePoly acc(quant_->frame());
  for (const auto& [w, v] : e.coords) {
    const Block& blk = dd.blocks.at(w);
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (v[k].is_zero()) continue;
      const std::size_t j = blk.b_pos[k];
      for (std::size_t col = 0; col < blk.monos.monos.size(); ++col) {
        const Scalar& coeff = blk.inv_red.at(j, col);
        if (!coeff.is_zero()) acc.add_term(blk.monos.monos[col], v[k] * coeff);
      }
    }
  }
  return WeylElement::from_normal_symbol(std::move(acc));
}

BAlgebra::Element BAlgebra::embed(const Element& e, int d) {
  if (d == e.d) return e;
  if (d < e.d) {
    fail(ErrorCode::DegreeTooSmall, "cannot embed into a lower filtration level");
  }
  return reduce(lift(e), d);
}

BAlgebra::Element BAlgebra::mul(const Element& a, const Element& b) {
  const int d = a.d + b.d;
  return reduce(weyl_mul(lift(a), lift(b)), d);
}

BAlgebra::Element BAlgebra::add(const Element& a, const Element& b) {
  if (a.d == b.d) {
    Element out = a;
    for (const auto& [w, v] : b.coords) {
      auto it = out.coords.find(w);
      if (it == out.coords.end()) {
        out.coords[w] = v;
      } else {
        for (std::size_t k = 0; k < v.size(); ++k) it->second[k] += v[k];
      }
    }
    return out;
  }
  const int d = std::max(a.d, b.d);
  return reduce(lift(a) + lift(b), d);
}

BAlgebra::Element BAlgebra::scaled(const Element& a, const Scalar& c) {
  Element out = a;
  for (auto& [w, v] : out.coords) {
    for (auto& x : v) x *= c;
  }
  return out;
}

BAlgebra::Element BAlgebra::one(int d) {
  return reduce(WeylElement::constant(quant_->frame(), Scalar(1)), d);
}

BAlgebra::Element BAlgebra::tau(const Element& e) {
  return reduce(quant_->tau(lift(e)), e.d);
}

BAlgebra::Element BAlgebra::theta(const Element& e) {
  return reduce(quant_->theta(lift(e)), e.d);
}

BAlgebra::Element BAlgebra::lie_image(std::size_t g_index) {
  return reduce(quant_->xi_g(g_index), 1);
}

std::vector<Scalar> BAlgebra::flat(const Element& e) {
  DegreeData& dd = data(e.d);
  std::vector<Scalar> out(dd.b_index.size(), Scalar(0));
  for (const auto& [w, v] : e.coords) {
    auto it = dd.b_offset.find(w);
    if (it == dd.b_offset.end()) {
      bool nz = false;
      for (const auto& c : v) nz = nz || !c.is_zero();
      if (nz) fail(ErrorCode::Internal, "element weight outside the basis");
      continue;
    }
    for (std::size_t k = 0; k < v.size(); ++k) out[it->second + k] = v[k];
  }
  return out;
}

void BAlgebra::build_trace(DegreeData& dd, int d) {
  if (dd.trace_ready) return;
  const std::size_t dim = dd.b_index.size();
  const auto& model = quant_->model();
  ExactMatrix u(0, dim);
  for (const auto& [w, k] : dd.b_index) {
    Element e;
    e.d = d;
    auto& v = e.coords[w];
    v.assign(dd.blocks.at(w).b_pos.size(), Scalar(0));
    v[k] = Scalar(1);
    WeylElement rep = lift(e);
    for (std::size_t y = 0; y < model.g_basis.size(); ++y) {
      WeylElement c = commutator(quant_->xi_g(y), rep);
      auto fr = flat(reduce(c, d));
      bool nz = false;
      for (const auto& x : fr) nz = nz || !x.is_zero();
      if (nz) u.append_row(fr);
    }
    if (has_g_refl_) {
      WeylElement diff = rep - subst_frame(g_refl_frame_, rep);
      auto fr = flat(reduce(diff, d));
      bool nz = false;
      for (const auto& x : fr) nz = nz || !x.is_zero();
      if (nz) u.append_row(fr);
    }
  }
  auto upiv = u.rref();
  const std::size_t urank = upiv.size();
  if (dim == 0 || urank + 1 != dim) {
    std::ostringstream os;
    os << "trace split failed at degree " << d << ": action-image span has "
       << "dimension " << urank << " inside " << dim;
    fail(ErrorCode::SplitFailure, os.str());
  }
  auto onef = flat(one(d));
  // Columns: the compact action-image basis, then the identity.  The rank
  // test certifies the direct sum (the identity escapes the image span).
  ExactMatrix cols(dim, urank + 1);
  for (std::size_t r = 0; r < urank; ++r) {
    for (std::size_t c = 0; c < dim; ++c) cols.at(c, r) = u.at(r, c);
  }
  for (std::size_t c = 0; c < dim; ++c) cols.at(c, urank) = onef[c];
  if (cols.rank() != urank + 1) {
    std::ostringstream os;
    os << "trace split failed at degree " << d
       << ": identity lies in the action-image span";
    fail(ErrorCode::SplitFailure, os.str());
  }
  dd.trace_cols = std::move(cols);
  dd.trace_rank = urank;
  dd.trace_ready = true;
}

Scalar BAlgebra::trace(const Element& e) {
  DegreeData& dd = data(e.d);
  build_trace(dd, e.d);
  auto x = solve_columns(dd.trace_cols, flat(e), ErrorCode::SplitFailure,
                         "trace: element outside the split span");
  return x.back();
}

ExactMatrix BAlgebra::gram(int d) {
  auto bs = basis(d);
  std::vector<Element> thetas;
  thetas.reserve(bs.size());
  for (const auto& b : bs) thetas.push_back(theta(b));
  ExactMatrix g(bs.size(), bs.size());
  for (std::size_t i = 0; i < bs.size(); ++i) {
    for (std::size_t j = 0; j < bs.size(); ++j) {
      g.at(i, j) = trace(mul(bs[i], thetas[j]));
    }
  }
  return g;
}

Scalar BAlgebra::casimir_scalar() {
  const auto& model = quant_->model();
  const std::size_t ng = model.g_basis.size();
  auto casimir_for = [&](const ExactMatrix& p) {
    // kappa'_{ij} = trace form in the transformed basis y'_k = sum p[k][l] y_l.
    ExactMatrix kappa(ng, ng);
    std::vector<ExactMatrix> mats;
    for (std::size_t k = 0; k < ng; ++k) {
      ExactMatrix m(model.g_basis[0].mat.rows(), model.g_basis[0].mat.cols());
      for (std::size_t l = 0; l < ng; ++l) {
        if (p.at(k, l).is_zero()) continue;
        m = m + model.g_basis[l].mat.scaled(p.at(k, l));
      }
      mats.push_back(std::move(m));
    }
    for (std::size_t i = 0; i < ng; ++i) {
      for (std::size_t j = 0; j < ng; ++j) {
        Scalar tr(0);
        const auto& a = mats[i];
        const auto& b = mats[j];
        for (std::size_t r = 0; r < a.rows(); ++r) {
          for (std::size_t c = 0; c < a.cols(); ++c) {
            tr += a.at(r, c) * b.at(c, r);
          }
        }
        kappa.at(i, j) = tr;
      }
    }
    ExactMatrix kinv = kappa.inverse();
    std::vector<WeylElement> xi;
    for (std::size_t k = 0; k < ng; ++k) {
      WeylElement acc = WeylElement::constant(quant_->frame(), Scalar(0));
      for (std::size_t l = 0; l < ng; ++l) {
        if (p.at(k, l).is_zero()) continue;
        acc += quant_->xi_g(l).scaled(p.at(k, l));
      }
      xi.push_back(std::move(acc));
    }
    WeylElement cas = WeylElement::constant(quant_->frame(), Scalar(0));
    for (std::size_t i = 0; i < ng; ++i) {
      for (std::size_t j = 0; j < ng; ++j) {
        if (kinv.at(i, j).is_zero()) continue;
        cas += weyl_mul(xi[i], xi[j]).scaled(kinv.at(i, j));
      }
    }
    return cas;
  };

  WeylElement cas = casimir_for(ExactMatrix::identity(ng));
  ExactMatrix p = ExactMatrix::identity(ng);
  for (std::size_t k = 0; k + 1 < ng; ++k) p.at(k, k + 1) = Scalar(1);
  WeylElement cas2 = casimir_for(p);
  if (!(cas - cas2).is_zero()) {
    fail(ErrorCode::NotScalar,
         "Casimir element depends on the generator basis");
  }

  auto ef = flat(reduce(cas, 2));
  auto onef = flat(one(2));
  Scalar c(0);
  bool found = false;
  for (std::size_t i = 0; i < onef.size(); ++i) {
    if (!onef[i].is_zero()) {
      c = ef[i] / onef[i];
      found = true;
      break;
    }
  }
  if (!found) fail(ErrorCode::NotScalar, "identity image vanishes in degree 2");
  for (std::size_t i = 0; i < onef.size(); ++i) {
    if (!(ef[i] - c * onef[i]).is_zero()) {
      fail(ErrorCode::NotScalar,
           "Casimir image is not a multiple of the identity");
    }
  }
  return c;
}

std::vector<std::size_t> BAlgebra::enveloping_dims(int pmax) {
  const auto& model = quant_->model();
  const std::size_t ng = model.g_basis.size();
  // Ordered products xi_{i1} ... xi_{ik}, i1 <= ... <= ik, of length <= pmax.
  std::vector<std::vector<std::pair<WeylElement, std::size_t>>> words(pmax + 1);
  words[0].emplace_back(WeylElement::constant(quant_->frame(), Scalar(1)), 0);
  for (int len = 1; len <= pmax; ++len) {
    for (const auto& [w, last] : words[len - 1]) {
      for (std::size_t j = last; j < ng; ++j) {
        words[len].emplace_back(weyl_mul(w, quant_->xi_g(j)), j);
      }
    }
  }
  std::vector<std::size_t> dims;
  for (int p = 0; p <= pmax; ++p) {
    ExactMatrix rows(0, dim_b(p));
    for (int len = 0; len <= p; ++len) {
      for (const auto& [w, last] : words[len]) {
        rows.append_row(flat(reduce(w, p)));
      }
    }
    dims.push_back(rows.rank());
  }
  return dims;
}

std::size_t BAlgebra::mpart_dim_at(int d, int slack) {
  return build_degree(d, slack).row.dim_mpart;
}

std::vector<BRow> verify_quotient(BAlgebra& alg, int dmax) {
  return alg.window(dmax);
}

}  // namespace orbitq::dixmier_b
