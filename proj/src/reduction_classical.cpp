#include "orbitq/reduction_classical.hpp"

#include <algorithm>
#include <functional>

namespace orbitq {
namespace reduction_classical {

using kp_model::LieElement;
using poly_symplectic::VariableRegistry;

namespace {

std::vector<int> add_w(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> w(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) w[i] = a[i] + b[i];
  return w;
}

std::vector<int> sub_w(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> w(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) w[i] = a[i] - b[i];
  return w;
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    m[i] = static_cast<std::uint8_t>(a[i] + b[i]);
  return m;
}

// f * (monomial) without building a polynomial for the monomial.
SparsePoly shift_poly(const SparsePoly& f, const Monomial& m) {
  SparsePoly out(f.registry());
  for (const auto& [mono, c] : f.terms()) out.add_term(mono_mul(mono, m), c);
  return out;
}

SparsePoly row_to_poly(const RegistryPtr& reg, const WeightBlock& blk,
                       const std::vector<Scalar>& row) {
  SparsePoly f(reg);
  for (std::size_t i = 0; i < row.size(); ++i)
    if (!row[i].is_zero()) f.add_term(blk.monos[i], row[i]);
  return f;
}

bool in_row_span(const ExactMatrix& red, const std::vector<std::size_t>& piv,
                 std::vector<Scalar> row) {
  for (std::size_t r = 0; r < piv.size(); ++r) {
    const Scalar f = row[piv[r]];
    if (f.is_zero()) continue;
    for (std::size_t c = 0; c < row.size(); ++c)
      row[c] -= f * red.at(r, c);
  }
  for (const Scalar& v : row)
    if (!v.is_zero()) return false;
  return true;
}

}  // namespace

BlockMap weight_blocks(const VariableRegistry& reg, int degree) {
  BlockMap out;
  for (Monomial& m : poly_symplectic::monomial_basis(reg, degree)) {
    WeightBlock& blk = out[reg.monomial_weight(m)];
    blk.index.emplace(m, blk.monos.size());
    blk.monos.push_back(std::move(m));
  }
  return out;
}

mpz_class binomial(unsigned long n, unsigned long k) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

Reduction::Reduction(const KPModel& model)
    : model_(&model), reg_(model.registry) {}

bool Reduction::s_zero(const std::vector<int>& w) const {
  for (std::size_t i = model_->s_weight_begin; i < w.size(); ++i)
    if (w[i] != 0) return false;
  return true;
}

const BlockMap& Reduction::blocks(int degree) {
  auto it = blocks_.find(degree);
  if (it != blocks_.end()) return it->second;
  BlockMap bm;
  if (degree >= 0) bm = weight_blocks(*reg_, degree);
  return blocks_.emplace(degree, std::move(bm)).first->second;
}

const ExactMatrix& Reduction::inv_rows(int degree, const std::vector<int>& w) {
  Key key{degree, w};
  auto it = inv_rows_.find(key);
  if (it != inv_rows_.end()) return it->second;
  const BlockMap& bm = blocks(degree);
  auto bit = bm.find(w);
  if (bit == bm.end())
    return inv_rows_.emplace(std::move(key), ExactMatrix(0, 0)).first->second;
  const WeightBlock& blk = bit->second;
  const std::size_t n = blk.monos.size();
  ExactMatrix stack(0, n);
  auto mono_poly = [&](const Monomial& m) {
    SparsePoly f(reg_);
    f.add_term(m, Scalar(1));
    return f;
  };
  for (const LieElement& el : model_->s_basis) {
    std::vector<int> tw = add_w(w, el.weight);
    auto tit = bm.find(tw);
    std::vector<std::vector<Scalar>> images(n);
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
      SparsePoly im = kp_model::apply_derivation(el, mono_poly(blk.monos[i]));
      if (im.is_zero()) continue;
      if (tit == bm.end())
        throw Error(ErrorCode::Internal, "derivation image left its block");
      images[i] = poly_symplectic::coords_of(im, tit->second.index);
      any = true;
    }
    if (!any) continue;
    const std::size_t tn = tit->second.monos.size();
    for (std::size_t c = 0; c < tn; ++c) {
      std::vector<Scalar> constraint(n);
      bool nz = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (images[i].empty()) continue;
        constraint[i] = images[i][c];
        nz = nz || !constraint[i].is_zero();
      }
      if (nz) stack.append_row(constraint);
    }
  }
  for (const auto& ref : model_->reflections) {
    for (std::size_t i = 0; i < n; ++i) {
      SparsePoly im =
          kp_model::apply_substitution(ref.subst, mono_poly(blk.monos[i]));
      SparsePoly diff = mono_poly(blk.monos[i]) - im;
      if (diff.is_zero()) continue;
      stack.append_row(poly_symplectic::coords_of(diff, blk.index));
    }
  }
  ExactMatrix inv = stack.rows() == 0 ? ExactMatrix::identity(n)
                                      : exact_linalg::kernel_basis(stack);
  return inv_rows_.emplace(std::move(key), std::move(inv)).first->second;
}

ExactMatrix Reduction::ideal_row_matrix(int degree,
                                        const std::vector<int>& w) {
  const BlockMap& bm = blocks(degree);
  auto bit = bm.find(w);
  if (bit == bm.end()) return ExactMatrix(0, 0);
  const WeightBlock& blk = bit->second;
  ExactMatrix rows(0, blk.monos.size());
  const BlockMap& src = blocks(degree - 2);
  for (const LieElement& el : model_->s_basis) {
    auto sit = src.find(sub_w(w, el.weight));
    if (sit == src.end()) continue;
    for (const Monomial& m : sit->second.monos) {
      SparsePoly f = shift_poly(el.moment, m);
      if (f.is_zero()) continue;
      rows.append_row(poly_symplectic::coords_of(f, blk.index));
    }
  }
  return rows;
}

std::size_t Reduction::ideal_rank(int degree, const std::vector<int>& w) {
  Key key{degree, w};
  auto it = ideal_rank_.find(key);
  if (it != ideal_rank_.end()) return it->second;
  ExactMatrix rows = ideal_row_matrix(degree, w);
  std::size_t rank = rows.rows() == 0 ? 0 : rows.rank();
  if (s_zero(w)) ideal_rows_.emplace(key, std::move(rows));
  ideal_rank_.emplace(std::move(key), rank);
  return rank;
}

const ExactMatrix& Reduction::ideal_rows(int degree,
                                         const std::vector<int>& w) {
  Key key{degree, w};
  ideal_rank(degree, w);
  auto it = ideal_rows_.find(key);
  if (it == ideal_rows_.end())
    throw Error(ErrorCode::Internal, "ideal rows for a non-invariant weight");
  return it->second;
}

const ExactMatrix& Reduction::ideal_inv_rows(int degree,
                                             const std::vector<int>& w) {
  Key key{degree, w};
  auto it = ideal_inv_rows_.find(key);
  if (it != ideal_inv_rows_.end()) return it->second;
  const ExactMatrix& ideal = ideal_rows(degree, w);
  const ExactMatrix& inv = inv_rows(degree, w);
  ExactMatrix out(0, ideal.cols());
  if (ideal.rows() != 0 && inv.rows() != 0)
    out = exact_linalg::intersect_subspaces(ideal, inv);
  return ideal_inv_rows_.emplace(std::move(key), std::move(out)).first->second;
}

std::size_t Reduction::ideal_dim(int degree) {
  std::size_t total = 0;
  for (const auto& [w, blk] : blocks(degree)) total += ideal_rank(degree, w);
  return total;
}

std::size_t Reduction::koszul_rank(int t, int n) {
  auto key = std::make_pair(t, n);
  auto it = koszul_rank_.find(key);
  if (it != koszul_rank_.end()) return it->second;
  const std::size_t m = model_->s_basis.size();
  std::size_t rank = 0;
  if (t == 1) {
    rank = ideal_dim(n);
  } else if (static_cast<std::size_t>(t) <= m && n - 2 * t >= 0) {
    // Subsets as bit masks; generator l contributes weight of sigma_l.
    std::vector<std::uint64_t> masks;
    {
      std::vector<std::size_t> idx(static_cast<std::size_t>(t));
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      while (true) {
        std::uint64_t mask = 0;
        for (std::size_t v : idx) mask |= (std::uint64_t{1} << v);
        masks.push_back(mask);
        int pos = t - 1;
        while (pos >= 0 &&
               idx[static_cast<std::size_t>(pos)] ==
                   m - static_cast<std::size_t>(t - pos))
          --pos;
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
        for (std::size_t i = static_cast<std::size_t>(pos) + 1;
             i < idx.size(); ++i)
          idx[i] = idx[i - 1] + 1;
      }
    }
    auto mask_weight = [&](std::uint64_t mask) {
      std::vector<int> w(reg_->weight_dim(), 0);
      for (std::size_t l = 0; l < m; ++l)
        if (mask & (std::uint64_t{1} << l))
          w = add_w(w, model_->s_basis[l].weight);
      return w;
    };
    const BlockMap& dom = blocks(n - 2 * t);
    const BlockMap& tgt = blocks(n - 2 * t + 2);
    struct DomEntry {
      std::uint64_t mask;
      const Monomial* mono;
    };
    std::map<std::vector<int>, std::vector<DomEntry>> by_weight;
    std::map<std::uint64_t, std::vector<int>> mask_w;
    for (std::uint64_t mask : masks) mask_w[mask] = mask_weight(mask);
    for (std::uint64_t mask : masks)
      for (const auto& [bw, blk] : dom)
        for (const Monomial& mono : blk.monos)
          by_weight[add_w(mask_w[mask], bw)].push_back({mask, &mono});
    // Target subsets of size t-1 and their weights.
    std::map<std::uint64_t, std::vector<int>> sub_w_cache;
    for (const auto& [w, entries] : by_weight) {
      // Column index over (target subset, target monomial).
      std::map<std::pair<std::uint64_t, const Monomial*>, std::size_t> col;
      std::map<std::uint64_t, const WeightBlock*> tgt_blk;
      auto target_cols = [&](std::uint64_t sub) -> const WeightBlock* {
        auto tb = tgt_blk.find(sub);
        if (tb != tgt_blk.end()) return tb->second;
        auto wit = sub_w_cache.find(sub);
        if (wit == sub_w_cache.end())
          wit = sub_w_cache.emplace(sub, mask_weight(sub)).first;
        auto bit = tgt.find(sub_w(w, wit->second));
        const WeightBlock* blk = bit == tgt.end() ? nullptr : &bit->second;
        if (blk)
          for (const Monomial& mono : blk->monos)
            col.emplace(std::make_pair(sub, &mono), col.size());
        tgt_blk.emplace(sub, blk);
        return blk;
      };
      // Pre-register all columns reachable from this weight.
      for (const DomEntry& de : entries)
        for (std::size_t l = 0; l < m; ++l)
          if (de.mask & (std::uint64_t{1} << l))
            target_cols(de.mask & ~(std::uint64_t{1} << l));
      if (col.empty()) continue;
      ExactMatrix mat(entries.size(), col.size());
      for (std::size_t r = 0; r < entries.size(); ++r) {
        const DomEntry& de = entries[r];
        int pos = 0;
        for (std::size_t l = 0; l < m; ++l) {
          if (!(de.mask & (std::uint64_t{1} << l))) continue;
          ++pos;  // 1-based position of l inside the sorted subset
          const std::uint64_t sub = de.mask & ~(std::uint64_t{1} << l);
          const WeightBlock* blk = target_cols(sub);
          SparsePoly f = shift_poly(model_->s_basis[l].moment, *de.mono);
          if (f.is_zero()) continue;
          if (!blk)
            throw Error(ErrorCode::Internal, "Koszul image left its block");
          const Scalar sgn = (pos % 2 == 1) ? Scalar(2) : Scalar(-2);
          for (const auto& [mono, c] : f.terms()) {
            auto mit = blk->index.find(mono);
            if (mit == blk->index.end())
              throw Error(ErrorCode::Internal, "Koszul image left its block");
            mat.at(r, col.at({sub, &blk->monos[mit->second]})) += c * sgn;
          }
        }
      }
      rank += mat.rank();
    }
  }
  koszul_rank_.emplace(key, rank);
  return rank;
}

std::size_t Reduction::gamma_image_dim(int j) {
  const int d = 2 * j;
  const std::size_t ng = model_->g_basis.size();
  // Degree-j products of the level-0 momenta, grouped by weight.
  std::map<std::vector<int>, std::vector<SparsePoly>> products;
  std::vector<std::size_t> pick;
  auto emit = [&]() {
    SparsePoly f = SparsePoly::constant(reg_, Scalar(1));
    for (std::size_t k : pick) f = f * model_->g_basis[k].moment;
    if (f.is_zero()) return;
    products[reg_->monomial_weight(f.terms().begin()->first)].push_back(
        std::move(f));
  };
  std::function<void(std::size_t)> rec = [&](std::size_t first) {
    if (pick.size() == static_cast<std::size_t>(j)) {
      emit();
      return;
    }
    for (std::size_t k = first; k < ng; ++k) {
      pick.push_back(k);
      rec(k);
      pick.pop_back();
    }
  };
  rec(0);
  std::size_t image = 0;
  for (const auto& [w, polys] : products) {
    const WeightBlock& blk = blocks(d).at(w);
    const ExactMatrix& iinv = ideal_inv_rows(d, w);
    ExactMatrix stack(0, blk.monos.size());
    for (std::size_t r = 0; r < iinv.rows(); ++r) stack.append_row(iinv.row(r));
    const std::size_t base = stack.rows() == 0 ? 0 : stack.rank();
    for (const SparsePoly& f : polys)
      stack.append_row(poly_symplectic::coords_of(f, blk.index));
    image += stack.rank() - base;
  }
  return image;
}

HilbertRow Reduction::hilbert_row(int j) {
  HilbertRow r;
  r.j = j;
  const int d = 2 * j;
  r.dim_p = binomial(reg_->size() + static_cast<unsigned long>(d) - 1,
                     static_cast<unsigned long>(d));
  for (const auto& [w, blk] : blocks(d)) {
    r.dim_ideal += ideal_rank(d, w);
    if (!s_zero(w)) continue;
    r.dim_inv += inv_rows(d, w).rows();
    r.dim_ideal_inv += ideal_inv_rows(d, w).rows();
  }
  r.dim_quotient = r.dim_inv - r.dim_ideal_inv;
  r.gamma_image = gamma_image_dim(j);
  return r;
}

KoszulRow Reduction::koszul_row(int n) {
  KoszulRow r;
  r.n = n;
  const unsigned long N = reg_->size();
  auto poly_dim = [&](int deg) -> mpz_class {
    if (deg < 0) return 0;
    return binomial(N + static_cast<unsigned long>(deg) - 1,
                    static_cast<unsigned long>(deg));
  };
  r.dim_p = poly_dim(n);
  const std::size_t m = model_->s_basis.size();
  const std::size_t r1 = koszul_rank(1, n);
  const std::size_t r2 = koszul_rank(2, n);
  const std::size_t r3 = koszul_rank(3, n);
  mpz_class quot = r.dim_p - static_cast<unsigned long>(r1);
  mpz_class h1 = poly_dim(n - 2) * static_cast<unsigned long>(m) -
                 static_cast<unsigned long>(r1) -
                 static_cast<unsigned long>(r2);
  mpz_class h2 = poly_dim(n - 4) * binomial(m, 2) -
                 static_cast<unsigned long>(r2) -
                 static_cast<unsigned long>(r3);
  if (quot < 0 || h1 < 0 || h2 < 0)
    throw Error(ErrorCode::Internal, "negative homology dimension");
  r.dim_quotient = quot.get_ui();
  r.dim_h1 = h1.get_ui();
  r.dim_h2 = h2.get_ui();
  mpz_class expect = 0;
  for (int k = 0; 2 * k <= n; ++k) {
    mpz_class term = binomial(m, static_cast<unsigned long>(k)) *
                     poly_dim(n - 2 * k);
    if (k % 2 == 0)
      expect += term;
    else
      expect -= term;
  }
  r.expected_quotient = expect;
  return r;
}

bool Reduction::poisson_closed(int j) {
  const int d = 2 * j;
  // Invariant quadratics as polynomials.
  std::vector<std::pair<std::vector<int>, SparsePoly>> quads;
  for (const auto& [w, blk] : blocks(2)) {
    if (!s_zero(w)) continue;
    const ExactMatrix& inv = inv_rows(2, w);
    for (std::size_t r = 0; r < inv.rows(); ++r)
      quads.emplace_back(w, row_to_poly(reg_, blk, inv.row(r)));
  }
  // Reduced forms of the invariant ideal blocks at degree d, for membership.
  std::map<std::vector<int>, std::pair<ExactMatrix, std::vector<std::size_t>>>
      reduced;
  auto reduced_at = [&](const std::vector<int>& w)
      -> const std::pair<ExactMatrix, std::vector<std::size_t>>* {
    auto it = reduced.find(w);
    if (it == reduced.end()) {
      auto bit = blocks(d).find(w);
      if (bit == blocks(d).end()) return nullptr;
      ExactMatrix red = ideal_inv_rows(d, w);
      auto piv = red.rref();
      it = reduced.emplace(w, std::make_pair(std::move(red), std::move(piv)))
               .first;
    }
    return &it->second;
  };
  for (const auto& [w, blk] : blocks(d)) {
    if (!s_zero(w)) continue;
    const ExactMatrix& iinv = ideal_inv_rows(d, w);
    for (std::size_t r = 0; r < iinv.rows(); ++r) {
      SparsePoly g = row_to_poly(reg_, blk, iinv.row(r));
      for (const auto& [qw, f] : quads) {
        SparsePoly br = poly_symplectic::poisson_bracket(f, g, model_->omega);
        if (br.is_zero()) continue;
        std::vector<int> tw = add_w(qw, w);
        auto* red = reduced_at(tw);
        if (red == nullptr) return false;
        auto bit = blocks(d).find(tw);
        auto coords = poly_symplectic::coords_of(br, bit->second.index);
        if (!in_row_span(red->first, red->second, std::move(coords)))
          return false;
      }
    }
  }
  return true;
}

std::vector<HilbertRow> reduced_hilbert(Reduction& red, int jmax) {
  std::vector<HilbertRow> rows;
  for (int j = 0; j <= jmax; ++j) rows.push_back(red.hilbert_row(j));
  return rows;
}

std::vector<KoszulRow> koszul_window(Reduction& red, int nmax) {
  std::vector<KoszulRow> rows;
  for (int n = 0; n <= nmax; ++n) rows.push_back(red.koszul_row(n));
  return rows;
}

}  // namespace reduction_classical
}  // namespace orbitq
