#include "orbitq/poly_symplectic.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>

namespace orbitq {
namespace poly_symplectic {

int monomial_degree(const Monomial& m) {
  int d = 0;
  for (auto e : m) d += e;
  return d;
}

bool MonomialOrder::operator()(const Monomial& a, const Monomial& b) const {
  const int da = monomial_degree(a), db = monomial_degree(b);
  if (da != db) return da < db;
  return a < b;
}

namespace {
std::uint64_t next_registry_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}
}  // namespace

VariableRegistry::VariableRegistry(std::vector<VarInfo> vars)
    : vars_(std::move(vars)), id_(next_registry_id()) {
  for (const auto& v : vars_)
    if (v.weight.size() > weight_dim_) weight_dim_ = v.weight.size();
  for (auto& v : vars_) v.weight.resize(weight_dim_, 0);
}

std::vector<int> VariableRegistry::monomial_weight(const Monomial& m) const {
  std::vector<int> w(weight_dim_, 0);
  for (std::size_t k = 0; k < m.size() && k < vars_.size(); ++k) {
    if (!m[k]) continue;
    for (std::size_t j = 0; j < weight_dim_; ++j)
      w[j] += m[k] * vars_[k].weight[j];
  }
  return w;
}

SparsePoly SparsePoly::constant(RegistryPtr reg, const Scalar& c) {
  SparsePoly p(std::move(reg));
  p.add_term(Monomial(p.reg_->size(), 0), c);
  return p;
}

SparsePoly SparsePoly::variable(RegistryPtr reg, std::size_t index) {
  SparsePoly p(std::move(reg));
  Monomial m(p.reg_->size(), 0);
  m.at(index) = 1;
  p.add_term(m, Scalar(1));
  return p;
}

int SparsePoly::degree() const {
  if (terms_.empty()) return -1;
  return monomial_degree(terms_.rbegin()->first);
}

bool SparsePoly::is_homogeneous() const {
  if (terms_.empty()) return true;
  return monomial_degree(terms_.begin()->first) ==
         monomial_degree(terms_.rbegin()->first);
}

void SparsePoly::add_term(const Monomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

SparsePoly& SparsePoly::operator+=(const SparsePoly& o) {
  if (!o.terms_.empty()) {
    require_same_registry(*this, o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
  }
  return *this;
}

SparsePoly& SparsePoly::operator-=(const SparsePoly& o) {
  if (!o.terms_.empty()) {
    require_same_registry(*this, o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
  }
  return *this;
}

SparsePoly SparsePoly::operator-() const {
  SparsePoly out(reg_);
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

SparsePoly SparsePoly::operator+(const SparsePoly& o) const {
  SparsePoly out = *this;
  return out += o;
}

SparsePoly SparsePoly::operator-(const SparsePoly& o) const {
  SparsePoly out = *this;
  return out -= o;
}

SparsePoly SparsePoly::operator*(const SparsePoly& o) const {
  if (terms_.empty()) return *this;
  if (o.terms_.empty()) return o;
  require_same_registry(*this, o);
  SparsePoly out(reg_);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      Monomial m = ma;
      for (std::size_t k = 0; k < m.size(); ++k) m[k] += mb[k];
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

SparsePoly SparsePoly::scaled(const Scalar& c) const {
  SparsePoly out(reg_);
  if (c.is_zero()) return out;
  for (const auto& [m, v] : terms_) out.terms_.emplace(m, v * c);
  return out;
}

bool operator==(const SparsePoly& a, const SparsePoly& b) {
  return a.terms_ == b.terms_;
}

SparsePoly SparsePoly::derivative(std::size_t var) const {
  SparsePoly out(reg_);
  for (const auto& [m, c] : terms_) {
    if (!m[var]) continue;
    Monomial d = m;
    --d[var];
    out.add_term(d, c * Scalar(m[var]));
  }
  return out;
}

SparsePoly SparsePoly::linear_substitute(const ExactMatrix& images,
                                         const RegistryPtr& target) const {
  SparsePoly out(target);
  SparsePoly one = SparsePoly::constant(target, Scalar(1));
  for (const auto& [m, c] : terms_) {
    SparsePoly term = one.scaled(c);
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (!m[k]) continue;
      SparsePoly img(target);
      for (std::size_t j = 0; j < images.cols(); ++j) {
        if (images.at(k, j).is_zero()) continue;
        Monomial mv(target->size(), 0);
        mv[j] = 1;
        img.add_term(mv, images.at(k, j));
      }
      for (int e = 0; e < m[k]; ++e) term = term * img;
    }
    out += term;
  }
  return out;
}

SparsePoly SparsePoly::conj_coefficients() const {
  SparsePoly out(reg_);
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, c.conj());
  return out;
}

std::string SparsePoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")";
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (!m[k]) continue;
      os << "*" << reg_->name(k);
      if (m[k] > 1) os << "^" << int(m[k]);
    }
  }
  return os.str();
}

void require_same_registry(const SparsePoly& a, const SparsePoly& b) {
  if (!a.registry() || !b.registry() ||
      a.registry()->id() != b.registry()->id())
    throw Error(ErrorCode::RegistryMismatch,
                "operands belong to different variable registries");
}

SparsePoly poisson_bracket(const SparsePoly& f, const SparsePoly& g,
                           const OmegaData& omega) {
  require_same_registry(f, g);
  if (!f.registry() || f.registry()->id() != omega.registry->id())
    throw Error(ErrorCode::RegistryMismatch,
                "bracket operands do not match the pairing registry");
  SparsePoly out(omega.registry);
  const std::size_t n = omega.registry->size();
  std::vector<SparsePoly> df(n, SparsePoly(omega.registry));
  std::vector<SparsePoly> dg(n, SparsePoly(omega.registry));
  std::vector<bool> have_df(n, false), have_dg(n, false);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const Scalar& pab = omega.poisson.at(a, b);
      if (pab.is_zero()) continue;
      if (!have_df[a]) {
        df[a] = f.derivative(a);
        have_df[a] = true;
      }
      if (df[a].is_zero()) break;
      if (!have_dg[b]) {
        dg[b] = g.derivative(b);
        have_dg[b] = true;
      }
      if (dg[b].is_zero()) continue;
      out += (df[a] * dg[b]).scaled(pab);
    }
  }
  return out;
}

namespace {
void enumerate_rec(std::size_t var, int remaining, Monomial& m,
                   std::vector<Monomial>& out) {
  if (var + 1 == m.size()) {
    m[var] = static_cast<std::uint8_t>(remaining);
    out.push_back(m);
    m[var] = 0;
    return;
  }
  for (int e = 0; e <= remaining; ++e) {
    m[var] = static_cast<std::uint8_t>(e);
    enumerate_rec(var + 1, remaining - e, m, out);
  }
  m[var] = 0;
}
}  // namespace

std::vector<Monomial> monomial_basis(const VariableRegistry& reg, int degree) {
  std::vector<Monomial> out;
  if (degree < 0) return out;
  if (reg.size() == 0) {
    if (degree == 0) out.push_back(Monomial{});
    return out;
  }
  Monomial m(reg.size(), 0);
  enumerate_rec(0, degree, m, out);
  std::sort(out.begin(), out.end(), MonomialOrder{});
  return out;
}

std::vector<Scalar> coords_of(
    const SparsePoly& f,
    const std::map<Monomial, std::size_t, MonomialOrder>& index) {
  std::vector<Scalar> v(index.size());
  for (const auto& [m, c] : f.terms()) {
    auto it = index.find(m);
    if (it == index.end())
      throw Error(ErrorCode::Internal,
                  "polynomial has support outside the monomial list");
    v[it->second] = c;
  }
  return v;
}

}  // namespace poly_symplectic
}  // namespace orbitq
