#include "orbitq/exact_linalg.hpp"

#include <utility>

namespace orbitq {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::RegistryMismatch: return "RegistryMismatch";
    case ErrorCode::InvalidOrbit: return "InvalidOrbit";
    case ErrorCode::ModelInconsistency: return "ModelInconsistency";
    case ErrorCode::DegreeTooSmall: return "DegreeTooSmall";
    case ErrorCode::InvolutionInconsistency: return "InvolutionInconsistency";
    case ErrorCode::SplitFailure: return "SplitFailure";
    case ErrorCode::NotScalar: return "NotScalar";
    case ErrorCode::SingularCayley: return "SingularCayley";
    case ErrorCode::RankUnstable: return "RankUnstable";
    case ErrorCode::CacheError: return "CacheError";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

namespace exact_linalg {

Scalar Scalar::fraction(long num, long den) {
  mpq_class q(num, den);
  q.canonicalize();
  return Scalar(q);
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw Error(ErrorCode::Internal, "division by zero scalar");
  mpq_class n2 = norm2();
  return Scalar(re_ / n2, -im_ / n2);
}

Scalar& Scalar::operator+=(const Scalar& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  mpq_class re = re_ * o.re_ - im_ * o.im_;
  mpq_class im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inverse(); }

namespace {

std::string rational_str(const mpq_class& q) {
  return q.get_str();  // "p/q" lowest terms, "-p/q", integer when q == 1
}

}  // namespace

std::string Scalar::str() const {
  if (im_ == 0) return rational_str(re_);
  std::string imag;
  if (im_ == 1) {
    imag = "i";
  } else if (im_ == -1) {
    imag = "-i";
  } else {
    imag = rational_str(im_) + "i";
  }
  if (re_ == 0) return imag;
  if (im_ > 0) return rational_str(re_) + "+" + imag;
  return rational_str(re_) + imag;  // imag already carries the sign
}

ExactMatrix ExactMatrix::identity(std::size_t n) {
  ExactMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Scalar(1);
  return m;
}

bool ExactMatrix::is_zero() const {
  for (const auto& v : data_)
    if (!v.is_zero()) return false;
  return true;
}

ExactMatrix ExactMatrix::transpose() const {
  ExactMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
  return t;
}

ExactMatrix ExactMatrix::conj_transpose() const {
  ExactMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c).conj();
  return t;
}

ExactMatrix ExactMatrix::operator*(const ExactMatrix& o) const {
  if (cols_ != o.rows_)
    throw Error(ErrorCode::Internal, "matrix product shape mismatch");
  ExactMatrix out(rows_, o.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Scalar& v = at(r, k);
      if (v.is_zero()) continue;
      for (std::size_t c = 0; c < o.cols_; ++c) {
        if (o.at(k, c).is_zero()) continue;
        out.at(r, c) += v * o.at(k, c);
      }
    }
  return out;
}

ExactMatrix ExactMatrix::operator+(const ExactMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw Error(ErrorCode::Internal, "matrix sum shape mismatch");
  ExactMatrix out = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] += o.data_[k];
  return out;
}

ExactMatrix ExactMatrix::operator-(const ExactMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw Error(ErrorCode::Internal, "matrix difference shape mismatch");
  ExactMatrix out = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] -= o.data_[k];
  return out;
}

ExactMatrix ExactMatrix::scaled(const Scalar& c) const {
  ExactMatrix out = *this;
  for (auto& v : out.data_) v *= c;
  return out;
}

std::vector<std::size_t> ExactMatrix::rref() {
  std::vector<std::size_t> pivots;
  std::size_t lead = 0;
  for (std::size_t col = 0; col < cols_ && lead < rows_; ++col) {
    std::size_t piv = lead;
    while (piv < rows_ && at(piv, col).is_zero()) ++piv;
    if (piv == rows_) continue;
    if (piv != lead)
      for (std::size_t c = 0; c < cols_; ++c)
        std::swap(at(piv, c), at(lead, c));
    Scalar inv = at(lead, col).inverse();
    for (std::size_t c = col; c < cols_; ++c) at(lead, c) *= inv;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == lead || at(r, col).is_zero()) continue;
      Scalar f = at(r, col);
      for (std::size_t c = col; c < cols_; ++c) at(r, c) -= f * at(lead, c);
    }
    pivots.push_back(col);
    ++lead;
  }
  return pivots;
}

std::size_t ExactMatrix::rank() const {
  ExactMatrix copy = *this;
  return copy.rref().size();
}

ExactMatrix ExactMatrix::inverse() const {
  if (rows_ != cols_)
    throw Error(ErrorCode::Internal, "inverse of non-square matrix");
  ExactMatrix aug(rows_, 2 * cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) aug.at(r, c) = at(r, c);
    aug.at(r, cols_ + r) = Scalar(1);
  }
  auto pivots = aug.rref();
  if (pivots.size() != rows_ || pivots.back() >= cols_)
    throw Error(ErrorCode::Internal, "matrix not invertible");
  ExactMatrix inv(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) inv.at(r, c) = aug.at(r, cols_ + c);
  return inv;
}

void ExactMatrix::append_row(const std::vector<Scalar>& row) {
  if (cols_ == 0 && rows_ == 0) cols_ = row.size();
  if (row.size() != cols_)
    throw Error(ErrorCode::Internal, "append_row width mismatch");
  data_.insert(data_.end(), row.begin(), row.end());
  ++rows_;
}

std::vector<Scalar> ExactMatrix::row(std::size_t r) const {
  return std::vector<Scalar>(data_.begin() + r * cols_,
                             data_.begin() + (r + 1) * cols_);
}

ExactMatrix kernel_basis(const ExactMatrix& m) {
  ExactMatrix red = m;
  auto pivots = red.rref();
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  ExactMatrix out(0, m.cols());
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Scalar> v(m.cols());
    v[free] = Scalar(1);
    for (std::size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = -red.at(r, free);
    out.append_row(v);
  }
  return out;
}

ExactMatrix intersect_subspaces(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.cols() != b.cols())
    throw Error(ErrorCode::Internal, "intersect_subspaces ambient mismatch");
  const std::size_t n = a.cols();
  // Zassenhaus: rows [A | A] and [B | 0]; after elimination the rows whose
  // left half is zero have right halves spanning row(A) ∩ row(B).
  ExactMatrix block(0, 2 * n);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::vector<Scalar> row(2 * n);
    for (std::size_t c = 0; c < n; ++c) row[c] = row[n + c] = a.at(r, c);
    block.append_row(row);
  }
  for (std::size_t r = 0; r < b.rows(); ++r) {
    std::vector<Scalar> row(2 * n);
    for (std::size_t c = 0; c < n; ++c) row[c] = b.at(r, c);
    block.append_row(row);
  }
  block.rref();
  ExactMatrix out(0, n);
  for (std::size_t r = 0; r < block.rows(); ++r) {
    bool left_zero = true;
    for (std::size_t c = 0; c < n && left_zero; ++c)
      left_zero = block.at(r, c).is_zero();
    if (!left_zero) continue;
    std::vector<Scalar> right(n);
    bool nonzero = false;
    for (std::size_t c = 0; c < n; ++c) {
      right[c] = block.at(r, n + c);
      nonzero = nonzero || !right[c].is_zero();
    }
    if (nonzero) out.append_row(right);
  }
  return out;
}

namespace {

// One congruence step: returns the sign contribution and the reduced block.
void signature_recurse(ExactMatrix h, std::size_t& plus, std::size_t& minus) {
  const std::size_t n = h.rows();
  if (n == 0) return;
  // find a nonzero diagonal entry (real, since h is Hermitian)
  std::size_t d = n;
  for (std::size_t k = 0; k < n; ++k)
    if (!h.at(k, k).is_zero()) {
      d = k;
      break;
    }
  if (d < n) {
    const mpq_class pivot = h.at(d, d).re();
    if (pivot > 0)
      ++plus;
    else
      ++minus;
    ExactMatrix next(n - 1, n - 1);
    Scalar inv = h.at(d, d).inverse();
    std::size_t ri = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == d) continue;
      std::size_t ci = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == d) continue;
        next.at(ri, ci) = h.at(r, c) - h.at(r, d) * inv * h.at(d, c);
        ++ci;
      }
      ++ri;
    }
    signature_recurse(std::move(next), plus, minus);
    return;
  }
  // diagonal identically zero: find any nonzero off-diagonal entry; the pair
  // contributes one + and one - (hyperbolic plane), then reduce the rest.
  std::size_t pi = n, pj = n;
  for (std::size_t r = 0; r < n && pi == n; ++r)
    for (std::size_t c = r + 1; c < n; ++c)
      if (!h.at(r, c).is_zero()) {
        pi = r;
        pj = c;
        break;
      }
  if (pi == n) return;  // zero block: all null
  // With t = conj(h_ij), u = e_i + t e_j and v = e_i - t e_j satisfy
  // h(u,u) = 2|h_ij|^2, h(v,v) = -2|h_ij|^2, h(u,v) = 0.  Reduce the other
  // basis vectors h-orthogonally to the plane span{e_i, e_j} and recurse.
  ++plus;
  ++minus;
  ExactMatrix next(n - 2, n - 2);
  const Scalar hij = h.at(pi, pj);
  const Scalar hij_inv = hij.inverse();
  // For w outside {i,j}: subtract alpha e_i + beta e_j so that the result is
  // h-orthogonal to e_i and e_j:  alpha = h(e_j, w)/h(e_j, e_i), beta =
  // h(e_i, w)/h(e_i, e_j).
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < n; ++k)
    if (k != pi && k != pj) keep.push_back(k);
  for (std::size_t a = 0; a < keep.size(); ++a) {
    for (std::size_t b = 0; b < keep.size(); ++b) {
      const std::size_t r = keep[a], c = keep[b];
      // h(w_a', w_b') with w' = w - alpha e_i - beta e_j
      Scalar alpha_a = h.at(pj, r) * hij.conj().inverse();
      Scalar beta_a = h.at(pi, r) * hij_inv;
      Scalar alpha_b = h.at(pj, c) * hij.conj().inverse();
      Scalar beta_b = h.at(pi, c) * hij_inv;
      Scalar val = h.at(r, c);
      val -= alpha_a.conj() * h.at(pi, c);
      val -= beta_a.conj() * h.at(pj, c);
      val -= h.at(r, pi) * alpha_b;
      val -= h.at(r, pj) * beta_b;
      val += alpha_a.conj() * h.at(pi, pj) * beta_b;
      val += beta_a.conj() * h.at(pj, pi) * alpha_b;
      next.at(a, b) = val;
    }
  }
  signature_recurse(std::move(next), plus, minus);
}

}  // namespace

std::tuple<std::size_t, std::size_t, std::size_t> hermitian_signature(
    const ExactMatrix& h) {
  if (h.rows() != h.cols())
    throw Error(ErrorCode::NotHermitian, "matrix is not square");
  for (std::size_t r = 0; r < h.rows(); ++r)
    for (std::size_t c = 0; c < h.cols(); ++c)
      if (h.at(r, c) != h.at(c, r).conj())
        throw Error(ErrorCode::NotHermitian,
                    "matrix differs from its conjugate transpose");
  std::size_t plus = 0, minus = 0;
  signature_recurse(h, plus, minus);
  return {plus, minus, h.rows() - plus - minus};
}

}  // namespace exact_linalg
}  // namespace orbitq
