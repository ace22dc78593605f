#pragma once

// Exact Gaussian-rational scalars and dense exact matrices.  Everything here
// is over Q(i): no floating point, no tolerances, results are certificates.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace orbitq {

enum class ErrorCode {
  NotHermitian,
  RegistryMismatch,
  InvalidOrbit,
  ModelInconsistency,
  DegreeTooSmall,
  InvolutionInconsistency,
  SplitFailure,
  NotScalar,
  SingularCayley,
  RankUnstable,
  CacheError,
  InvalidInput,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

namespace exact_linalg {

// Gaussian rational re + im*i.  mpq_class keeps both parts in lowest terms
// with positive denominators, so equality is plain component equality.
class Scalar {
 public:
  Scalar() : re_(0), im_(0) {}
  Scalar(long v) : re_(v), im_(0) {}  // NOLINT: implicit by design
  Scalar(const mpq_class& re) : re_(re), im_(0) {}
  Scalar(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {}
  static Scalar i() { return Scalar(mpq_class(0), mpq_class(1)); }
  static Scalar fraction(long num, long den);

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return re_ == 0 && im_ == 0; }
  bool is_real() const { return im_ == 0; }
  bool is_one() const { return re_ == 1 && im_ == 0; }

  Scalar conj() const { return Scalar(re_, -im_); }
  // |z|^2 as a rational
  mpq_class norm2() const { return re_ * re_ + im_ * im_; }
  Scalar inverse() const;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  Scalar operator-() const { return Scalar(-re_, -im_); }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  // "0", "3/4", "1/2+1/3i", "-i", ... lowest terms, canonical.
  std::string str() const;

 private:
  mpq_class re_, im_;
};

// Dense matrix over Scalar, row major.
class ExactMatrix {
 public:
  ExactMatrix() : rows_(0), cols_(0) {}
  ExactMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ExactMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Scalar& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& at(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  bool is_zero() const;
  ExactMatrix transpose() const;
  ExactMatrix conj_transpose() const;
  ExactMatrix operator*(const ExactMatrix& o) const;
  ExactMatrix operator+(const ExactMatrix& o) const;
  ExactMatrix operator-(const ExactMatrix& o) const;
  ExactMatrix scaled(const Scalar& c) const;
  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  // In-place reduced row echelon form; returns pivot column indices.
  std::vector<std::size_t> rref();
  std::size_t rank() const;
  // Square inverse; throws Internal if singular.
  ExactMatrix inverse() const;

  void append_row(const std::vector<Scalar>& row);
  std::vector<Scalar> row(std::size_t r) const;

 private:
  std::size_t rows_, cols_;
  std::vector<Scalar> data_;
};

// Basis (as rows) of the right kernel {v : M v = 0}.
ExactMatrix kernel_basis(const ExactMatrix& m);

// Rows of a and b span subspaces of the same ambient; returns a row basis of
// the intersection (Zassenhaus).
ExactMatrix intersect_subspaces(const ExactMatrix& a, const ExactMatrix& b);

// Inertia (n_plus, n_minus, n_zero) of a Hermitian matrix, by recursive
// symmetric congruence pivoting.  Throws NotHermitian.
std::tuple<std::size_t, std::size_t, std::size_t> hermitian_signature(
    const ExactMatrix& h);

}  // namespace exact_linalg
}  // namespace orbitq
