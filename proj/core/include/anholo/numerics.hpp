#pragma once

// Dense complex linear algebra used throughout the library: value-semantic
// vectors and matrices, Hermitian and unitary eigendecompositions, and the
// Hermitian matrix exponential.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace anholo {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

class CVector {
 public:
  CVector() = default;
  explicit CVector(std::size_t dim) : data_(dim) {}
  CVector(std::initializer_list<Complex> init) : data_(init) {}
  explicit CVector(std::vector<Complex> data) : data_(std::move(data)) {}

  static CVector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return data_.size(); }
  Complex& operator[](std::size_t i) { return data_[i]; }
  const Complex& operator[](std::size_t i) const { return data_[i]; }

  std::span<Complex> span() noexcept { return data_; }
  std::span<const Complex> span() const noexcept { return data_; }
  const std::vector<Complex>& data() const noexcept { return data_; }

  double norm() const;
  CVector normalized() const;
  bool is_normalized(double tol = 1e-12) const;

  CVector& operator+=(const CVector& other);
  CVector& operator-=(const CVector& other);
  CVector& operator*=(Complex scale);

 private:
  std::vector<Complex> data_;
};

CVector operator+(CVector a, const CVector& b);
CVector operator-(CVector a, const CVector& b);
CVector operator*(Complex scale, CVector v);

/// <a|b>, conjugate-linear in the first argument.
Complex inner(const CVector& a, const CVector& b);
Complex inner(std::span<const Complex> a, std::span<const Complex> b);

class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(std::span<const Complex> diag);
  static CMatrix diagonal(std::span<const double> diag);
  static CMatrix from_columns(std::span<const CVector> columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Complex> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  CVector column(std::size_t c) const;
  void set_column(std::size_t c, const CVector& v);

  CMatrix adjoint() const;
  Complex trace() const;
  double max_abs() const;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(Complex scale);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(Complex scale, CMatrix m);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CVector operator*(const CMatrix& m, const CVector& v);

/// out = m * in; `out` and `in` must not alias.
void multiply_into(const CMatrix& m, std::span<const Complex> in, std::span<Complex> out);

/// Entrywise max-norm of a - b.
double max_abs_diff(const CMatrix& a, const CMatrix& b);
double max_abs_diff(const CVector& a, const CVector& b);

bool is_unitary(const CMatrix& u, double tol = 1e-10);
bool is_hermitian(const CMatrix& h, double tol = 1e-10);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(const CVector& a, const CVector& b);
CMatrix outer(const CVector& a, const CVector& b);
/// |v><v| for a normalized v.
CMatrix projector(const CVector& v);

/// Determinant by partial-pivot LU; intended for small matrices.
Complex determinant(CMatrix m);

struct EigenDecomposition {
  /// Ascending eigenvalues (Hermitian input) or eigenangles in [0, 2pi)
  /// with U v = exp(-i theta) v (unitary input).
  std::vector<double> values;
  /// Orthonormal eigenvectors stored as columns.
  CMatrix vectors;
};

EigenDecomposition eig_hermitian(const CMatrix& h);
EigenDecomposition eig_unitary(const CMatrix& u);

/// exp(-i H t) for Hermitian H.
CMatrix exp_hermitian(const CMatrix& h, double t);
CMatrix exp_hermitian(const EigenDecomposition& eig, double t);

/// Maps any real angle onto [0, 2pi).
double wrap_angle(double theta);
/// Maps any real angle onto (-pi, pi].
double wrap_signed(double theta);
/// Shortest distance between two angles on the circle.
double circular_distance(double a, double b);

}  // namespace anholo
