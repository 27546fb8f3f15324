#include "anholo/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "anholo/error.hpp"

namespace anholo {

namespace {

constexpr double kJacobiThreshold = 1e-13;
constexpr int kJacobiMaxSweeps = 100;
constexpr double kUnitaryClusterTol = 1e-8;
constexpr double kTieTol = 1e-10;

void require_square(const CMatrix& m, const char* what) {
  if (!m.is_square() || m.rows() == 0) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + ": matrix must be square and non-empty");
  }
}

void require_same_shape(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::InvalidArgument, "matrix shape mismatch");
  }
}

// Index of the first component whose magnitude is above kTieTol.
std::size_t first_nonzero(const CMatrix& vecs, std::size_t col) {
  for (std::size_t r = 0; r < vecs.rows(); ++r) {
    if (std::abs(vecs(r, col)) > kTieTol) return r;
  }
  return 0;
}

// Deterministic ordering inside (near-)degenerate clusters, then make the
// first nonzero component of every vector real positive.
void canonicalize(std::vector<double>& values, CMatrix& vecs, double cluster_tol) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::size_t begin = 0;
  while (begin < n) {
    std::size_t end = begin + 1;
    while (end < n && values[end] - values[end - 1] < cluster_tol) ++end;
    if (end - begin > 1) {
      std::stable_sort(order.begin() + static_cast<long>(begin), order.begin() + static_cast<long>(end),
                       [&](std::size_t a, std::size_t b) {
                         return std::abs(vecs(first_nonzero(vecs, a), a)) >
                                std::abs(vecs(first_nonzero(vecs, b), b));
                       });
    }
    begin = end;
  }

  std::vector<double> sorted_values(n);
  CMatrix sorted(vecs.rows(), n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    sorted_values[j] = values[src];
    const Complex lead = vecs(first_nonzero(vecs, src), src);
    const Complex phase = std::abs(lead) > 0.0 ? std::conj(lead) / std::abs(lead) : Complex{1.0, 0.0};
    for (std::size_t r = 0; r < vecs.rows(); ++r) sorted(r, j) = vecs(r, src) * phase;
  }
  values = std::move(sorted_values);
  vecs = std::move(sorted);
}

}  // namespace

// ---------------------------------------------------------------- CVector

CVector CVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw Error(ErrorCode::IndexOutOfRange, "basis index out of range");
  CVector v(dim);
  v[index] = 1.0;
  return v;
}

double CVector::norm() const {
  double acc = 0.0;
  for (const auto& z : data_) acc += std::norm(z);
  return std::sqrt(acc);
}

CVector CVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw Error(ErrorCode::UnnormalizedVector, "cannot normalize the zero vector");
  CVector out(*this);
  out *= 1.0 / n;
  return out;
}

bool CVector::is_normalized(double tol) const { return std::abs(norm() - 1.0) <= tol; }

CVector& CVector::operator+=(const CVector& other) {
  if (other.dim() != dim()) throw Error(ErrorCode::InvalidArgument, "vector dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

CVector& CVector::operator-=(const CVector& other) {
  if (other.dim() != dim()) throw Error(ErrorCode::InvalidArgument, "vector dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

CVector& CVector::operator*=(Complex scale) {
  for (auto& z : data_) z *= scale;
  return *this;
}

CVector operator+(CVector a, const CVector& b) { return a += b; }
CVector operator-(CVector a, const CVector& b) { return a -= b; }
CVector operator*(Complex scale, CVector v) { return v *= scale; }

namespace {

// std::complex operator* goes through the NaN-recovering libgcc routine,
// which dominates the dense kernels below.
inline Complex mul(Complex x, Complex y) {
  return {x.real() * y.real() - x.imag() * y.imag(), x.real() * y.imag() + x.imag() * y.real()};
}

}  // namespace

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "inner product dimension mismatch");
  Complex acc{};
  for (std::size_t i = 0; i < a.size(); ++i) acc += mul(std::conj(a[i]), b[i]);
  return acc;
}

Complex inner(const CVector& a, const CVector& b) { return inner(a.span(), b.span()); }

// ---------------------------------------------------------------- CMatrix

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::InvalidArgument, "ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const Complex> diag) {
  CMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

CMatrix CMatrix::diagonal(std::span<const double> diag) {
  CMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

CMatrix CMatrix::from_columns(std::span<const CVector> columns) {
  if (columns.empty()) return {};
  CMatrix m(columns.front().dim(), columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) m.set_column(c, columns[c]);
  return m;
}

CVector CMatrix::column(std::size_t c) const {
  CVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void CMatrix::set_column(std::size_t c, const CVector& v) {
  if (v.dim() != rows_) throw Error(ErrorCode::InvalidArgument, "column dimension mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

Complex CMatrix::trace() const {
  Complex acc{};
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) acc += (*this)(i, i);
  return acc;
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex scale) {
  for (auto& z : data_) z *= scale;
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(Complex scale, CMatrix m) { return m *= scale; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::InvalidArgument, "matrix product shape mismatch");
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += mul(aik, b(k, j));
    }
  }
  return out;
}

void multiply_into(const CMatrix& m, std::span<const Complex> in, std::span<Complex> out) {
  if (m.cols() != in.size() || m.rows() != out.size()) {
    throw Error(ErrorCode::InvalidArgument, "matrix-vector shape mismatch");
  }
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    Complex acc{};
    for (std::size_t c = 0; c < row.size(); ++c) acc += mul(row[c], in[c]);
    out[r] = acc;
  }
}

CVector operator*(const CMatrix& m, const CVector& v) {
  CVector out(m.rows());
  multiply_into(m, v.span(), out.span());
  return out;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b);
  double m = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m = std::max(m, std::abs(a(r, c) - b(r, c)));
  return m;
}

double max_abs_diff(const CVector& a, const CVector& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::InvalidArgument, "vector dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool is_unitary(const CMatrix& u, double tol) {
  if (!u.is_square()) return false;
  return max_abs_diff(u.adjoint() * u, CMatrix::identity(u.rows())) <= tol;
}

bool is_hermitian(const CMatrix& h, double tol) {
  if (!h.is_square()) return false;
  for (std::size_t r = 0; r < h.rows(); ++r)
    for (std::size_t c = r; c < h.cols(); ++c)
      if (std::abs(h(r, c) - std::conj(h(c, r))) > tol) return false;
  return true;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t k = 0; k < b.dim(); ++k) out[i * b.dim() + k] = a[i] * b[k];
  return out;
}

CMatrix outer(const CVector& a, const CVector& b) {
  CMatrix out(a.dim(), b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) out(i, j) = a[i] * std::conj(b[j]);
  return out;
}

CMatrix projector(const CVector& v) {
  if (!v.is_normalized()) throw Error(ErrorCode::UnnormalizedVector, "projector requires a normalized vector");
  return outer(v, v);
}

Complex determinant(CMatrix m) {
  require_square(m, "determinant");
  const std::size_t n = m.rows();
  Complex det{1.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::abs(m(r, k)) > std::abs(m(pivot, k))) pivot = r;
    if (m(pivot, k) == Complex{}) return {};
    if (pivot != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(k, c), m(pivot, c));
      det = -det;
    }
    det *= m(k, k);
    for (std::size_t r = k + 1; r < n; ++r) {
      const Complex f = m(r, k) / m(k, k);
      for (std::size_t c = k; c < n; ++c) m(r, c) -= f * m(k, c);
    }
  }
  return det;
}

// ---------------------------------------------------------------- eigen


EigenDecomposition eig_hermitian(const CMatrix& h) {
  require_square(h, "eig_hermitian");
  const double scale = std::max(1.0, h.max_abs());
  if (!is_hermitian(h, 1e-10 * scale)) throw Error(ErrorCode::NonHermitian, "eig_hermitian input is not Hermitian");

  const std::size_t n = h.rows();
  CMatrix a(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a(r, c) = 0.5 * (h(r, c) + std::conj(h(c, r)));
  CMatrix vt = CMatrix::identity(n);

  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) total += std::norm(a(r, c));
  total = std::sqrt(total);

  bool converged = false;
  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * std::norm(a(p, q));
    if (std::sqrt(off) <= kJacobiThreshold * total || total == 0.0) {
      converged = true;
      break;
    }

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double b = std::abs(apq);
        if (b == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Negligible relative to both diagonal entries: zero it outright.
        if (b < 1e-18 * (std::abs(app) + std::abs(aqq)) ) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const Complex e = apq / b;
        const Complex ec = std::conj(e);
        const double theta = (aqq - app) / (2.0 * b);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // A <- R^dagger A R with R = [[c, s], [-s conj(e), c conj(e)]] in the
        // (p, q) plane. Only rows p, q are rotated; columns follow from
        // Hermiticity and the 2x2 block is set directly.
        const Complex se = s * e, ce = c * e;
        Complex* rp = &a(p, 0);
        Complex* rq = &a(q, 0);
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const Complex apk = rp[k];
          const Complex aqk = rq[k];
          rp[k] = c * apk - mul(se, aqk);
          rq[k] = s * apk + mul(ce, aqk);
          a(k, p) = std::conj(rp[k]);
          a(k, q) = std::conj(rq[k]);
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = app - t * b;
        a(q, q) = aqq + t * b;
        // Eigenvectors are accumulated as rows of vt = V^T.
        const Complex sec = s * ec, cec = c * ec;
        Complex* vp = &vt(p, 0);
        Complex* vq = &vt(q, 0);
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = vp[k];
          const Complex vkq = vq[k];
          vp[k] = c * vkp - mul(sec, vkq);
          vq[k] = s * vkp + mul(cec, vkq);
        }
      }
    }
  }
  if (!converged) throw Error(ErrorCode::NoConvergence, "Jacobi sweeps exceeded the iteration cap");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = CMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, j) = vt(order[j], r);
  }
  canonicalize(out.values, out.vectors, kTieTol * scale);
  return out;
}

EigenDecomposition eig_unitary(const CMatrix& u) {
  require_square(u, "eig_unitary");
  if (!is_unitary(u, 1e-10)) throw Error(ErrorCode::NonUnitary, "eig_unitary input is not unitary");
  const std::size_t n = u.rows();

  const CMatrix ud = u.adjoint();
  CMatrix herm(n, n);
  CMatrix anti(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      herm(r, c) = 0.5 * (u(r, c) + ud(r, c));
      anti(r, c) = (u(r, c) - ud(r, c)) / Complex{0.0, 2.0};
    }

  const EigenDecomposition first = eig_hermitian(herm);
  CMatrix vecs = first.vectors;

  // Split clusters of the Hermitian part with the anti-Hermitian part.
  std::size_t begin = 0;
  while (begin < n) {
    std::size_t end = begin + 1;
    while (end < n && first.values[end] - first.values[end - 1] < kUnitaryClusterTol) ++end;
    const std::size_t m = end - begin;
    if (m > 1) {
      CMatrix q(n, m);
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t r = 0; r < n; ++r) q(r, j) = vecs(r, begin + j);
      CMatrix projected = q.adjoint() * anti * q;
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = r; c < m; ++c) {
          const Complex avg = 0.5 * (projected(r, c) + std::conj(projected(c, r)));
          projected(r, c) = avg;
          projected(c, r) = std::conj(avg);
        }
      const EigenDecomposition inner_eig = eig_hermitian(projected);
      const CMatrix rotated = q * inner_eig.vectors;
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t r = 0; r < n; ++r) vecs(r, begin + j) = rotated(r, j);
    }
    begin = end;
  }

  EigenDecomposition out;
  out.values.resize(n);
  CVector col(n);
  CVector ucol(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t r = 0; r < n; ++r) col[r] = vecs(r, j);
    multiply_into(u, col.span(), ucol.span());
    out.values[j] = wrap_angle(-std::arg(inner(col, ucol)));
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return out.values[i] < out.values[j]; });
  std::vector<double> sorted(n);
  out.vectors = CMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    sorted[j] = out.values[order[j]];
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, j) = vecs(r, order[j]);
  }
  out.values = std::move(sorted);
  canonicalize(out.values, out.vectors, kTieTol);
  return out;
}

CMatrix exp_hermitian(const EigenDecomposition& eig, double t) {
  const std::size_t n = eig.values.size();
  CMatrix scaled = eig.vectors;
  for (std::size_t j = 0; j < n; ++j) {
    const Complex phase = std::polar(1.0, -eig.values[j] * t);
    for (std::size_t r = 0; r < n; ++r) scaled(r, j) *= phase;
  }
  return scaled * eig.vectors.adjoint();
}

CMatrix exp_hermitian(const CMatrix& h, double t) { return exp_hermitian(eig_hermitian(h), t); }

double wrap_angle(double theta) {
  double w = std::fmod(theta, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

double wrap_signed(double theta) {
  double w = wrap_angle(theta);
  if (w > kPi) w -= kTwoPi;
  return w;
}

double circular_distance(double a, double b) { return std::abs(wrap_signed(a - b)); }

}  // namespace anholo
