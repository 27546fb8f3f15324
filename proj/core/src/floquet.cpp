#include "anholo/floquet.hpp"

#include <cmath>
#include <string>

#include "anholo/error.hpp"

namespace anholo {

CMatrix kick_operator(const CVector& v, double s) {
  if (!v.is_normalized()) throw Error(ErrorCode::UnnormalizedVector, "kick vector must be normalized");
  const Complex factor = std::polar(1.0, -s) - 1.0;
  CMatrix k = CMatrix::identity(v.dim());
  for (std::size_t r = 0; r < v.dim(); ++r)
    for (std::size_t c = 0; c < v.dim(); ++c) k(r, c) += factor * v[r] * std::conj(v[c]);
  return k;
}

void apply_kick(const CVector& v, double s, std::span<Complex> psi) {
  const Complex amp = (std::polar(1.0, -s) - 1.0) * inner(v.span(), psi);
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] += amp * v[i];
}

void KickedMap::apply(double s, std::span<Complex> psi) const {
  apply_kick(kick_vector(), s, psi);
  apply_unperturbed(psi);
}

FloquetSystem::FloquetSystem(CMatrix h0, CVector v, double period)
    : h0_(std::move(h0)), v_(std::move(v)), period_(period) {
  if (!h0_.is_square() || h0_.rows() == 0) throw Error(ErrorCode::InvalidArgument, "H0 must be square");
  if (v_.dim() != h0_.rows()) throw Error(ErrorCode::InvalidArgument, "kick vector dimension does not match H0");
  if (!(period_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "period T must be positive");
  if (!v_.is_normalized()) throw Error(ErrorCode::UnnormalizedVector, "kick vector must be normalized");
  h0_eigen_ = eig_hermitian(h0_);
  u0_ = exp_hermitian(h0_eigen_, period_);
}

FloquetSystem::FloquetSystem(CMatrix h0, EigenDecomposition h0_eigen, CMatrix u0, CVector v, double period)
    : h0_(std::move(h0)), v_(std::move(v)), period_(period), h0_eigen_(std::move(h0_eigen)), u0_(std::move(u0)) {
  const std::size_t n = h0_.rows();
  if (!h0_.is_square() || n == 0) throw Error(ErrorCode::InvalidArgument, "H0 must be square");
  if (v_.dim() != n || h0_eigen_.values.size() != n || h0_eigen_.vectors.rows() != n || u0_.rows() != n) {
    throw Error(ErrorCode::InvalidArgument, "dimension mismatch in precomputed Floquet data");
  }
  if (!(period_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "period T must be positive");
  if (!v_.is_normalized()) throw Error(ErrorCode::UnnormalizedVector, "kick vector must be normalized");
}

void FloquetSystem::apply_unperturbed(std::span<Complex> psi) const {
  thread_local std::vector<Complex> tmp;
  tmp.assign(psi.begin(), psi.end());
  multiply_into(u0_, tmp, psi);
}

CMatrix FloquetSystem::at(double s) const {
  // U0 (1 + f |v><v|) = U0 + f (U0 v) v^dagger.
  const Complex factor = std::polar(1.0, -s) - 1.0;
  const CVector u0v = u0_ * v_;
  CMatrix out = u0_;
  for (std::size_t r = 0; r < dim(); ++r) {
    const Complex left = factor * u0v[r];
    for (std::size_t c = 0; c < dim(); ++c) out(r, c) += left * std::conj(v_[c]);
  }
  return out;
}

namespace {

void validate_grid(const SaqcProblem& problem, std::span<const double> t_grid) {
  if (t_grid.size() < 2) throw Error(ErrorCode::BadGrid, "time grid needs at least two points");
  if (t_grid.front() != 0.0) throw Error(ErrorCode::BadGrid, "time grid must start at t = 0");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw Error(ErrorCode::BadGrid, "time grid must be strictly increasing");
  }
  if (std::abs(t_grid.back() - problem.t_max) > 1e-12 * std::max(1.0, std::abs(problem.t_max))) {
    throw Error(ErrorCode::BadGrid, "time grid must end at t_max");
  }
}

}  // namespace

std::vector<double> saqc_midpoints(const SaqcProblem& problem, std::span<const double> t_grid) {
  validate_grid(problem, t_grid);
  std::vector<double> s(t_grid.size());
  s[0] = 0.0;
  for (std::size_t l = 1; l < t_grid.size(); ++l) {
    s[l] = 0.5 * (problem.schedule(t_grid[l - 1]) + problem.schedule(t_grid[l]));
  }
  return s;
}

std::vector<CMatrix> discretize_saqc(const SaqcProblem& problem, std::span<const double> t_grid) {
  const std::vector<double> s = saqc_midpoints(problem, t_grid);
  std::vector<CMatrix> steps;
  steps.reserve(t_grid.size() - 1);
  for (std::size_t l = 1; l < t_grid.size(); ++l) {
    const CMatrix h = problem.hamiltonian(s[l]);
    if (!is_hermitian(h, 1e-10 * std::max(1.0, h.max_abs()))) {
      throw Error(ErrorCode::NonHermitian, "H(s) is not Hermitian at s = " + std::to_string(s[l]));
    }
    steps.push_back(exp_hermitian(h, t_grid[l] - t_grid[l - 1]));
  }
  return steps;
}

std::vector<double> uniform_time_grid(double t_max, int steps) {
  if (steps < 1 || !(t_max > 0.0)) throw Error(ErrorCode::BadGrid, "uniform grid needs steps >= 1 and t_max > 0");
  std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
  for (int l = 0; l <= steps; ++l) grid[static_cast<std::size_t>(l)] = t_max * l / steps;
  grid.back() = t_max;
  return grid;
}

}  // namespace anholo
