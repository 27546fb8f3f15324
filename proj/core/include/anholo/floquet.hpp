#pragma once

#include <functional>
#include <span>
#include <vector>

#include "anholo/numerics.hpp"

namespace anholo {

/// exp(-i s |v><v|) = 1 + (exp(-i s) - 1)|v><v|, built in closed form.
CMatrix kick_operator(const CVector& v, double s);

/// psi <- exp(-i s |v><v|) psi without forming the matrix.
void apply_kick(const CVector& v, double s, std::span<Complex> psi);

/// One period of a rank-1 kicked system, U_s = U0 exp(-i s |v><v|).
///
/// Implementations only need to supply the unperturbed step U0; the kick is
/// always applied in closed form. This lets the passage code run on dense
/// systems and on structured operators too large to store densely.
class KickedMap {
 public:
  virtual ~KickedMap() = default;

  virtual std::size_t dim() const = 0;
  virtual const CVector& kick_vector() const = 0;
  virtual double period() const = 0;
  /// psi <- U0 psi.
  virtual void apply_unperturbed(std::span<Complex> psi) const = 0;

  /// psi <- U_s psi.
  void apply(double s, std::span<Complex> psi) const;
};

/// Kicked system defined by (H0, v, T). The unperturbed Floquet operator
/// exp(-i H0 T) and the eigendecomposition of H0 are computed once at
/// construction; every later evaluation of U_s costs one O(dim^2) product.
class FloquetSystem final : public KickedMap {
 public:
  FloquetSystem(CMatrix h0, CVector v, double period);
  /// Takes the eigendecomposition of H0 and exp(-i H0 T) from the caller,
  /// for operators whose structure makes them cheaper to assemble directly.
  FloquetSystem(CMatrix h0, EigenDecomposition h0_eigen, CMatrix u0, CVector v, double period);

  std::size_t dim() const override { return h0_.rows(); }
  const CVector& kick_vector() const override { return v_; }
  double period() const override { return period_; }
  void apply_unperturbed(std::span<Complex> psi) const override;

  const CMatrix& h0() const noexcept { return h0_; }
  const EigenDecomposition& h0_eigen() const noexcept { return h0_eigen_; }
  /// exp(-i H0 T).
  const CMatrix& unperturbed() const noexcept { return u0_; }

  /// U_s as a dense matrix.
  CMatrix at(double s) const;

 private:
  CMatrix h0_;
  CVector v_;
  double period_;
  EigenDecomposition h0_eigen_;
  CMatrix u0_;
};

inline CMatrix floquet_operator(const FloquetSystem& sys, double s) { return sys.at(s); }

/// A continuous-time adiabatic problem H(s(t)), 0 <= t <= t_max.
struct SaqcProblem {
  std::function<CMatrix(double)> hamiltonian;
  double s_max = 1.0;
  std::function<double(double)> schedule;
  double t_max = 1.0;
};

/// Piecewise-constant discretization on t_grid = {t_0 = 0, t_1, ..., t_L = t_max}.
///
/// Step l (1-based) evolves with H at the midpoint value
/// s_l = [s(t_{l-1}) + s(t_l)] / 2 for a duration t_l - t_{l-1}. Returns
/// {U_1, ..., U_L}; the passage applies them in that order.
std::vector<CMatrix> discretize_saqc(const SaqcProblem& problem, std::span<const double> t_grid);

/// The parameter values s_l used by discretize_saqc, index 0 holding s_0 = 0.
std::vector<double> saqc_midpoints(const SaqcProblem& problem, std::span<const double> t_grid);

/// {0, t_max/L, ..., t_max}.
std::vector<double> uniform_time_grid(double t_max, int steps);

}  // namespace anholo
