#pragma once

#include <array>
#include <utility>
#include <vector>

#include "anholo/floquet.hpp"
#include "anholo/numerics.hpp"

namespace anholo {

inline constexpr double kDefaultAngle = kTwoPi / 3.0;

// ---------------------------------------------------------------- two level

/// H0 = diag(0, e2), v = (a, b). Throws DegenerateChoice when a or b vanish.
FloquetSystem two_level_system(double e2, Complex a, Complex b, double period);

// ---------------------------------------------------------------- AAQC

struct KickSpec {
  enum class Kind { Optimal, Fair, Custom };
  Kind kind = Kind::Optimal;
  /// Fair: mixer state |F> on the work register.
  CVector mixer_state;
  double a = 0.0;
  double b = 0.0;
  /// Custom: the full kick vector.
  CVector custom;

  static KickSpec optimal() { return {}; }
  static KickSpec fair(CVector f, double a, double b) { return {Kind::Fair, std::move(f), a, b, {}}; }
  static KickSpec custom_vector(CVector v) { return {Kind::Custom, {}, 0.0, 0.0, std::move(v)}; }
};

struct AaqcProblem {
  CMatrix h_b;
  CMatrix h_p;
  double e_p = 0.0;
  double period = 1.0;
  KickSpec kick;
};

struct AaqcSystem {
  FloquetSystem system;
  /// |0_B> (x) |0>, ground state of H0 with energy 0.
  CVector minus;
  /// |x> (x) |1>, first excited state with energy E_P.
  CVector plus;
  /// Largest eigenvalue of H0; T W < 2pi.
  double w_max = 0.0;
};

/// H0 = H_B (x) |0><0| + (E_P + H_P) (x) |1><1| with the control qubit last.
/// H_B and H_P are shifted so their ground energies are 0.
AaqcSystem compose_aaqc(const AaqcProblem& problem);

// ---------------------------------------------------------------- Grover

/// alpha (1 - |x><x|) on N states.
CMatrix grover_cost(long n, long x, double alpha);
/// Uniform superposition over N states.
CVector uniform_state(long n);
/// beta (1 - |F><F|) with |F> uniform.
CMatrix grover_mixer(long n, double beta);

/// (E_- T, E_+ T) for the optimal kick vector; the pair starts at (0, E_P T)
/// at s = 0 and is not reduced mod 2pi.
std::pair<double, double> optimal_v_quasienergies(double e_p, double period, double s);

/// <b_i|U|b_j> for an orthonormal set {b_i}.
CMatrix restrict_operator(const CMatrix& u, const std::vector<CVector>& basis);
/// Coefficients (c1, c0) of lambda^2 + c1 lambda + c0 for a 2x2 matrix.
std::array<Complex, 2> char_poly_2x2(const CMatrix& m);

struct FairGroverParams {
  long n = 100;
  double a2 = 5.0 / 6.0;
  double alpha = kDefaultAngle;
  double e_p = kDefaultAngle;
  double period = 1.0;
  double theta = 0.0;
  /// Overrides arcsin(N^-1/2) when positive.
  double epsilon = 0.0;

  double a() const;
  double b() const;
  double eps() const;
  void validate() const;
};

/// Three-level truncation in the basis (|->, |+>, |f>).
FloquetSystem fair_grover_effective(const FairGroverParams& p);

/// Full 2N-dimensional fair-Grover system with marked item x and mixer
/// strength beta. With `optimal` set, v = (|-> + |+>)/sqrt(2) instead.
AaqcSystem full_grover(const FairGroverParams& p, long x, double beta, bool optimal = false);

/// W_s = U0 exp(-i s |u><u|), u = a|-> + b|f>, on the three-level basis.
CMatrix reference_operator(const FairGroverParams& p, double s);
/// The lower eigenangle of W_s on span{|->, |f>}, running from 0 to (E_P + alpha) T.
double reference_lower_angle(const FairGroverParams& p, double s);
/// Solves W_-(s_c) = E_P T by bisection.
double crossing_point(const FairGroverParams& p);

/// S_s = exp(i s |u><u|) exp(-i s |v><v|) on the three-level basis.
CMatrix s_operator(const FairGroverParams& p, double s);
/// cos(Theta) for the nontrivial eigenangles +-Theta of S_s.
double cos_big_theta(double b, double eps, double s);

struct FairGroverAnalysis {
  long n = 0;
  double epsilon = 0.0;
  double theta = 0.0;
  double s_c = 0.0;
  /// 2 eps b sin(s_c / 2).
  double gap_perturbative = 0.0;
  /// Leading order including the overlap of |u> with the W_- eigenvector.
  double gap_effective = 0.0;
  double gap_numeric = 0.0;
  double s_at_min = 0.0;
};

/// Locates s_c, evaluates the perturbative gaps and measures the E_0/E_1 gap
/// of the tracked three-level spectrum.
FairGroverAnalysis perturbative_gap(const FairGroverParams& p, int n_samples = 400);

}  // namespace anholo
