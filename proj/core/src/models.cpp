#include "anholo/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "anholo/error.hpp"
#include "anholo/spectral.hpp"

namespace anholo {

FloquetSystem two_level_system(double e2, Complex a, Complex b, double period) {
  if (std::abs(a) == 0.0 || std::abs(b) == 0.0) {
    throw Error(ErrorCode::DegenerateChoice, "both components of v must be nonzero");
  }
  if (!(period > 0.0) || !(e2 * period > 0.0) || !(e2 * period < kTwoPi)) {
    throw Error(ErrorCode::InvalidArgument, "two-level model needs 0 < E2 T < 2pi");
  }
  CVector v{a, b};
  if (!v.is_normalized()) throw Error(ErrorCode::UnnormalizedVector, "|a|^2 + |b|^2 must equal 1");
  const double diag[] = {0.0, e2};
  return FloquetSystem(CMatrix::diagonal(std::span<const double>(diag)), std::move(v), period);
}

// ---------------------------------------------------------------- AAQC

namespace {

CMatrix shifted(const CMatrix& h, double shift) {
  CMatrix out = h;
  for (std::size_t i = 0; i < out.rows(); ++i) out(i, i) -= shift;
  return out;
}

constexpr double kDegeneracyTol = 1e-9;

}  // namespace

AaqcSystem compose_aaqc(const AaqcProblem& p) {
  const std::size_t n = p.h_b.rows();
  if (!p.h_b.is_square() || !p.h_p.is_square() || p.h_p.rows() != n || n == 0) {
    throw Error(ErrorCode::InvalidArgument, "H_B and H_P must be square and of equal size");
  }
  if (!(p.period > 0.0)) throw Error(ErrorCode::InvalidArgument, "period T must be positive");
  if (!(p.e_p > 0.0)) throw Error(ErrorCode::GapConditionViolated, "E_P must be positive");

  const auto eb = eig_hermitian(p.h_b);
  const auto ep = eig_hermitian(p.h_p);
  if (n > 1 && eb.values[1] - eb.values[0] < kDegeneracyTol) {
    throw Error(ErrorCode::DegenerateGround, "H_B ground state is degenerate");
  }
  if (n > 1 && ep.values[1] - ep.values[0] < kDegeneracyTol) {
    throw Error(ErrorCode::DegenerateGround, "H_P ground state is degenerate");
  }
  const double first_excited = n > 1 ? eb.values[1] - eb.values[0] : std::numeric_limits<double>::infinity();
  if (!(p.e_p < first_excited)) {
    throw Error(ErrorCode::GapConditionViolated, "E_P must lie below the first excited energy of H_B");
  }
  const double w = std::max(eb.values.back() - eb.values.front(), p.e_p + ep.values.back() - ep.values.front());
  if (!(w * p.period < kTwoPi)) {
    throw Error(ErrorCode::PeriodTooLong, "T must be smaller than 2pi / W = " + std::to_string(kTwoPi / w));
  }

  const CMatrix zero_proj{{1.0, 0.0}, {0.0, 0.0}};
  const CMatrix one_proj{{0.0, 0.0}, {0.0, 1.0}};
  CMatrix hp = shifted(p.h_p, ep.values.front() - p.e_p);
  CMatrix h0 = kron(shifted(p.h_b, eb.values.front()), zero_proj) + kron(hp, one_proj);

  const CVector ctrl0{1.0, 0.0};
  const CVector ctrl1{0.0, 1.0};
  CVector minus = kron(eb.vectors.column(0), ctrl0);
  CVector plus = kron(ep.vectors.column(0), ctrl1);

  CVector v;
  switch (p.kick.kind) {
    case KickSpec::Kind::Optimal:
      v = (1.0 / std::sqrt(2.0)) * (minus + plus);
      break;
    case KickSpec::Kind::Fair: {
      if (p.kick.mixer_state.dim() != n) throw Error(ErrorCode::InvalidArgument, "|F> has the wrong dimension");
      if (!p.kick.mixer_state.is_normalized()) throw Error(ErrorCode::UnnormalizedVector, "|F> must be normalized");
      if (std::abs(p.kick.a * p.kick.a + p.kick.b * p.kick.b - 1.0) > 1e-12 || !(p.kick.b > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "fair kick needs a^2 + b^2 = 1 and b > 0");
      }
      v = Complex(p.kick.a) * minus + Complex(p.kick.b) * kron(p.kick.mixer_state, ctrl1);
      break;
    }
    case KickSpec::Kind::Custom:
      if (p.kick.custom.dim() != 2 * n) throw Error(ErrorCode::InvalidArgument, "custom v has the wrong dimension");
      v = p.kick.custom;
      break;
  }
  return {FloquetSystem(std::move(h0), std::move(v), p.period), std::move(minus), std::move(plus), w};
}

// ---------------------------------------------------------------- Grover

CMatrix grover_cost(long n, long x, double alpha) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "N must be positive");
  if (x < 0 || x >= n) throw Error(ErrorCode::IndexOutOfRange, "marked item outside [0, N)");
  if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
  std::vector<double> diag(static_cast<std::size_t>(n), alpha);
  diag[static_cast<std::size_t>(x)] = 0.0;
  return CMatrix::diagonal(std::span<const double>(diag));
}

CVector uniform_state(long n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "N must be positive");
  return CVector(std::vector<Complex>(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n))));
}

CMatrix grover_mixer(long n, double beta) {
  const CVector f = uniform_state(n);
  CMatrix h = CMatrix::identity(static_cast<std::size_t>(n)) - projector(f);
  h *= beta;
  return h;
}

std::pair<double, double> optimal_v_quasienergies(double e_p, double period, double s) {
  const double big = std::acos(std::cos(e_p * period / 2.0) * std::cos(s / 2.0));
  const double mid = (e_p * period + s) / 2.0;
  return {mid - big, mid + big};
}

CMatrix restrict_operator(const CMatrix& u, const std::vector<CVector>& basis) {
  CMatrix out(basis.size(), basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const CVector uj = u * basis[j];
    for (std::size_t i = 0; i < basis.size(); ++i) out(i, j) = inner(basis[i], uj);
  }
  return out;
}

std::array<Complex, 2> char_poly_2x2(const CMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw Error(ErrorCode::InvalidArgument, "expected a 2x2 matrix");
  return {-m.trace(), determinant(m)};
}

double FairGroverParams::a() const { return std::sqrt(a2); }
double FairGroverParams::b() const { return std::sqrt(1.0 - a2); }
double FairGroverParams::eps() const {
  return epsilon > 0.0 ? epsilon : std::asin(1.0 / std::sqrt(static_cast<double>(n)));
}

void FairGroverParams::validate() const {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "N must be at least 2");
  if (!(a2 > 0.0 && a2 < 1.0)) throw Error(ErrorCode::InvalidArgument, "a2 must lie in (0, 1)");
  if (!(epsilon >= 0.0 && epsilon < kPi / 2)) throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, pi/2)");
  if (!(period > 0.0) || !(e_p > 0.0) || !(alpha > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "E_P, alpha and T must be positive");
  }
  if (!((e_p + alpha) * period < kTwoPi)) {
    throw Error(ErrorCode::PeriodTooLong, "(E_P + alpha) T must be below 2pi");
  }
}

namespace {

CMatrix three_level_h0(const FairGroverParams& p) {
  const double diag[] = {0.0, p.e_p, p.e_p + p.alpha};
  return CMatrix::diagonal(std::span<const double>(diag));
}

CVector three_level_v(const FairGroverParams& p) {
  const double e = p.eps();
  return CVector{p.a(), p.b() * std::sin(e) * std::polar(1.0, p.theta), p.b() * std::cos(e)};
}

CVector three_level_u(const FairGroverParams& p) { return CVector{p.a(), 0.0, p.b()}; }

}  // namespace

FloquetSystem fair_grover_effective(const FairGroverParams& p) {
  p.validate();
  return FloquetSystem(three_level_h0(p), three_level_v(p), p.period);
}

AaqcSystem full_grover(const FairGroverParams& p, long x, double beta, bool optimal) {
  p.validate();
  AaqcProblem problem;
  problem.h_b = grover_mixer(p.n, beta);
  problem.h_p = grover_cost(p.n, x, p.alpha);
  problem.e_p = p.e_p;
  problem.period = p.period;
  problem.kick = optimal ? KickSpec::optimal() : KickSpec::fair(uniform_state(p.n), p.a(), p.b());
  return compose_aaqc(problem);
}

CMatrix reference_operator(const FairGroverParams& p, double s) {
  const FloquetSystem w(three_level_h0(p), three_level_u(p), p.period);
  return w.at(s);
}

double reference_lower_angle(const FairGroverParams& p, double s) {
  // On span{|->, |f>} the two angles sum to (E_P + alpha) T + s and the lower
  // one never exceeds (E_P + alpha) T, which fixes both from trace and det.
  const CMatrix w = reference_operator(p, s);
  const Complex tr = w(0, 0) + w(2, 2);
  const double sum = (p.e_p + p.alpha) * p.period + s;
  const double c = std::clamp((tr * std::polar(1.0, sum / 2.0)).real() / 2.0, -1.0, 1.0);
  const double diff = 2.0 * std::acos(c);
  return (sum - diff) / 2.0;
}

double crossing_point(const FairGroverParams& p) {
  const double level = p.e_p * p.period;
  double lo = 0.0, hi = kTwoPi;
  double flo = reference_lower_angle(p, lo) - level;
  const double fhi = reference_lower_angle(p, hi) - level;
  if (!(flo < 0.0 && fhi > 0.0)) throw Error(ErrorCode::CrossingNotFound, "W_-(s) does not cross E_P T");
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    const double fm = reference_lower_angle(p, mid) - level;
    if (fm < 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  const double s_c = 0.5 * (lo + hi);
  if (std::abs(s_c) < 1e-3 || std::abs(s_c - kPi) < 1e-3) {
    throw Error(ErrorCode::CrossingAtSingularPoint, "crossing too close to s = 0 or pi");
  }
  return s_c;
}

CMatrix s_operator(const FairGroverParams& p, double s) {
  return kick_operator(three_level_u(p), -s) * kick_operator(three_level_v(p), s);
}

double cos_big_theta(double b, double eps, double s) {
  const double x = b * b * std::pow(std::sin(eps / 2.0), 2);
  return 1.0 - 8.0 * x * (1.0 - x) * std::pow(std::sin(s / 2.0), 2);
}

FairGroverAnalysis perturbative_gap(const FairGroverParams& p, int n_samples) {
  p.validate();
  FairGroverAnalysis out;
  out.n = p.n;
  out.epsilon = p.eps();
  out.theta = p.theta;
  out.s_c = crossing_point(p);
  out.gap_perturbative = std::abs(2.0 * out.epsilon * p.b() * std::sin(out.s_c / 2.0));

  // Overlap of |u> with the W_- eigenvector at the crossing.
  const CMatrix w = reference_operator(p, out.s_c);
  const CMatrix block{{w(0, 0), w(0, 2)}, {w(2, 0), w(2, 2)}};
  const auto eig = eig_unitary(block);
  const double target = wrap_angle(p.e_p * p.period);
  const std::size_t k = circular_distance(eig.values[0], target) < circular_distance(eig.values[1], target) ? 0 : 1;
  const Complex u_overlap = p.a() * eig.vectors(0, k) + p.b() * eig.vectors(1, k);
  out.gap_effective = 2.0 * out.gap_perturbative * std::abs(u_overlap);

  const FloquetSystem sys = fair_grover_effective(p);
  const CurveSet curves = track_curves(sys, 0.0, kTwoPi, n_samples, {0.7, 12, false});
  GapOptions options;
  options.against = {1};
  const GapReport report = min_gap(curves, 0, options);
  out.gap_numeric = report.min_gap;
  out.s_at_min = report.s_at_min;
  return out;
}

}  // namespace anholo
