#include "anholo/passage.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "anholo/error.hpp"

namespace anholo {

Schedule::Schedule(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw Error(ErrorCode::InvalidArgument, "schedule needs at least two points");
  if (values_.front() != 0.0) throw Error(ErrorCode::InvalidArgument, "schedule must start at s = 0");
  for (std::size_t l = 1; l < values_.size(); ++l) {
    if (!(values_[l] >= values_[l - 1])) throw Error(ErrorCode::InvalidArgument, "schedule must be non-decreasing");
  }
}

double passage_error(const CVector& psi, const CVector& target) {
  const double p = std::norm(inner(target, psi));
  return std::sqrt(std::max(0.0, 1.0 - p));
}

PassageResult run_passage(const KickedMap& map, const Schedule& schedule, const CVector& psi0, const CVector& target,
                          bool record_history) {
  if (psi0.dim() != map.dim() || target.dim() != map.dim()) {
    throw Error(ErrorCode::InvalidArgument, "state dimension does not match the map");
  }
  if (!psi0.is_normalized(1e-10)) throw Error(ErrorCode::UnnormalizedVector, "initial state must be normalized");
  if (!target.is_normalized(1e-10)) throw Error(ErrorCode::UnnormalizedVector, "target state must be normalized");

  PassageResult result;
  result.final_state = psi0;
  result.steps = schedule.steps();
  auto psi = result.final_state.span();
  if (record_history) {
    result.overlap_history.reserve(schedule.values().size());
    result.overlap_history.push_back(std::abs(inner(target, result.final_state)));
  }
  for (int l = 1; l <= schedule.steps(); ++l) {
    map.apply(schedule[static_cast<std::size_t>(l)], psi);
    if (record_history) result.overlap_history.push_back(std::abs(inner(target, result.final_state)));
  }
  result.error = passage_error(result.final_state, target);
  return result;
}

Schedule linear_schedule(double s_max, int steps) {
  if (steps < 1) throw Error(ErrorCode::InvalidArgument, "schedule needs L >= 1");
  if (!(s_max >= 0.0)) throw Error(ErrorCode::InvalidArgument, "s_max must be non-negative");
  std::vector<double> s(static_cast<std::size_t>(steps) + 1);
  for (int l = 0; l <= steps; ++l) s[static_cast<std::size_t>(l)] = s_max * l / steps;
  s.back() = s_max;
  return Schedule(std::move(s));
}

// ---------------------------------------------------------------- Roland-Cerf

RolandCerfDensity::RolandCerfDensity(const std::function<double(double)>& gap_fn, double s_max, double exponent,
                                     int base_intervals) {
  if (!(s_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "s_max must be positive");
  if (base_intervals < 1) throw Error(ErrorCode::InvalidArgument, "need at least one interval");

  auto eval = [&](double s) {
    const double g = gap_fn(s);
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw Error(ErrorCode::NonpositiveGap, "gap function is not positive at s = " + std::to_string(s));
    }
    return g;
  };

  std::vector<double> gaps;
  constexpr int kMaxDepth = 30;
  // Appends (a, b] with local bisection where the gap varies quickly.
  std::function<void(double, double, double, double, int)> refine = [&](double a, double ga, double b, double gb,
                                                                        int depth) {
    if (depth < kMaxDepth && std::abs(ga - gb) > 0.1 * std::min(ga, gb)) {
      const double m = 0.5 * (a + b);
      const double gm = eval(m);
      refine(a, ga, m, gm, depth + 1);
      refine(m, gm, b, gb, depth + 1);
      return;
    }
    nodes_.push_back(b);
    gaps.push_back(gb);
  };

  nodes_.push_back(0.0);
  gaps.push_back(eval(0.0));
  for (int k = 1; k <= base_intervals; ++k) {
    const double a = nodes_.back();
    const double b = k == base_intervals ? s_max : s_max * k / base_intervals;
    refine(a, gaps.back(), b, eval(b), 0);
  }

  cumulative_.assign(nodes_.size(), 0.0);
  for (std::size_t k = 1; k < nodes_.size(); ++k) {
    const double w = 0.5 * (std::pow(gaps[k - 1], -exponent) + std::pow(gaps[k], -exponent));
    cumulative_[k] = cumulative_[k - 1] + w * (nodes_[k] - nodes_[k - 1]);
  }
}

Schedule RolandCerfDensity::schedule(int steps) const {
  if (steps < 1) throw Error(ErrorCode::InvalidArgument, "schedule needs L >= 1");
  const double total = cumulative_.back();
  std::vector<double> s(static_cast<std::size_t>(steps) + 1);
  std::size_t k = 1;
  for (int l = 1; l < steps; ++l) {
    const double target = total * l / steps;
    while (k + 1 < cumulative_.size() && cumulative_[k] < target) ++k;
    const double c0 = cumulative_[k - 1], c1 = cumulative_[k];
    const double frac = c1 > c0 ? (target - c0) / (c1 - c0) : 0.0;
    s[static_cast<std::size_t>(l)] = nodes_[k - 1] + frac * (nodes_[k] - nodes_[k - 1]);
  }
  s.front() = 0.0;
  s.back() = nodes_.back();
  for (std::size_t l = 1; l < s.size(); ++l) s[l] = std::max(s[l], s[l - 1]);
  return Schedule(std::move(s));
}

Schedule roland_cerf_schedule(const std::function<double(double)>& gap_fn, double s_max, int steps, double exponent) {
  return RolandCerfDensity(gap_fn, s_max, exponent).schedule(steps);
}

// ---------------------------------------------------------------- running time

long running_time(const KickedMap& map, const ScheduleFamily& family, const CVector& psi0, const CVector& target,
                  double epsilon, const RunningTimeOptions& options) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  if (epsilon >= 1.0) return 1;

  std::map<long, double> memo;
  auto ok = [&](long steps) {
    auto it = memo.find(steps);
    if (it == memo.end()) {
      const Schedule sched = family(static_cast<int>(steps));
      it = memo.emplace(steps, run_passage(map, sched, psi0, target).error).first;
    }
    return it->second < epsilon;
  };

  long lo = 0;  // largest size known to fail below hi
  long hi = 1;
  while (true) {
    if (2 * hi > options.max_steps) {
      throw Error(ErrorCode::NotConverged, "running time exceeds the cap of " + std::to_string(options.max_steps));
    }
    if (ok(hi) && ok(2 * hi)) break;
    if (!ok(hi)) lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (ok(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace anholo
