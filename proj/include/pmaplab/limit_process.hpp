#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "pmaplab/core_model.hpp"
#include "pmaplab/error.hpp"
#include "pmaplab/joyal.hpp"
#include "pmaplab/rng.hpp"
#include "pmaplab/step_function.hpp"

namespace pmaplab {

inline constexpr int kDefaultGridLog2 = 14;

struct GridJump {
  int index = 0;      // grid point where the jump lands; X(t-) is values[index - 1]
  double size = 0.0;
};

/// Real-valued path sampled at k/m, k = 0..m.
struct GridPath {
  int m = 0;
  std::vector<double> values;
  std::vector<GridJump> jumps;

  double time(int k) const { return static_cast<double>(k) / m; }
};

/// Gaussian bridge on the grid: a random walk with N(0, 1/m) steps, pinned at 1.
inline GridPath brownian_bridge(int m, RngStream& rng) {
  require(m >= 2, ErrorCode::InvalidArgument, "grid needs at least two cells");
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(m)));
  GridPath b;
  b.m = m;
  b.values.resize(static_cast<std::size_t>(m) + 1);
  b.values[0] = 0.0;
  for (int k = 1; k <= m; ++k) b.values[static_cast<std::size_t>(k)] = b.values[static_cast<std::size_t>(k - 1)] + normal(rng);
  const double end = b.values.back();
  for (int k = 0; k <= m; ++k) b.values[static_cast<std::size_t>(k)] -= end * static_cast<double>(k) / m;
  b.values.front() = 0.0;
  b.values.back() = 0.0;
  return b;
}

/// theta0 b_s + sum_i theta_i (1{U_i <= s} - s), with U_i snapped to grid points 1..m-1.
inline GridPath bridge_exchangeable(const ThetaVector& theta, int m, RngStream& rng) {
  GridPath x = brownian_bridge(m, rng);
  for (double& v : x.values) v *= theta.theta0();
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double u = rng.uniform();
    const int idx = std::clamp(static_cast<int>(std::lround(u * m)), 1, m - 1);
    x.jumps.push_back({idx, theta[i]});
  }
  for (int k = 0; k <= m; ++k) {
    const double s = x.time(k);
    double drift = 0.0;
    for (const auto& j : x.jumps) drift += j.size * ((j.index <= k ? 1.0 : 0.0) - s);
    x.values[static_cast<std::size_t>(k)] += drift;
  }
  x.values.back() = 0.0;
  return x;
}

struct VervaatResult {
  GridPath path;
  int argmin = 0;
  double s_min = 0.0;
};

/// Rotates the bridge to start at its (leftmost) minimum and recentres it.
inline VervaatResult vervaat(const GridPath& x) {
  require(x.m >= 1 && x.values.size() == static_cast<std::size_t>(x.m) + 1, ErrorCode::InvalidArgument,
          "malformed grid path");
  require(std::abs(x.values.front() - x.values.back()) <= 1e-9, ErrorCode::NonBridge,
          "bridge endpoints differ");
  const auto begin = x.values.begin();
  const int kmin = static_cast<int>(std::min_element(begin, begin + x.m) - begin);
  const double low = x.values[static_cast<std::size_t>(kmin)];
  VervaatResult r;
  r.argmin = kmin;
  r.s_min = x.time(kmin);
  r.path.m = x.m;
  r.path.values.resize(x.values.size());
  for (int k = 0; k < x.m; ++k)
    r.path.values[static_cast<std::size_t>(k)] = x.values[static_cast<std::size_t>((k + kmin) % x.m)] - low;
  r.path.values[0] = 0.0;
  r.path.values.back() = 0.0;
  for (const auto& j : x.jumps) {
    int shifted = ((j.index - kmin) % x.m + x.m) % x.m;
    if (shifted == 0) shifted = x.m;
    r.path.jumps.push_back({shifted, j.size});
  }
  return r;
}

struct JumpReflection {
  int t = 0;                    // jump index
  int T = 0;                    // first index >= t with X <= X(t-), or m
  bool absorbed = true;         // false when T was forced to m
  std::vector<double> R;        // R(s) for s = t..T
};

struct ReflectionResult {
  GridPath Y;
  std::vector<JumpReflection> reflections;
};

/// Removes each jump by reflecting the path above its running infimum after
/// the jump until it returns to the pre-jump level.
///
/// Grid conventions: R(t) = X(t) - X(t-) at the jump index itself, so the
/// whole grid increment there is removed; on (t, T] R is clamped at 0, as in
/// continuous time, so an undershoot at T is not carried into Y. Jumps sharing
/// an index are reflected once, and a window's infimum ignores the landing
/// points of other jumps, which an upward jump never lowers.
inline ReflectionResult jump_reflections(const GridPath& x) {
  ReflectionResult out;
  out.Y = x;
  std::vector<char> lands(static_cast<std::size_t>(x.m) + 1, 0);
  for (const auto& j : x.jumps) {
    require(j.index >= 1 && j.index <= x.m, ErrorCode::InvalidArgument, "jump index outside the grid");
    lands[static_cast<std::size_t>(j.index)] = 1;
  }
  std::vector<char> applied(static_cast<std::size_t>(x.m) + 1, 0);
  for (const auto& j : x.jumps) {
    JumpReflection r;
    r.t = j.index;
    const double level = x.values[static_cast<std::size_t>(r.t - 1)];
    r.T = r.t;
    while (r.T < x.m && x.values[static_cast<std::size_t>(r.T)] > level) ++r.T;
    r.absorbed = x.values[static_cast<std::size_t>(r.T)] <= level;
    double running = x.values[static_cast<std::size_t>(r.t)];
    r.R.push_back(running - level);
    for (int s = r.t + 1; s <= r.T; ++s) {
      if (!lands[static_cast<std::size_t>(s)]) running = std::min(running, x.values[static_cast<std::size_t>(s)]);
      r.R.push_back(std::max(running - level, 0.0));
    }
    if (!applied[static_cast<std::size_t>(r.t)]) {
      applied[static_cast<std::size_t>(r.t)] = 1;
      for (int s = r.t; s <= r.T; ++s)
        out.Y.values[static_cast<std::size_t>(s)] -= r.R[static_cast<std::size_t>(s - r.t)];
    }
    out.reflections.push_back(std::move(r));
  }
  return out;
}

struct ExplorationResult {
  GridPath H;
  GridPath X;                   // Vervaat-transformed bridge, with jump times t_i
  std::vector<JumpReflection> reflections;
  double s_min = 0.0;
};

/// H = (2 / theta0^2) Y for the Vervaat transform of the exchangeable bridge.
inline ExplorationResult exploration(const ThetaVector& theta, int m, RngStream& rng) {
  require(theta.theta0() > 0.0, ErrorCode::DegenerateTheta, "theta0 must be positive");
  VervaatResult v = vervaat(bridge_exchangeable(theta, m, rng));
  ReflectionResult refl = jump_reflections(v.path);
  ExplorationResult out;
  out.H = std::move(refl.Y);
  const double scale = 2.0 / (theta.theta0() * theta.theta0());
  for (double& y : out.H.values) y *= scale;
  out.X = std::move(v.path);
  out.reflections = std::move(refl.reflections);
  out.s_min = v.s_min;
  return out;
}

/// Grid cell k becomes a step of width 1/m carrying the left endpoint value.
inline StepFunction grid_to_steps(const GridPath& h) {
  std::vector<double> widths(static_cast<std::size_t>(h.m), 1.0 / h.m);
  std::vector<double> values(h.values.begin(), h.values.begin() + h.m);
  return StepFunction(std::move(widths), std::move(values));
}

struct LimitZ {
  JoyalOutput z;
  double U = 0.0;
};

/// Z = J^U(H) for a given pivot.
inline LimitZ limit_Z(const StepFunction& H, double U) {
  LimitZ out;
  out.U = U;
  out.z = joyal_functional(H, U);
  return out;
}

/// Z = J^U(H) with U uniform.
inline LimitZ limit_Z(const GridPath& H, RngStream& rng) {
  return limit_Z(grid_to_steps(H), rng.uniform());
}

/// L_s = height of the excursion straddling s; the step rule extends it
/// between marks, so L is non-decreasing and constant on [g_i, d_i).
inline StepFunction local_time(const JoyalOutput& z) {
  StepBuilder L;
  for (std::size_t i = 0; i < z.heights.size(); ++i) L.push(z.d[i] - z.g[i], z.heights[i]);
  const double rest = z.path.total() - (z.d.empty() ? 0.0 : z.d.back());
  if (rest > kBoundaryTolerance) L.push(rest, z.heights.empty() ? 0.0 : z.heights.back());
  return std::move(L).build();
}

inline StepFunction local_time(const StepFunction& H, double U) {
  return local_time(joyal_functional(H, U));
}

/// D_n = min{d in d_list : d > D_{n-1} + V_n (1 - D_{n-1})}; a missing d gives
/// D_n = 1, which ends the sequence.
inline std::vector<double> marks_D(std::span<const double> d_list, std::span<const double> V) {
  require(std::is_sorted(d_list.begin(), d_list.end()), ErrorCode::InvalidArgument,
          "d_list must be increasing");
  std::vector<double> D;
  double prev = 0.0;
  for (double v : V) {
    const double threshold = prev + v * (1.0 - prev);
    const auto it = std::upper_bound(d_list.begin(), d_list.end(), threshold);
    const double next = it == d_list.end() ? 1.0 : *it;
    D.push_back(next);
    if (next >= 1.0 - kBoundaryTolerance) break;
    prev = next;
  }
  return D;
}

inline std::vector<double> marks_D(std::span<const double> d_list, RngStream& rng, int k) {
  std::vector<double> V;
  std::vector<double> D;
  // Draw V_n lazily so the stream advances once per produced mark.
  while (static_cast<int>(D.size()) < k && (D.empty() || D.back() < 1.0 - kBoundaryTolerance)) {
    V.push_back(rng.uniform());
    D = marks_D(d_list, V);
  }
  return D;
}

}  // namespace pmaplab
