#pragma once

// Pole-face shape parameterizations on quantized lattices.
//
// Two families of search space describe the face line of a cylindrical
// pole over radii 0..160 mm:
//   - raw:      16 independent node heights (one per 10 mm station)
//   - steps(k): k break radii plus k plateau heights, k = 1..4
// All parameters live on per-axis lattices (lower + q * resolution) and
// break radii carry strict-order constraints a < b < ...

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace poleopt {

inline constexpr int kProfileNodes = 17;
inline constexpr double kNodeSpacing = 0.010;         // m, radial station pitch
inline constexpr double kPoleFaceRadius = 0.160;      // m
inline constexpr double kMaxFaceHeight = 0.040;       // m
inline constexpr double kHeightResolution = 0.00001;  // m
inline constexpr double kRadiusResolution = 0.010;    // m

enum class SchemeKind { Raw, Steps };

struct Scheme {
  SchemeKind kind = SchemeKind::Raw;
  int ramps = 0;  // used by Steps only

  static Scheme raw() { return {SchemeKind::Raw, 0}; }
  static Scheme steps(int k) { return {SchemeKind::Steps, k}; }

  std::string name() const {
    return kind == SchemeKind::Raw ? "raw" : "steps" + std::to_string(ramps);
  }
  friend bool operator==(const Scheme&, const Scheme&) = default;
};

// How a steps(k) parameter vector is turned into a face line. Plateaus are
// the default; Ramp interpolates linearly between the region start heights
// and reaches zero at the last break radius.
enum class ProfileStyle { Step, Ramp };

// A quantized parameter vector. Values are always canonical lattice points,
// i.e. exactly lower[i] + q * resolution[i] as computed by ParamSpace.
struct ShapeParams {
  std::vector<double> values;

  friend bool operator==(const ShapeParams&, const ShapeParams&) = default;
};

// Heights of the face line at the 17 node radii 0, 10, ..., 160 mm.
struct PoleProfile {
  std::array<double, kProfileNodes> heights{};

  friend bool operator==(const PoleProfile&, const PoleProfile&) = default;
};

class ParamSpace {
 public:
  ParamSpace(std::vector<std::string> names, std::vector<double> lower,
             std::vector<double> upper, std::vector<double> resolution,
             std::vector<std::pair<int, int>> ordering, Scheme scheme)
      : names_(std::move(names)),
        lower_(std::move(lower)),
        upper_(std::move(upper)),
        resolution_(std::move(resolution)),
        ordering_(std::move(ordering)),
        scheme_(scheme) {
    validate();
    quanta_.resize(lower_.size());
    for (std::size_t i = 0; i < lower_.size(); ++i)
      quanta_[i] = std::llround((upper_[i] - lower_[i]) / resolution_[i]);
  }

  int size() const { return static_cast<int>(lower_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<double>& resolution() const { return resolution_; }
  const std::vector<std::pair<int, int>>& ordering() const { return ordering_; }
  Scheme scheme() const { return scheme_; }

  // Number of lattice steps along axis i; axis values are q = 0..quanta(i).
  std::int64_t quanta(int i) const { return quanta_[i]; }

  double value_at(int i, std::int64_t q) const {
    return lower_[i] + static_cast<double>(q) * resolution_[i];
  }

  // Nearest lattice index for a raw value, clamped to the axis bounds.
  // Half-way cases round away from zero.
  std::int64_t index_of(int i, double v) const {
    const std::int64_t q = std::llround((v - lower_[i]) / resolution_[i]);
    return std::clamp<std::int64_t>(q, 0, quanta_[i]);
  }

  std::vector<std::int64_t> indices(const ShapeParams& p) const {
    std::vector<std::int64_t> q(p.values.size());
    for (int i = 0; i < size(); ++i) q[i] = index_of(i, p.values[i]);
    return q;
  }

  ShapeParams params_from_indices(const std::vector<std::int64_t>& q) const {
    ShapeParams p;
    p.values.resize(q.size());
    for (int i = 0; i < size(); ++i)
      p.values[i] = value_at(i, std::clamp<std::int64_t>(q[i], 0, quanta_[i]));
    repair_ordering(p);
    return p;
  }

  // Position of the value on the global grid shared by a chain (lattices of
  // ordered axes are aligned: same resolution, lower bounds a multiple of it
  // apart). Exact integer, so order comparisons carry no float fuzz.
  std::int64_t grid_position(int i, double v) const {
    return std::llround(v / resolution_[i]);
  }

  bool satisfies_ordering(const ShapeParams& p) const {
    for (auto [i, j] : ordering_)
      if (grid_position(i, p.values[i]) >= grid_position(j, p.values[j]))
        return false;
    return true;
  }

  // True iff every value is a lattice point within bounds and all ordering
  // constraints hold.
  bool is_valid(const ShapeParams& p) const {
    if (static_cast<int>(p.values.size()) != size()) return false;
    for (int i = 0; i < size(); ++i) {
      const std::int64_t q = index_of(i, p.values[i]);
      if (p.values[i] != value_at(i, q)) return false;
    }
    return satisfies_ordering(p);
  }

 private:
  void validate() const {
    const auto n = lower_.size();
    if (n == 0 || upper_.size() != n || resolution_.size() != n ||
        names_.size() != n)
      throw std::invalid_argument("ParamSpace: inconsistent field arities");
    for (std::size_t i = 0; i < n; ++i) {
      if (!(lower_[i] < upper_[i]))
        throw std::invalid_argument("ParamSpace: lower must be < upper");
      if (!(resolution_[i] > 0.0))
        throw std::invalid_argument("ParamSpace: resolution must be positive");
      const double span = upper_[i] - lower_[i];
      const double q = span / resolution_[i];
      if (std::abs(q - std::round(q)) * resolution_[i] > 1e-12)
        throw std::invalid_argument(
            "ParamSpace: span is not a multiple of the resolution");
    }
    // The ordering relation must be acyclic; repair additionally requires
    // it to form disjoint chains (each axis at most one predecessor and
    // one successor), which is what the factories produce.
    std::vector<int> in(n, 0), out(n, 0);
    for (auto [i, j] : ordering_) {
      if (i < 0 || j < 0 || i >= static_cast<int>(n) || j >= static_cast<int>(n) || i == j)
        throw std::invalid_argument("ParamSpace: bad ordering pair");
      ++out[i];
      ++in[j];
      if (out[i] > 1 || in[j] > 1)
        throw std::invalid_argument("ParamSpace: ordering must form chains");
      if (resolution_[i] != resolution_[j])
        throw std::invalid_argument(
            "ParamSpace: ordered axes must share a resolution");
      const double offset = (lower_[j] - lower_[i]) / resolution_[i];
      if (std::abs(offset - std::round(offset)) * resolution_[i] > 1e-12)
        throw std::invalid_argument(
            "ParamSpace: ordered axes must sit on one aligned grid");
    }
    for (std::size_t start = 0; start < n; ++start) {
      int hops = 0;
      int cur = static_cast<int>(start);
      while (hops <= static_cast<int>(n)) {
        int next = -1;
        for (auto [i, j] : ordering_)
          if (i == cur) { next = j; break; }
        if (next < 0) break;
        cur = next;
        if (++hops > static_cast<int>(n))
          throw std::invalid_argument("ParamSpace: ordering has a cycle");
      }
    }
  }

  friend ShapeParams quantize(const ParamSpace&, const std::vector<double>&);

  // Projects violated chains onto the nearest feasible lattice assignment
  // in L1 distance; ties are resolved toward the lower value at the
  // later-indexed axis. Exact dynamic program over the per-axis lattices.
  void repair_ordering(ShapeParams& p) const {
    if (ordering_.empty() || satisfies_ordering(p)) return;
    for (const auto& chain : chains()) {
      bool ok = true;
      for (std::size_t t = 1; t < chain.size(); ++t)
        if (!(p.values[chain[t - 1]] < p.values[chain[t]])) ok = false;
      if (ok) continue;
      project_chain(chain, p);
    }
  }

  std::vector<std::vector<int>> chains() const {
    std::vector<std::vector<int>> out;
    std::vector<int> pred(size(), -1), succ(size(), -1);
    for (auto [i, j] : ordering_) {
      succ[i] = j;
      pred[j] = i;
    }
    for (int i = 0; i < size(); ++i) {
      if (pred[i] >= 0 || succ[i] < 0) continue;  // chain heads only
      std::vector<int> chain{i};
      for (int cur = succ[i]; cur >= 0; cur = succ[cur]) chain.push_back(cur);
      out.push_back(std::move(chain));
    }
    return out;
  }

  void project_chain(const std::vector<int>& chain, ShapeParams& p) const {
    const int m = static_cast<int>(chain.size());
    std::vector<std::vector<double>> lattice(m);
    for (int t = 0; t < m; ++t) {
      const int a = chain[t];
      lattice[t].resize(quanta_[a] + 1);
      for (std::int64_t q = 0; q <= quanta_[a]; ++q)
        lattice[t][q] = value_at(a, q);
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> dp(m);
    for (int t = 0; t < m; ++t) {
      const double target = p.values[chain[t]];
      dp[t].assign(lattice[t].size(), inf);
      if (t == 0) {
        for (std::size_t q = 0; q < lattice[0].size(); ++q)
          dp[0][q] = std::abs(target - lattice[0][q]);
        continue;
      }
      // prefix minima of dp[t-1] over values strictly below lattice[t][q]
      std::size_t prev = 0;
      double run = inf;
      for (std::size_t q = 0; q < lattice[t].size(); ++q) {
        while (prev < lattice[t - 1].size() &&
               lattice[t - 1][prev] < lattice[t][q]) {
          run = std::min(run, dp[t - 1][prev]);
          ++prev;
        }
        if (run < inf) dp[t][q] = std::abs(target - lattice[t][q]) + run;
      }
    }
    double best = inf;
    for (double c : dp[m - 1]) best = std::min(best, c);
    if (!(best < inf))
      throw std::logic_error("ParamSpace: infeasible ordering chain");
    // Backward reconstruction, preferring the smallest feasible value at
    // the later axis first.
    std::vector<double> chosen(m);
    double need = best;
    double upper_value = inf;
    for (int t = m - 1; t >= 0; --t) {
      const double target = p.values[chain[t]];
      for (std::size_t q = 0; q < lattice[t].size(); ++q) {
        if (!(lattice[t][q] < upper_value)) break;
        if (dp[t][q] == need) {
          chosen[t] = lattice[t][q];
          need -= std::abs(target - lattice[t][q]);
          upper_value = lattice[t][q];
          break;
        }
      }
    }
    for (int t = 0; t < m; ++t) p.values[chain[t]] = chosen[t];
  }

  std::vector<std::string> names_;
  std::vector<double> lower_, upper_, resolution_;
  std::vector<std::pair<int, int>> ordering_;
  Scheme scheme_;
  std::vector<std::int64_t> quanta_;
};

// The detailed parameterization: heights at r = 10..160 mm, range 0..40 mm,
// 0.01 mm lattice. The r = 0 node is tied to the first parameter.
inline ParamSpace make_raw_space() {
  const int n = kProfileNodes - 1;
  std::vector<std::string> names(n);
  for (int i = 0; i < n; ++i)
    names[i] = "h" + std::to_string((i + 1) * 10);
  return ParamSpace(std::move(names), std::vector<double>(n, 0.0),
                    std::vector<double>(n, kMaxFaceHeight),
                    std::vector<double>(n, kHeightResolution), {},
                    Scheme::raw());
}

// Reduced parameterization with k break radii (10 mm lattice, strictly
// increasing, radius i bounded below by 10*i mm) followed by k plateau
// heights on the raw height lattice.
inline ParamSpace make_steps_space(int k) {
  if (k < 1 || k > 4)
    throw std::invalid_argument("make_steps_space: k must be in 1..4");
  const int n = 2 * k;
  std::vector<std::string> names(n);
  std::vector<double> lower(n), upper(n), resolution(n);
  std::vector<std::pair<int, int>> ordering;
  for (int i = 0; i < k; ++i) {
    names[i] = "r" + std::to_string(i + 1);
    lower[i] = kRadiusResolution * (i + 1);
    upper[i] = kPoleFaceRadius;
    resolution[i] = kRadiusResolution;
    if (i > 0) ordering.emplace_back(i - 1, i);
  }
  for (int i = 0; i < k; ++i) {
    names[k + i] = "h" + std::to_string(i + 1);
    lower[k + i] = 0.0;
    upper[k + i] = kMaxFaceHeight;
    resolution[k + i] = kHeightResolution;
  }
  return ParamSpace(std::move(names), std::move(lower), std::move(upper),
                    std::move(resolution), std::move(ordering),
                    Scheme::steps(k));
}

// Rounds to the nearest lattice point, clamps to bounds and repairs any
// ordering violation. Total over all real inputs of the right arity.
inline ShapeParams quantize(const ParamSpace& space,
                            const std::vector<double>& raw) {
  if (static_cast<int>(raw.size()) != space.size())
    throw std::invalid_argument("quantize: arity mismatch");
  ShapeParams p;
  p.values.resize(raw.size());
  for (int i = 0; i < space.size(); ++i)
    p.values[i] = space.value_at(i, space.index_of(i, raw[i]));
  space.repair_ordering(p);
  return p;
}

inline ShapeParams quantize(const ParamSpace& space, const ShapeParams& p) {
  return quantize(space, p.values);
}

namespace detail {

inline int node_count() { return kProfileNodes; }

inline double node_radius(int i) { return kNodeSpacing * i; }

}  // namespace detail

// Maps a parameter vector to the 17 node heights of the face line. The
// axis node mirrors the 10 mm station for every scheme, so the face is
// flat at the axis and every steps profile stays raw-representable.
inline PoleProfile to_profile(const ParamSpace& space, const ShapeParams& p,
                              ProfileStyle style = ProfileStyle::Step) {
  if (static_cast<int>(p.values.size()) != space.size())
    throw std::invalid_argument("to_profile: arity mismatch");
  PoleProfile profile;
  if (space.scheme().kind == SchemeKind::Raw) {
    for (int i = 1; i < kProfileNodes; ++i)
      profile.heights[i] = p.values[i - 1];
    profile.heights[0] = profile.heights[1];
    return profile;
  }
  const int k = space.scheme().ramps;
  const double* radius = p.values.data();
  const double* height = p.values.data() + k;
  for (int n = 1; n < kProfileNodes; ++n) {
    const double r = detail::node_radius(n);
    if (style == ProfileStyle::Step) {
      // region [r_{i-1}, r_i) carries height_i; zero from the last break on
      double h = 0.0;
      for (int i = 0; i < k; ++i) {
        if (r < radius[i]) {
          h = height[i];
          break;
        }
      }
      profile.heights[n] = h;
    } else {
      // piecewise linear through (0,h1), (r1,h2), ..., (r_{k-1},hk), (rk,0)
      std::vector<double> xs{0.0};
      std::vector<double> ys{height[0]};
      for (int i = 1; i < k; ++i) {
        xs.push_back(radius[i - 1]);
        ys.push_back(height[i]);
      }
      xs.push_back(radius[k - 1]);
      ys.push_back(0.0);
      double h = 0.0;
      if (r < xs.back()) {
        auto it = std::upper_bound(xs.begin(), xs.end(), r);
        const std::size_t j = it - xs.begin();  // r in [xs[j-1], xs[j])
        const double t = (r - xs[j - 1]) / (xs[j] - xs[j - 1]);
        h = ys[j - 1] + t * (ys[j] - ys[j - 1]);
      }
      profile.heights[n] = h;
    }
  }
  profile.heights[0] = profile.heights[1];
  return profile;
}

// One line per node, "r_mm,height_mm", three decimals.
inline void write_profile(std::ostream& os, const PoleProfile& profile) {
  char line[64];
  for (int i = 0; i < kProfileNodes; ++i) {
    std::snprintf(line, sizeof line, "%.3f,%.3f", detail::node_radius(i) * 1e3,
                  profile.heights[i] * 1e3);
    os << line << '\n';
  }
}

}  // namespace poleopt
