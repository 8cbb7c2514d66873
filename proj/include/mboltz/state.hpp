#pragma once

// Distribution function on a product momentum grid.
//
// The stored unknown is g = w f with w(p) = |p| e^{|p|}. The weighted sup norm
// is then max(g), and g stays bounded and slowly varying where f itself may
// grow like 1/|p| near the origin and decays like e^{-|p|} at large |p|.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mboltz/error.hpp"
#include "mboltz/numeric.hpp"
#include "mboltz/quadrature.hpp"
#include "mboltz/vec3.hpp"

namespace mboltz {

inline double momentum_weight(double r) { return r * std::exp(r); }

/// Nearest-neighbour search over a fixed set of unit vectors.
///
/// Directions are bucketed on a cube map (6 faces x M x M cells). Every cell
/// keeps the nodes that can be among the k nearest of any point inside it:
/// if c is the cell centre, b bounds the chord from c to the cell, and d_k(c)
/// is the k-th nearest chord from c, a node u qualifies only when
/// |c - u| <= d_k(c) + 2b (triangle inequality).
class DirectionLocator {
 public:
  static constexpr int kNeighbours = 3;
  // Nodes tied with the k-th nearest (relative chord^2 difference below
  // kTieTolerance) join the stencil so that grid symmetries map stencils onto
  // stencils; at most kMaxStencil nodes are kept.
  static constexpr int kMaxStencil = 6;
  static constexpr double kTieTolerance = 1e-10;

  struct Stencil {
    std::array<int, kMaxStencil> index{};
    std::array<double, kMaxStencil> weight{};
    int count = 0;
  };

  DirectionLocator() = default;

  explicit DirectionLocator(std::vector<Vec3> directions, int cells_per_face = 8)
      : dirs_(std::move(directions)), cells_(cells_per_face) {
    if (dirs_.empty()) throw std::invalid_argument("DirectionLocator: no directions");
    k_ = std::min<int>(kNeighbours, static_cast<int>(dirs_.size()));
    build();
  }

  const std::vector<Vec3>& directions() const { return dirs_; }

  /// Inverse-distance weights (1/chord^2) over the 3 nearest nodes plus any
  /// node tied with the third; a query that coincides with a node returns that
  /// node alone.
  Stencil stencil(const Vec3& unit) const {
    const auto [begin, end] = cell_range(cell_of(unit));
    std::array<std::pair<double, int>, kMaxStencil + 1> best;
    best.fill({std::numeric_limits<double>::infinity(), std::numeric_limits<int>::max()});
    for (int c = begin; c < end; ++c) {
      const int j = candidates_[c];
      const Vec3 d = unit - dirs_[j];
      const std::pair<double, int> cand{dot(d, d), j};
      if (cand < best[kMaxStencil]) {
        int pos = kMaxStencil;
        while (pos > 0 && cand < best[pos - 1]) {
          best[pos] = best[pos - 1];
          --pos;
        }
        best[pos] = cand;
      }
    }
    return make_stencil(best.data(), best.size());
  }

  /// Brute-force reference for the same stencil.
  Stencil stencil_brute_force(const Vec3& unit) const {
    std::vector<std::pair<double, int>> all;
    all.reserve(dirs_.size());
    for (int j = 0; j < static_cast<int>(dirs_.size()); ++j) {
      const Vec3 d = unit - dirs_[j];
      all.push_back({dot(d, d), j});
    }
    const std::size_t m = std::min<std::size_t>(all.size(), kMaxStencil + 1);
    std::partial_sort(all.begin(), all.begin() + m, all.end());
    return make_stencil(all.data(), m);
  }

 private:
  // `sorted` holds the nearest candidates in (chord^2, index) order.
  Stencil make_stencil(const std::pair<double, int>* sorted, std::size_t n) const {
    Stencil s;
    if (sorted[0].first < 1e-28) {
      s.index[0] = sorted[0].second;
      s.weight[0] = 1.0;
      s.count = 1;
      return s;
    }
    int count = k_;
    const double edge = sorted[k_ - 1].first * (1.0 + kTieTolerance);
    while (count < kMaxStencil && static_cast<std::size_t>(count) < n && sorted[count].first <= edge) ++count;
    double total = 0.0;
    for (int i = 0; i < count; ++i) {
      s.index[i] = sorted[i].second;
      s.weight[i] = 1.0 / sorted[i].first;
      total += s.weight[i];
    }
    for (int i = 0; i < count; ++i) s.weight[i] /= total;
    s.count = count;
    return s;
  }

  int cell_of(const Vec3& d) const {
    const double ax = std::abs(d.x), ay = std::abs(d.y), az = std::abs(d.z);
    int face = 0;
    double u = 0.0, v = 0.0;
    if (ax >= ay && ax >= az) {
      face = d.x >= 0 ? 0 : 1;
      u = d.y / ax;
      v = d.z / ax;
    } else if (ay >= az) {
      face = d.y >= 0 ? 2 : 3;
      u = d.z / ay;
      v = d.x / ay;
    } else {
      face = d.z >= 0 ? 4 : 5;
      u = d.x / az;
      v = d.y / az;
    }
    const int a = std::clamp(static_cast<int>((u + 1.0) * 0.5 * cells_), 0, cells_ - 1);
    const int b = std::clamp(static_cast<int>((v + 1.0) * 0.5 * cells_), 0, cells_ - 1);
    return (face * cells_ + a) * cells_ + b;
  }

  static Vec3 face_point(int face, double u, double v) {
    switch (face) {
      case 0: return normalized({1.0, u, v});
      case 1: return normalized({-1.0, u, v});
      case 2: return normalized({v, 1.0, u});
      case 3: return normalized({v, -1.0, u});
      case 4: return normalized({u, v, 1.0});
      default: return normalized({u, v, -1.0});
    }
  }

  std::pair<int, int> cell_range(int cell) const { return {offsets_[cell], offsets_[cell + 1]}; }

  void build() {
    const int n_cells = 6 * cells_ * cells_;
    offsets_.assign(n_cells + 1, 0);
    candidates_.clear();
    constexpr int kSamples = 6;
    for (int face = 0; face < 6; ++face) {
      for (int a = 0; a < cells_; ++a) {
        for (int b = 0; b < cells_; ++b) {
          const double u0 = -1.0 + 2.0 * a / cells_, u1 = -1.0 + 2.0 * (a + 1) / cells_;
          const double v0 = -1.0 + 2.0 * b / cells_, v1 = -1.0 + 2.0 * (b + 1) / cells_;
          const Vec3 centre = face_point(face, 0.5 * (u0 + u1), 0.5 * (v0 + v1));
          double reach = 0.0;
          for (int i = 0; i <= kSamples; ++i) {
            for (int j = 0; j <= kSamples; ++j) {
              const Vec3 s = face_point(face, u0 + (u1 - u0) * i / kSamples,
                                        v0 + (v1 - v0) * j / kSamples);
              reach = std::max(reach, norm(s - centre));
            }
          }
          reach *= 1.25;  // sampled bound, padded
          std::vector<double> dist(dirs_.size());
          for (std::size_t j = 0; j < dirs_.size(); ++j) dist[j] = norm(centre - dirs_[j]);
          std::vector<double> sorted = dist;
          std::nth_element(sorted.begin(), sorted.begin() + (k_ - 1), sorted.end());
          const double limit = sorted[k_ - 1] + 2.0 * reach + 1e-12;
          const int cell = (face * cells_ + a) * cells_ + b;
          for (std::size_t j = 0; j < dirs_.size(); ++j) {
            if (dist[j] <= limit) candidates_.push_back(static_cast<int>(j));
          }
          offsets_[cell + 1] = static_cast<int>(candidates_.size());
        }
      }
    }
  }

  std::vector<Vec3> dirs_;
  int cells_ = 8;
  int k_ = kNeighbours;
  std::vector<int> offsets_;
  std::vector<int> candidates_;
};

/// Product grid: radial shells x unit directions. Node index = shell * |dirs| + dir.
class MomentumGrid {
 public:
  MomentumGrid(RadialRule radial, SphereRule directions)
      : radial_(std::move(radial)), directions_(std::move(directions)),
        locator_(directions_.nodes) {
    if (radial_.size() == 0 || directions_.size() == 0) {
      throw std::invalid_argument("MomentumGrid: empty rule");
    }
    for (double r : radial_.nodes) {
      if (!(r > 0.0)) throw std::invalid_argument("MomentumGrid: radial nodes must be > 0");
    }
    for (std::size_t i = 1; i < radial_.size(); ++i) {
      if (!(radial_.nodes[i] > radial_.nodes[i - 1])) {
        throw std::invalid_argument("MomentumGrid: radial nodes must increase");
      }
    }
  }

  static std::shared_ptr<const MomentumGrid> make(int radial_n, double r_max, RadialMapping mapping,
                                                  int direction_degree) {
    return std::make_shared<const MomentumGrid>(build_radial_rule(radial_n, r_max, mapping),
                                                build_sphere_rule(direction_degree));
  }

  const RadialRule& radial() const { return radial_; }
  const SphereRule& directions() const { return directions_; }
  const DirectionLocator& locator() const { return locator_; }

  std::size_t n_shells() const { return radial_.size(); }
  std::size_t n_directions() const { return directions_.size(); }
  std::size_t size() const { return n_shells() * n_directions(); }

  std::size_t shell_of(std::size_t node) const { return node / n_directions(); }
  std::size_t direction_of(std::size_t node) const { return node % n_directions(); }
  double radius(std::size_t node) const { return radial_.nodes[shell_of(node)]; }
  const Vec3& direction(std::size_t node) const { return directions_.nodes[direction_of(node)]; }
  Vec3 momentum(std::size_t node) const { return radius(node) * direction(node); }
  double weight(std::size_t node) const {
    return radial_.weights[shell_of(node)] * directions_.weights[direction_of(node)];
  }

  /// Shell bracket for radius r: returns (i, s) with r ~ (1-s) r_i + s r_{i+1}.
  /// Below the first shell and above the last one s = 0.
  std::pair<std::size_t, double> bracket(double r) const {
    const auto& nodes = radial_.nodes;
    if (r <= nodes.front()) return {0, 0.0};
    if (r >= nodes.back()) return {nodes.size() - 1, 0.0};
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - nodes.begin()) - 1;
    return {i, (r - nodes[i]) / (nodes[i + 1] - nodes[i])};
  }

  friend bool operator==(const MomentumGrid& a, const MomentumGrid& b) {
    return a.radial_.nodes == b.radial_.nodes && a.radial_.weights == b.radial_.weights &&
           a.radial_.r_max == b.radial_.r_max && a.directions_.nodes == b.directions_.nodes &&
           a.directions_.weights == b.directions_.weights;
  }

 private:
  RadialRule radial_;
  SphereRule directions_;
  DirectionLocator locator_;
};

using GridPtr = std::shared_ptr<const MomentumGrid>;

struct DistributionState {
  GridPtr grid;
  std::vector<double> g;  // w f at every grid node
  double time = 0.0;

  DistributionState() = default;
  DistributionState(GridPtr grid_, std::vector<double> g_, double time_ = 0.0)
      : grid(std::move(grid_)), g(std::move(g_)), time(time_) {
    if (!grid) throw std::invalid_argument("DistributionState: null grid");
    if (g.size() != grid->size()) throw std::invalid_argument("DistributionState: size mismatch");
  }

  static DistributionState zero(GridPtr grid, double time = 0.0) {
    const std::size_t n = grid->size();
    return DistributionState(std::move(grid), std::vector<double>(n, 0.0), time);
  }

  /// Samples f at every node and stores w f.
  static DistributionState from_function(GridPtr grid,
                                         const std::function<double(const Vec3&)>& f,
                                         double time = 0.0) {
    std::vector<double> g(grid->size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      g[i] = momentum_weight(grid->radius(i)) * f(grid->momentum(i));
    }
    return DistributionState(std::move(grid), std::move(g), time);
  }

  /// f at node i.
  double f_at(std::size_t i) const { return g[i] / momentum_weight(grid->radius(i)); }

  bool is_nonnegative() const {
    return std::all_of(g.begin(), g.end(), [](double v) { return v >= 0.0; });
  }
  bool is_finite() const {
    return std::all_of(g.begin(), g.end(), [](double v) { return std::isfinite(v); });
  }
};

/// Off-grid interpolation of g as a fixed linear combination of stored values:
/// linear in radius between the bracketing shells, inverse-distance weighted
/// over the nearest directions, continued linearly to g = 0 at the origin
/// below the first shell, held constant above the last shell and zero beyond
/// r_max. All weights are non-negative.
struct InterpolationTaps {
  static constexpr int kSize = 2 * DirectionLocator::kMaxStencil;
  std::array<int, kSize> index{};
  std::array<double, kSize> weight{};
  int count = 0;

  double apply(const double* g) const {
    double v = 0.0;
    for (int k = 0; k < count; ++k) v += weight[k] * g[index[k]];
    return v;
  }
};

inline InterpolationTaps interpolation_taps(const MomentumGrid& grid, double r, const Vec3& dir) {
  InterpolationTaps taps;
  if (r > grid.radial().r_max) return taps;
  const auto [shell, s] = grid.bracket(r);
  const auto st = grid.locator().stencil(dir);
  const int nd = static_cast<int>(grid.n_directions());
  const int base = static_cast<int>(shell) * nd;
  const double r1 = grid.radial().nodes.front();
  const double inner = r < r1 ? r / r1 : 1.0;
  for (int k = 0; k < st.count; ++k) {
    taps.index[taps.count] = base + st.index[k];
    taps.weight[taps.count++] = inner * (1.0 - s) * st.weight[k];
  }
  if (s != 0.0) {
    for (int k = 0; k < st.count; ++k) {
      taps.index[taps.count] = base + nd + st.index[k];
      taps.weight[taps.count++] = s * st.weight[k];
    }
  }
  return taps;
}

/// Off-grid evaluation of f through interpolation_taps.
class Interpolator {
 public:
  explicit Interpolator(const DistributionState& state) : state_(&state), grid_(state.grid.get()) {}

  /// w f at radius r along the unit direction `dir`.
  double weighted_value(double r, const Vec3& dir) const {
    return interpolation_taps(*grid_, r, dir).apply(state_->g.data());
  }

  /// f at radius r > 0 along `dir`.
  double value(double r, const Vec3& dir) const {
    const double gw = weighted_value(r, dir);
    if (gw == 0.0) return 0.0;
    return gw / momentum_weight(r);
  }

  double operator()(const Vec3& p) const {
    const double r = norm(p);
    if (r == 0.0) {
      // Limit of g / w along the inner continuation, averaged over directions.
      const SphereRule& dirs = grid_->directions();
      CompensatedSum sum;
      for (std::size_t j = 0; j < dirs.size(); ++j) sum.add(dirs.weights[j] * state_->g[j]);
      return sum.value() / (4.0 * std::numbers::pi * grid_->radial().nodes.front());
    }
    return value(r, p * (1.0 / r));
  }

 private:
  const DistributionState* state_;
  const MomentumGrid* grid_;
};

inline double evaluate(const DistributionState& state, const MomentumVector& p) {
  return Interpolator(state)(p);
}

/// Grid quadrature of the integral of |f| |p|^r dp.
inline double norm_l1r(const DistributionState& state, double r) {
  if (!(r > -3.0)) throw std::invalid_argument("norm_l1r: requires r > -3");
  const MomentumGrid& grid = *state.grid;
  CompensatedSum sum;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double rad = grid.radius(i);
    sum.add(grid.weight(i) * std::abs(state.f_at(i)) * std::pow(rad, r));
  }
  return sum.value();
}

inline double norm_linf_w(const DistributionState& state) {
  double m = 0.0;
  for (double v : state.g) m = std::max(m, std::abs(v));
  return m;
}

struct Moments {
  double number = 0.0;  // L^1
  double energy = 0.0;  // L^1_1
};

inline Moments moments(const DistributionState& state) {
  return {norm_l1r(state, 0.0), norm_l1r(state, 1.0)};
}

/// L^1_r norm of the difference of two states on the same grid.
inline double distance_l1r(const DistributionState& a, const DistributionState& b, double r) {
  if (!(r > -3.0)) throw std::invalid_argument("distance_l1r: requires r > -3");
  if (a.grid != b.grid && !(*a.grid == *b.grid)) {
    throw std::invalid_argument("distance_l1r: states live on different grids");
  }
  const MomentumGrid& grid = *a.grid;
  CompensatedSum sum;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    sum.add(grid.weight(i) * std::abs(a.f_at(i) - b.f_at(i)) * std::pow(grid.radius(i), r));
  }
  return sum.value();
}

// Initial-data families.

/// f0 = eps e^{-|p|} / (1 + |p|), so w f0 = eps |p| / (1 + |p|) < eps.
struct CanonicalSmall {
  double epsilon = 0.01;
};

/// f0 = eps e^{-|p|} (1 + beta (p^.axis)^2) / ((1 + beta)(1 + |p|)).
struct Anisotropic {
  double epsilon = 0.01;
  double beta = 1.0;
  Vec3 axis{0.0, 0.0, 1.0};
};

/// f = e^{-|p|/T}.
struct PureEquilibrium {
  double temperature = 1.0;
};

using InitialFamily = std::variant<CanonicalSmall, Anisotropic, PureEquilibrium>;

/// w f0 for the family at momentum p (|p| > 0).
inline double initial_weighted_value(const InitialFamily& family, const Vec3& p) {
  const double r = norm(p);
  return std::visit(
      [&](const auto& fam) -> double {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, CanonicalSmall>) {
          return fam.epsilon * r / (1.0 + r);
        } else if constexpr (std::is_same_v<T, Anisotropic>) {
          const double c = dot(p, normalized(fam.axis)) / r;
          return fam.epsilon * r * (1.0 + fam.beta * c * c) / ((1.0 + fam.beta) * (1.0 + r));
        } else {
          return r * std::exp(r * (1.0 - 1.0 / fam.temperature));
        }
      },
      family);
}

inline void validate_family(const InitialFamily& family) {
  std::visit(
      [](const auto& fam) {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, CanonicalSmall>) {
          if (!(fam.epsilon > 0.0)) throw std::invalid_argument("canonical_small: epsilon must be > 0");
        } else if constexpr (std::is_same_v<T, Anisotropic>) {
          if (!(fam.epsilon > 0.0)) throw std::invalid_argument("anisotropic: epsilon must be > 0");
          if (!(fam.beta >= 0.0)) throw std::invalid_argument("anisotropic: beta must be >= 0");
          if (!(norm(fam.axis) > 0.0)) throw std::invalid_argument("anisotropic: axis must be nonzero");
        } else {
          if (!(fam.temperature > 0.0)) {
            throw std::invalid_argument("pure_equilibrium: temperature must be > 0");
          }
        }
      },
      family);
}

inline DistributionState init_family(GridPtr grid, const InitialFamily& family) {
  validate_family(family);
  std::vector<double> g(grid->size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = initial_weighted_value(family, grid->momentum(i));
  return DistributionState(std::move(grid), std::move(g), 0.0);
}

// Snapshot text format (one token group per line, '#' lines are comments):
//
//   mboltz-snapshot 1
//   time <t>
//   radial <n> <r_max> <mapping>
//   <r_i> <weight_i>                      (n lines)
//   directions <m> <degree> <n_polar> <n_azimuth>
//   <x> <y> <z> <weight>                  (m lines)
//   values <n*m>
//   <g_k>                                 (n*m lines, node order shell-major)
//   end
//
// Reals are written with 17 significant digits, which round-trips doubles.

namespace detail {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline void write_snapshot(std::ostream& os, const DistributionState& state,
                           const std::string& comment_header = {}) {
  using detail::fmt17;
  const MomentumGrid& grid = *state.grid;
  if (!comment_header.empty()) os << comment_header;
  os << "mboltz-snapshot 1\n";
  os << "time " << fmt17(state.time) << "\n";
  const RadialRule& rr = grid.radial();
  os << "radial " << rr.size() << " " << fmt17(rr.r_max) << " " << to_string(rr.mapping) << "\n";
  for (std::size_t i = 0; i < rr.size(); ++i) {
    os << fmt17(rr.nodes[i]) << " " << fmt17(rr.weights[i]) << "\n";
  }
  const SphereRule& sr = grid.directions();
  os << "directions " << sr.size() << " " << sr.degree << " " << sr.n_polar << " " << sr.n_azimuth
     << "\n";
  for (std::size_t j = 0; j < sr.size(); ++j) {
    const Vec3& u = sr.nodes[j];
    os << fmt17(u.x) << " " << fmt17(u.y) << " " << fmt17(u.z) << " " << fmt17(sr.weights[j])
       << "\n";
  }
  os << "values " << state.g.size() << "\n";
  for (double v : state.g) os << fmt17(v) << "\n";
  os << "end\n";
}

inline std::string serialize_snapshot(const DistributionState& state) {
  std::ostringstream os;
  write_snapshot(os, state);
  return os.str();
}

inline DistributionState read_snapshot(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> std::istringstream {
    while (std::getline(is, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      return std::istringstream(line);
    }
    throw IoError("snapshot: unexpected end of input after line " + std::to_string(line_no));
  };
  auto fail = [&](const std::string& what) {
    throw IoError("snapshot line " + std::to_string(line_no) + ": " + what);
  };
  auto real = [&](std::istringstream& ls) {
    std::string tok;
    if (!(ls >> tok)) fail("missing number");
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') fail("bad number '" + tok + "'");
    return v;
  };
  auto expect = [&](std::istringstream& ls, const std::string& key) {
    std::string tok;
    if (!(ls >> tok) || tok != key) fail("expected '" + key + "'");
  };

  {
    auto ls = next();
    expect(ls, "mboltz-snapshot");
    int version = 0;
    if (!(ls >> version) || version != 1) fail("unsupported snapshot version");
  }
  double time = 0.0;
  {
    auto ls = next();
    expect(ls, "time");
    time = real(ls);
  }
  RadialRule rr;
  {
    auto ls = next();
    expect(ls, "radial");
    std::size_t n = 0;
    std::string mapping;
    if (!(ls >> n)) fail("bad radial count");
    rr.r_max = real(ls);
    if (!(ls >> mapping)) fail("missing radial mapping");
    try {
      rr.mapping = parse_radial_mapping(mapping);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    for (std::size_t i = 0; i < n; ++i) {
      auto row = next();
      rr.nodes.push_back(real(row));
      rr.weights.push_back(real(row));
    }
  }
  SphereRule sr;
  {
    auto ls = next();
    expect(ls, "directions");
    std::size_t m = 0;
    if (!(ls >> m >> sr.degree >> sr.n_polar >> sr.n_azimuth)) fail("bad directions header");
    for (std::size_t j = 0; j < m; ++j) {
      auto row = next();
      Vec3 u;
      u.x = real(row);
      u.y = real(row);
      u.z = real(row);
      sr.nodes.push_back(u);
      sr.weights.push_back(real(row));
    }
  }
  std::vector<double> g;
  {
    auto ls = next();
    expect(ls, "values");
    std::size_t count = 0;
    if (!(ls >> count)) fail("bad values count");
    if (count != rr.size() * sr.size()) fail("values count does not match grid");
    g.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
      auto row = next();
      g.push_back(real(row));
    }
  }
  {
    auto ls = next();
    expect(ls, "end");
  }
  GridPtr grid;
  try {
    grid = std::make_shared<const MomentumGrid>(std::move(rr), std::move(sr));
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("snapshot: invalid grid: ") + e.what());
  }
  return DistributionState(std::move(grid), std::move(g), time);
}

inline DistributionState parse_snapshot(const std::string& text) {
  std::istringstream is(text);
  return read_snapshot(is);
}

}  // namespace mboltz
