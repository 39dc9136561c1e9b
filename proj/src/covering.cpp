#include "locomp/covering.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "locomp/errors.hpp"
#include "locomp/geometry.hpp"

namespace locomp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// acosh(1 + x) without cancellation for small x.
double acosh1p(double x) { return std::log1p(x + std::sqrt(x * (x + 2.0))); }

// Bergman distance between polar points (b1, t1) and (b2, t2); the metric has curvature -4,
// so cosh(2d) - 1 = 2 sinh^2(b1 - b2) + 2 sinh(2 b1) sinh(2 b2) sin^2(dt / 2).
double polar_distance(double b1, double b2, double dt) {
  const double sh = std::sinh(b1 - b2);
  const double sd = std::sin(0.5 * dt);
  return 0.5 * acosh1p(2.0 * sh * sh + 2.0 * std::sinh(2.0 * b1) * std::sinh(2.0 * b2) * sd * sd);
}

double wrap_angle(double t) {
  double a = std::fmod(t, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

// Angular distance from t to the closed arc [t0, t1] (all in [0, 2 pi]).
double arc_gap(double t, double t0, double t1) {
  if (t >= t0 && t <= t1) return 0.0;
  auto circ = [](double a, double b) {
    const double d = std::abs(a - b);
    return std::min(d, kTwoPi - d);
  };
  return std::min(circ(t, t0), circ(t, t1));
}

Point polar_point(double b, double theta) {
  const double c = std::cosh(b);
  const cplx dir = std::polar(1.0, theta);
  return Point::on_shell(std::span<const cplx>(&dir, 1), 1.0 / (c * c));
}

std::vector<double> real_coords(const Point& z) {
  std::vector<double> x;
  for (int i = 0; i < z.dim(); ++i) {
    x.push_back(z[i].real());
    x.push_back(z[i].imag());
  }
  return x;
}

Point from_real(const std::vector<double>& x) {
  std::array<cplx, kMaxDim> c{};
  for (std::size_t i = 0; i < x.size() / 2; ++i) c[i] = cplx(x[2 * i], x[2 * i + 1]);
  return Point::from_coords({c.data(), x.size() / 2});
}

// Smallest sector count whose sectors in the annulus [bi, bo] have diameter <= 2r.
int sector_count(double bi, double bo, double r) {
  const double w = bo - bi;
  for (int m = 1; m <= 1000000; ++m) {
    const double dt = std::min(kTwoPi / m, kPi);
    const double bound = std::min(2.0 * bo, w + bergman_arc_distance(bo, dt));
    if (bound <= 2.0 * r) return m;
  }
  throw ValidationError("covering: annulus needs more than 1e6 sectors; reduce the region radius");
}

}  // namespace

std::string to_string(Metric m) { return m == Metric::bergman ? "bergman" : "euclidean"; }

double bergman_arc_distance(double b, double dtheta) { return polar_distance(b, b, dtheta); }

std::string Cell::type_name() const {
  switch (type) {
    case Type::disk: return "disk";
    case Type::sector: return "sector";
    case Type::cube: return "cube";
  }
  return "?";
}

bool Cell::contains(const Point& z) const {
  if (type == Type::cube) {
    const std::vector<double> x = real_coords(z);
    const double side = params[0];
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] < params[i + 1] || x[i] >= params[i + 1] + side) return false;
    }
    return true;
  }
  const double b = bergman_radius(z);
  if (type == Type::disk) return b < params[0];
  if (b < params[0] || b >= params[1]) return false;
  const double t = wrap_angle(std::arg(z[0]));
  return t >= params[2] && t < params[3];
}

double Cell::distance(const Point& z) const {
  if (type == Type::cube) {
    const std::vector<double> x = real_coords(z);
    const double side = params[0];
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double lo = params[i + 1], hi = lo + side;
      const double d = x[i] < lo ? lo - x[i] : (x[i] > hi ? x[i] - hi : 0.0);
      s += d * d;
    }
    return std::sqrt(s);
  }
  const double b = bergman_radius(z);
  if (type == Type::disk) return std::max(0.0, b - params[0]);
  const double bi = params[0], bo = params[1];
  const double dt = arc_gap(wrap_angle(std::arg(z[0])), params[2], params[3]);
  if (dt == 0.0) return std::max({0.0, bi - b, b - bo});
  // Nearest point on a radial edge: minimize over b' in [bi, bo]; the optimum of the
  // unconstrained problem is tanh(2 b') = tanh(2 b) cos(dt).
  const double c = std::cos(dt);
  double bp = c > 0.0 ? 0.5 * std::atanh(std::tanh(2.0 * b) * c) : 0.0;
  bp = std::clamp(bp, bi, bo);
  return polar_distance(b, bp, dt);
}

std::vector<Point> Cell::boundary_samples(int n, int per_edge) const {
  std::vector<Point> out;
  if (type == Type::cube) {
    const int d = 2 * n;
    const double side = params[0];
    // Corners and edge midpoints of the cube.
    for (int mask = 0; mask < (1 << d); ++mask) {
      std::vector<double> x(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] = params[static_cast<std::size_t>(i) + 1] + ((mask >> i) & 1) * side;
      out.push_back(from_real(x));
      for (int i = 0; i < d; ++i) {
        std::vector<double> y = x;
        y[static_cast<std::size_t>(i)] = params[static_cast<std::size_t>(i) + 1] + 0.5 * side;
        out.push_back(from_real(y));
      }
    }
    return out;
  }
  if (type == Type::disk) {
    for (int k = 0; k < 4 * per_edge; ++k) out.push_back(polar_point(params[0], kTwoPi * k / (4 * per_edge)));
    return out;
  }
  const double bi = params[0], bo = params[1], t0 = params[2], t1 = params[3];
  for (int k = 0; k <= per_edge; ++k) {
    const double f = static_cast<double>(k) / per_edge;
    const double b = bi + (bo - bi) * f;
    const double t = t0 + (t1 - t0) * f;
    out.push_back(polar_point(b, t0));
    out.push_back(polar_point(b, t1));
    out.push_back(polar_point(bo, t));
    if (bi > 0.0) out.push_back(polar_point(bi, t));
  }
  return out;
}

bool Covering::in_region(const Point& z) const {
  if (metric == Metric::bergman) return bergman_radius(z) <= region_radius;
  return z.norm() <= region_radius;
}

int Covering::locate(const Point& z) const {
  for (std::size_t j = 0; j < cells.size(); ++j) {
    if (cells[j].contains(z)) return static_cast<int>(j);
  }
  return -1;
}

namespace {

Covering ball_covering(double r, double R) {
  Covering c;
  c.metric = Metric::bergman;
  c.n = 1;
  c.r = r;
  c.region_radius = R;
  if (R <= r) {
    // The whole region has diameter 2R <= 2r.
    c.cells.push_back({Cell::Type::disk, {R * (1.0 + 1e-12)}});
    c.overlap_bound = 1;
    return c;
  }
  const double w = 0.5 * r;
  const int annuli = static_cast<int>(std::ceil(R / w - 1e-12));
  c.cells.push_back({Cell::Type::disk, {w}});
  std::vector<std::pair<double, int>> rings;  // (inner radius, sectors)
  for (int k = 1; k < annuli; ++k) {
    const double bi = k * w;
    // The outermost annulus is closed at R so that the region boundary is covered.
    const double bo = k + 1 == annuli ? std::max((k + 1) * w, R) * (1.0 + 1e-12) : (k + 1) * w;
    const int m = sector_count(bi, bo, r);
    rings.emplace_back(bi, m);
    for (int j = 0; j < m; ++j) {
      c.cells.push_back({Cell::Type::sector, {bi, bo, kTwoPi * j / m, j + 1 == m ? kTwoPi : kTwoPi * (j + 1) / m}});
    }
  }
  // Overlap bound: a point at radius b meets G_j only if F_j has radius within r of b and
  // angular offset at most theta with sin(theta) = sinh(2r) / sinh(2b).
  std::vector<double> probes;
  for (int i = 0; i <= 400; ++i) probes.push_back(R * i / 400.0);
  for (const auto& ring : rings) {
    for (double e : {ring.first - r, ring.first + w + r, ring.first, ring.first + w}) {
      if (e >= 0.0 && e <= R) probes.push_back(e);
    }
  }
  int best = 1;
  for (double b : probes) {
    int count = b <= w + r ? 1 : 0;
    double theta = kPi;
    if (b > r) {
      const double s = std::sinh(2.0 * r) / std::sinh(2.0 * b);
      if (s < 1.0) theta = std::asin(s);
    }
    for (const auto& [bi, m] : rings) {
      if (bi > b + r || bi + w < b - r) continue;
      const double dt = kTwoPi / m;
      count += std::min(m, static_cast<int>(std::ceil(2.0 * theta / dt)) + 2);
    }
    best = std::max(best, count);
  }
  c.overlap_bound = best;
  return c;
}

Covering plane_covering(int n, double r, double R) {
  Covering c;
  c.metric = Metric::euclidean;
  c.n = n;
  c.r = r;
  c.region_radius = R;
  const int d = 2 * n;
  const double side = 2.0 * r / std::sqrt(static_cast<double>(d));
  const int K = static_cast<int>(std::ceil(2.0 * R / side - 1e-12));
  const long total = static_cast<long>(std::pow(K, d));
  if (total > 5000000) throw ValidationError("covering: too many cubes; reduce the region radius");
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  for (long t = 0; t < total; ++t) {
    long rem = t;
    for (int i = d - 1; i >= 0; --i) {
      idx[static_cast<std::size_t>(i)] = static_cast<int>(rem % K);
      rem /= K;
    }
    Cell cell{Cell::Type::cube, {side}};
    for (int i = 0; i < d; ++i) cell.params.push_back(-R + idx[static_cast<std::size_t>(i)] * side);
    if (cell.distance(Point::origin(n)) <= R) c.cells.push_back(std::move(cell));
  }
  // Along each axis the window [x - r, x + r] meets at most floor(2r / side) + 2 closed cells.
  const int per_axis = static_cast<int>(std::floor(2.0 * r / side + 1e-12)) + 2;
  c.overlap_bound = static_cast<int>(std::pow(per_axis, d));
  return c;
}

}  // namespace

Covering build_covering(const SpaceDescriptor& space, double r, double region_radius) {
  space.validate();
  if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("covering radius r must be positive");
  if (!(region_radius > 0.0) || !std::isfinite(region_radius)) {
    throw ValidationError("covering region must be a metric ball of finite positive radius");
  }
  if (space.is_bergman()) {
    if (space.n != 1) throw ValidationError("ball coverings are implemented for n = 1 only");
    return ball_covering(r, region_radius);
  }
  return plane_covering(space.n, r, region_radius);
}

CoveringReport verify_covering(const Covering& c, int samples, std::uint64_t seed) {
  if (samples < 0) throw ValidationError("sample count must be nonnegative");
  CoveringReport rep;
  std::vector<Point> pts;
  const double R = c.region_radius;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  if (c.metric == Metric::bergman) {
    // Polar grid with beta-spacing about r/4 along both radii and arcs.
    const double step = c.r / 4.0;
    const int levels = static_cast<int>(std::ceil(R / step)) + 1;
    for (int i = 0; i < levels; ++i) {
      const double b = std::min(R, (i + 0.5) * step);
      const double arc = std::max(1e-12, 0.5 * std::sinh(2.0 * b));
      const int m = std::max(8, static_cast<int>(std::ceil(kTwoPi * arc / step)));
      for (int j = 0; j < m; ++j) pts.push_back(polar_point(b, kTwoPi * (j + 0.37) / m));
    }
    for (int k = 0; k < samples; ++k) {
      const double b = R * unif(rng);
      pts.push_back(polar_point(b, kTwoPi * unif(rng)));
    }
  } else {
    const int d = 2 * c.n;
    const double side = 2.0 * c.r / std::sqrt(static_cast<double>(d));
    const double step = c.n == 1 ? side / 3.0 : side;
    const int g = static_cast<int>(std::ceil(2.0 * R / step));
    const long total = static_cast<long>(std::pow(g, d));
    std::vector<double> x(static_cast<std::size_t>(d));
    for (long t = 0; t < total; ++t) {
      long rem = t;
      for (int i = 0; i < d; ++i) {
        x[static_cast<std::size_t>(i)] = -R + (static_cast<double>(rem % g) + 0.41) * step;
        rem /= g;
      }
      const Point p = from_real(x);
      if (p.norm() <= R) pts.push_back(p);
    }
    for (int k = 0; k < samples; ++k) {
      for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] = R * (2.0 * unif(rng) - 1.0);
      const Point p = from_real(x);
      if (p.norm() <= R) pts.push_back(p);
    }
  }

  rep.samples = static_cast<int>(pts.size());
  for (const Point& p : pts) {
    if (!c.in_region(p)) continue;
    int inside = 0, near = 0;
    for (const Cell& cell : c.cells) {
      if (cell.contains(p)) ++inside;
      if (cell.distance(p) <= c.r) ++near;
    }
    if (inside == 0) rep.gaps_found = true;
    if (inside > 1) rep.overlaps_found = true;
    rep.max_overlap = std::max(rep.max_overlap, near);
  }

  for (const Cell& cell : c.cells) {
    const std::vector<Point> bs = cell.boundary_samples(c.n, 16);
    for (std::size_t i = 0; i < bs.size(); ++i) {
      for (std::size_t j = i + 1; j < bs.size(); ++j) {
        const double d = c.metric == Metric::bergman ? bergman_metric(BallPoint(bs[i]), BallPoint(bs[j]))
                                                     : distance(bs[i], bs[j]);
        rep.max_diameter = std::max(rep.max_diameter, d);
      }
    }
  }
  return rep;
}

}  // namespace locomp
