#include "magstrip/grid.hpp"

#include <algorithm>
#include <cmath>

#include "magstrip/errors.hpp"

namespace magstrip {

void StripGeometry::validate() const {
  if (!(window_l >= 0.0)) throw DomainError("window half-length must be non-negative");
  if (!(truncation_L > window_l)) throw DomainError("truncation L must exceed the window half-length");
}

namespace {

// Faces of a segment [a, b] marched with the local spacing and then
// stretched so that the last face lands on b.
std::vector<double> segment_faces(double a, double b, const std::function<double(double)>& spacing) {
  std::vector<double> f{a};
  double x = a;
  while (true) {
    const double s = spacing(x);
    if (!(s > 0.0)) throw DomainError("grid spacing must be positive");
    if (x + s >= b) {
      const double frac = (b - x) / s;
      if (frac < 0.5 && f.size() > 1) {
        f.back() = b;  // absorb the remainder into the previous cell
      } else {
        f.push_back(b);
      }
      break;
    }
    x += s;
    f.push_back(x);
  }
  const double stretch = (b - a) / (f.back() - a);
  for (double& v : f) v = a + (v - a) * stretch;
  f.back() = b;
  return f;
}

double frac_distance(double v) { return std::abs(v - std::round(v)); }

}  // namespace

Grid1D make_cell_grid(double a, double b, std::vector<double> breakpoints,
                      const std::function<double(double)>& spacing) {
  if (!(b > a)) throw DomainError("empty interval");
  std::erase_if(breakpoints, [&](double t) { return !(t > a && t < b); });
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  breakpoints.insert(breakpoints.begin(), a);
  breakpoints.push_back(b);

  Grid1D g;
  g.faces.push_back(a);
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    const auto f = segment_faces(breakpoints[k], breakpoints[k + 1], spacing);
    g.faces.insert(g.faces.end(), f.begin() + 1, f.end());
  }
  for (std::size_t i = 0; i + 1 < g.faces.size(); ++i) g.centers.push_back(0.5 * (g.faces[i] + g.faces[i + 1]));
  return g;
}

Grid1D refine(const Grid1D& g) {
  Grid1D r;
  for (std::size_t i = 0; i + 1 < g.faces.size(); ++i) {
    r.faces.push_back(g.faces[i]);
    r.faces.push_back(0.5 * (g.faces[i] + g.faces[i + 1]));
  }
  r.faces.push_back(g.faces.back());
  for (std::size_t i = 0; i + 1 < r.faces.size(); ++i) r.centers.push_back(0.5 * (r.faces[i] + r.faces[i + 1]));
  return r;
}

Grid2D make_grid(const StripGeometry& geom, const GridOptions& opt, const std::vector<Point>& singular,
                 double field_extent) {
  geom.validate();
  if (!(opt.h > 0.0)) throw DomainError("grid spacing must be positive");
  if (!(opt.growth >= 1.0)) throw DomainError("grid growth factor must be >= 1");
  const double L = geom.truncation_L;
  const double l = geom.window_l;
  for (const Point& p : singular)
    if (!(std::abs(p.x1) < L && p.x2 > 0.0 && p.x2 < kPi)) throw GeometryError("singular point outside the grid");

  // x-lattice hx (k + s): window-aligned when the window spans a cell
  const bool aligned = l > 0.0 && 2.0 * l >= opt.h;
  int m = aligned ? static_cast<int>(std::ceil(2.0 * l / opt.h - 1e-9)) : 0;
  double hx = aligned ? 2.0 * l / m : opt.h;
  double shift = aligned && m % 2 == 0 ? 0.5 : 0.0;
  auto clear_of_nodes = [&] {
    return std::all_of(singular.begin(), singular.end(),
                       [&](const Point& p) { return frac_distance(p.x1 / hx - shift) >= 0.25; });
  };
  for (int attempt = 0; !clear_of_nodes(); ++attempt) {
    if (attempt > 64) throw GeometryError("could not place singular points inside grid cells");
    if (aligned) {
      ++m;
      hx = 2.0 * l / m;
      shift = m % 2 == 0 ? 0.5 : 0.0;
    } else {
      // put the first singular point at a cell midpoint, nudging further if needed
      const double a = std::abs(singular.front().x1);
      hx = a / (std::round(a / opt.h) + 0.5 + attempt);
    }
  }

  double core = opt.core_half_width;
  if (core < 0.0) {
    core = std::max(l, field_extent);
    for (const Point& p : singular) core = std::max(core, std::abs(p.x1));
    core += 2.0;
  }
  if (opt.growth == 1.0) core = L;
  core = std::min(core, L);

  std::vector<double> pos;
  for (int k = 0;; ++k) {
    const double v = hx * (k + shift);
    if (v <= 0.0) continue;
    if (v > core || v >= L - 1e-9 * hx) break;
    pos.push_back(v);
  }
  double last = pos.empty() ? 0.0 : pos.back();
  double step = hx;
  while (last < L) {
    if (opt.growth > 1.0) step = std::min(step * opt.growth, std::max(opt.h_max, hx));
    last = std::min(last + step, L);
    if (L - last < 1e-9 * hx) last = L;
    pos.push_back(last);
  }
  if (pos.size() >= 3) {
    const std::size_t n = pos.size();
    if (pos[n - 1] - pos[n - 2] < 0.3 * (pos[n - 2] - pos[n - 3])) pos.erase(pos.end() - 2);
  }

  Grid2D g;
  g.geom = geom;
  g.hx = hx;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) g.x.push_back(-*it);
  if (shift == 0.0) g.x.push_back(0.0);
  g.x.insert(g.x.end(), pos.begin(), pos.end());

  int ny = std::max(3, static_cast<int>(std::lround(kPi / opt.h)));
  auto y_clear = [&](int n) {
    const double hy = kPi / n;
    return std::all_of(singular.begin(), singular.end(),
                       [&](const Point& p) { return frac_distance(p.x2 / hy) >= 0.25; });
  };
  for (int attempt = 0; !y_clear(ny); ++attempt) {
    if (attempt > 64) throw GeometryError("could not place singular points inside grid cells");
    ++ny;
  }
  g.ny = ny;
  g.hy = kPi / ny;

  const int nx = g.nx();
  g.index.assign(static_cast<std::size_t>(nx) * (ny + 1), -1);
  int n = 0;
  for (int i = 1; i + 1 < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      if (j == 0) {
        if (!(std::abs(g.x[i]) < l)) continue;
        ++g.window_nodes;
      }
      g.index[static_cast<std::size_t>(i) * (ny + 1) + j] = n++;
    }
    if (l > 0.0 && std::abs(std::abs(g.x[i]) - l) < 1e-12 * std::max(1.0, l)) g.window_edge_on_node = true;
  }
  g.unknowns = n;
  return g;
}

}  // namespace magstrip
