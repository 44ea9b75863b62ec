#include "fraclab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace fraclab {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// nearest grid index for a coordinate that must be grid-aligned
long aligned_index(double x, double h, const char* what) {
  const double q = x / h;
  const long i = std::lround(q);
  if (std::abs(q - i) > 1e-9 * std::max(1.0, std::abs(q)) + 1e-12) {
    throw invalid_input(std::string(what) + ": coordinate " + std::to_string(x) +
                        " is not grid-aligned");
  }
  return i;
}

}  // namespace

Grid::Grid(int dim_, int n_, double length_) : dim(dim_), n(n_), length(length_) {
  if (dim != 1 && dim != 2) throw invalid_input("grid: dim must be 1 or 2");
  if (n < 8 || !is_pow2(n)) throw invalid_input("grid: n must be a power of two >= 8");
  if (!(length > 0.0) || !std::isfinite(length))
    throw invalid_input("grid: length must be positive and finite");
}

std::size_t Grid::size() const {
  std::size_t s = static_cast<std::size_t>(n);
  return dim == 1 ? s : s * s;
}

double Grid::cell_volume() const {
  const double hh = h();
  return dim == 1 ? hh : hh * hh;
}

double Grid::torus_dist(int mx) const {
  int m = ((mx % n) + n) % n;
  m = std::min(m, n - m);
  return m * h();
}

double Grid::torus_dist(int mx, int my) const {
  const double dx = torus_dist(mx);
  const double dy = torus_dist(my);
  return std::hypot(dx, dy);
}

SampledFunction::SampledFunction(const Grid& g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.size())
    throw invalid_input("sampled function: value count does not match grid");
}

void SampledFunction::check_finite() const {
  for (double v : values) {
    if (!std::isfinite(v)) throw invalid_input("sampled function: non-finite value");
  }
}

double Box::measure(int dim) const {
  double m = width(0);
  if (dim == 2) m *= width(1);
  return m;
}

double Box::diam(int dim) const {
  if (dim == 1) return width(0);
  return std::hypot(width(0), width(1));
}

Box Box::scaled(double lambda, int dim) const {
  Box out;
  for (int a = 0; a < dim; ++a) {
    const double c = center(a);
    const double half = 0.5 * width(a) * lambda;
    out.lo[a] = c - half;
    out.hi[a] = c + half;
  }
  return out;
}

Domain Domain::full(const Grid& g) {
  Box b;
  for (int a = 0; a < g.dim; ++a) {
    b.lo[a] = 0.0;
    b.hi[a] = g.length;
  }
  return Domain{{b}};
}

double Domain::measure(int dim) const {
  double m = 0.0;
  for (const Box& b : boxes) m += b.measure(dim);
  return m;
}

void Domain::validate(const Grid& g) const {
  if (boxes.empty()) throw invalid_input("domain: empty");
  const double h = g.h();
  for (const Box& b : boxes) {
    for (int a = 0; a < g.dim; ++a) {
      const long i0 = aligned_index(b.lo[a], h, "domain box");
      const long i1 = aligned_index(b.hi[a], h, "domain box");
      if (i1 <= i0) throw invalid_input("domain: box is empty");
      if (i0 < 0 || i1 > g.n) throw invalid_input("domain: box exceeds the torus box");
    }
  }
  // pairwise disjointness on the index lattice
  auto runs = domain_runs(*this, g);
  for (std::size_t k = 1; k < runs.size(); ++k) {
    if (runs[k].begin < runs[k - 1].end)
      throw invalid_input("domain: boxes overlap");
  }
}

bool Domain::contains(const Grid& g, std::size_t linear_index) const {
  const double h = g.h();
  const long ix = static_cast<long>(linear_index % g.n);
  const long iy = g.dim == 2 ? static_cast<long>(linear_index / g.n) : 0;
  for (const Box& b : boxes) {
    bool in = ix >= aligned_index(b.lo[0], h, "domain box") &&
              ix < aligned_index(b.hi[0], h, "domain box");
    if (g.dim == 2)
      in = in && iy >= aligned_index(b.lo[1], h, "domain box") &&
           iy < aligned_index(b.hi[1], h, "domain box");
    if (in) return true;
  }
  return false;
}

namespace {
// circular distance from x to the closed interval [a,b] on a circle of size L
double circle_interval_dist(double x, double a, double b, double L) {
  double m = std::fmod(x - a, L);
  if (m < 0) m += L;
  const double w = b - a;
  if (m <= w) return 0.0;
  return std::min(L - m, m - w);
}
}  // namespace

double Domain::distance(const Grid& g, const std::array<double, 2>& x) const {
  double best = g.length;
  for (const Box& b : boxes) {
    double d;
    if (g.dim == 1) {
      d = circle_interval_dist(x[0], b.lo[0], b.hi[0], g.length);
    } else {
      const double dx = circle_interval_dist(x[0], b.lo[0], b.hi[0], g.length);
      const double dy = circle_interval_dist(x[1], b.lo[1], b.hi[1], g.length);
      d = std::hypot(dx, dy);
    }
    best = std::min(best, d);
  }
  return best;
}

std::vector<IndexRun> domain_runs(const Domain& d, const Grid& g) {
  std::vector<IndexRun> runs;
  const double h = g.h();
  for (const Box& b : d.boxes) {
    const long x0 = aligned_index(b.lo[0], h, "domain box");
    const long x1 = aligned_index(b.hi[0], h, "domain box");
    if (g.dim == 1) {
      runs.push_back({static_cast<std::size_t>(x0), static_cast<std::size_t>(x1)});
    } else {
      const long y0 = aligned_index(b.lo[1], h, "domain box");
      const long y1 = aligned_index(b.hi[1], h, "domain box");
      for (long y = y0; y < y1; ++y) {
        runs.push_back({static_cast<std::size_t>(y * g.n + x0),
                        static_cast<std::size_t>(y * g.n + x1)});
      }
    }
  }
  std::sort(runs.begin(), runs.end(),
            [](const IndexRun& a, const IndexRun& b) { return a.begin < b.begin; });
  return runs;
}

std::size_t runs_point_count(const std::vector<IndexRun>& runs) {
  std::size_t c = 0;
  for (const auto& r : runs) c += r.end - r.begin;
  return c;
}

void FracParams::validate_basic(int dim) const {
  if (!(s > 0.0 && s < 1.0)) throw invalid_input("params: s must lie in (0,1)");
  if (!(p >= 2.0)) throw invalid_input("params: p must lie in [2,inf)");
  if (!(eps >= 0.0)) throw invalid_input("params: eps must be >= 0");
  if (eps > 0.0 && !(s + eps < 1.0))
    throw invalid_input("params: s + eps must stay below 1");
  if (t != 0.0 && !(t > 0.0 && t < dim))
    throw invalid_input("params: t must lie in (0,dim)");
}

// --- smooth profiles ------------------------------------------------------

namespace {
double cinf_ramp(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
}  // namespace

double smooth_step_cinf(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = cinf_ramp(t);
  const double b = cinf_ramp(1.0 - t);
  return a / (a + b);
}

double bump_cinf(double r) {
  const double r2 = r * r;
  if (r2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - r2));
}

double smooth_step_quintic(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

// --- RNG -------------------------------------------------------------------

std::uint64_t Rng::next_u64() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::u01() { return (next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double a, double b) { return a + (b - a) * u01(); }

int Rng::uniform_int(int n) {
  return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
}

// --- presets ----------------------------------------------------------------

namespace {

double get_param(const PresetParams& p, const std::string& key, double dflt) {
  auto it = p.find(key);
  return it == p.end() ? dflt : it->second;
}

double require_param(const PresetParams& p, const std::string& key,
                     const std::string& preset) {
  auto it = p.find(key);
  if (it == p.end())
    throw invalid_input("preset " + preset + ": missing parameter '" + key + "'");
  return it->second;
}

// support box for compactly supported presets; default is the centered half box
Box support_box(const PresetParams& prm, const Grid& g) {
  Box b;
  const double L = g.length;
  b.lo[0] = get_param(prm, "lo", 0.25 * L);
  b.hi[0] = get_param(prm, "hi", 0.75 * L);
  if (g.dim == 2) {
    b.lo[1] = get_param(prm, "lo1", get_param(prm, "lo", 0.25 * L));
    b.hi[1] = get_param(prm, "hi1", get_param(prm, "hi", 0.75 * L));
  }
  for (int a = 0; a < g.dim; ++a) {
    if (!(b.lo[a] >= 0.0 && b.hi[a] <= L && b.hi[a] > b.lo[a]))
      throw invalid_input("preset: support box outside the grid box");
  }
  return b;
}

}  // namespace

SampledFunction make_preset(const std::string& name, const Grid& grid,
                            const PresetParams& params) {
  SampledFunction u(grid);
  const double L = grid.length;
  const int n = grid.n;

  auto for_each_node = [&](auto&& f) {
    if (grid.dim == 1) {
      for (int i = 0; i < n; ++i) u.values[i] = f(grid.coord(i), 0.0);
    } else {
      for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
          u.values[static_cast<std::size_t>(iy) * n + ix] =
              f(grid.coord(ix), grid.coord(iy));
    }
  };

  if (name == "constant") {
    const double v = get_param(params, "value", 1.0);
    for_each_node([&](double, double) { return v; });
  } else if (name == "sine") {
    const double k = get_param(params, "k", 1.0);
    if (k != std::floor(k)) throw invalid_input("preset sine: k must be an integer");
    const int axis = static_cast<int>(get_param(params, "axis", 0.0));
    if (axis < 0 || axis >= grid.dim)
      throw invalid_input("preset sine: axis outside the grid dimension");
    const double w = 2.0 * M_PI * k / L;
    for_each_node([&](double x, double y) { return std::sin(w * (axis == 0 ? x : y)); });
  } else if (name == "gaussian_bump") {
    const Box b = support_box(params, grid);
    const double sigma = get_param(params, "sigma", 0.125 * b.width(0));
    if (!(sigma > 0.0)) throw invalid_input("preset gaussian_bump: sigma must be > 0");
    const double margin = get_param(params, "margin", 0.25 * b.width(0));
    for_each_node([&](double x, double y) {
      double v = 1.0;
      const double xs[2] = {x, y};
      for (int a = 0; a < grid.dim; ++a) {
        const double c = b.center(a);
        v *= std::exp(-0.5 * (xs[a] - c) * (xs[a] - c) / (sigma * sigma));
        v *= smooth_step_cinf((xs[a] - b.lo[a]) / margin);
        v *= smooth_step_cinf((b.hi[a] - xs[a]) / margin);
      }
      return v;
    });
  } else if (name == "hat") {
    const Box b = support_box(params, grid);
    for_each_node([&](double x, double y) {
      double v = 1.0;
      const double xs[2] = {x, y};
      for (int a = 0; a < grid.dim; ++a) {
        const double c = b.center(a);
        const double half = 0.5 * b.width(a);
        v *= std::max(0.0, 1.0 - std::abs(xs[a] - c) / half);
      }
      return v;
    });
  } else if (name == "random_trig") {
    const double seed_d = require_param(params, "seed", name);
    const int kmax = static_cast<int>(get_param(params, "kmax", 8.0));
    if (kmax < 1) throw invalid_input("preset random_trig: kmax must be >= 1");
    Rng rng(static_cast<std::uint64_t>(seed_d));
    if (grid.dim == 1) {
      std::vector<double> a(kmax + 1), b(kmax + 1);
      for (int k = 1; k <= kmax; ++k) {
        a[k] = rng.uniform(-1.0, 1.0) / k;
        b[k] = rng.uniform(-1.0, 1.0) / k;
      }
      for_each_node([&](double x, double) {
        double v = 0.0;
        for (int k = 1; k <= kmax; ++k) {
          const double w = 2.0 * M_PI * k * x / L;
          v += a[k] * std::cos(w) + b[k] * std::sin(w);
        }
        return v;
      });
    } else {
      struct Harmonic { int kx, ky; double amp, phase; };
      std::vector<Harmonic> hs;
      for (int ky = 0; ky <= kmax; ++ky)
        for (int kx = (ky == 0 ? 1 : -kmax); kx <= kmax; ++kx)
          hs.push_back({kx, ky, rng.uniform(-1.0, 1.0) / (1 + std::abs(kx) + ky),
                        rng.uniform(0.0, 2.0 * M_PI)});
      for_each_node([&](double x, double y) {
        double v = 0.0;
        for (const auto& hh : hs)
          v += hh.amp * std::cos(2.0 * M_PI * (hh.kx * x + hh.ky * y) / L + hh.phase);
        return v;
      });
    }
  } else {
    throw invalid_input("unknown preset id '" + name + "'");
  }
  u.check_finite();
  return u;
}

double mean_value(const SampledFunction& u, const Domain& d) {
  d.validate(u.grid);
  const auto runs = domain_runs(d, u.grid);
  const std::size_t count = runs_point_count(runs);
  if (count == 0) throw invalid_input("mean_value: empty domain");
  // deterministic accumulation: per-run sums, then sequential combine
  double total = 0.0;
  for (const auto& r : runs) {
    double s = 0.0;
    for (std::size_t i = r.begin; i < r.end; ++i) s += u.values[i];
    total += s;
  }
  return total / static_cast<double>(count);
}

// --- serialization ----------------------------------------------------------

namespace {
void put_u32_le(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_f64_le(std::string& s, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}
std::uint32_t get_u32_le(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}
double get_f64_le(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | p[i];
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}
}  // namespace

void save_binary(const SampledFunction& u, const std::string& path) {
  std::string buf;
  buf.reserve(16 + 8 * u.values.size());
  put_u32_le(buf, static_cast<std::uint32_t>(u.grid.dim));
  put_u32_le(buf, static_cast<std::uint32_t>(u.grid.n));
  put_f64_le(buf, u.grid.length);
  for (double v : u.values) put_f64_le(buf, v);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_input("cannot open '" + path + "' for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

SampledFunction load_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_input("cannot open '" + path + "'");
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 16) throw invalid_input("binary file too short: " + path);
  const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
  const int dim = static_cast<int>(get_u32_le(p));
  const int n = static_cast<int>(get_u32_le(p + 4));
  const double L = get_f64_le(p + 8);
  Grid g(dim, n, L);
  if (buf.size() != 16 + 8 * g.size())
    throw invalid_input("binary file has wrong payload size: " + path);
  std::vector<double> vals(g.size());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = get_f64_le(p + 16 + 8 * i);
  return SampledFunction(g, std::move(vals));
}

void write_csv(const SampledFunction& u, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw invalid_input("cannot open '" + path + "' for writing");
  char line[128];
  if (u.grid.dim == 1) {
    out << "index,x,value\n";
    for (int i = 0; i < u.grid.n; ++i) {
      std::snprintf(line, sizeof line, "%d,%.17g,%.17g\n", i, u.grid.coord(i),
                    u.values[i]);
      out << line;
    }
  } else {
    out << "index,x,y,value\n";
    for (int iy = 0; iy < u.grid.n; ++iy)
      for (int ix = 0; ix < u.grid.n; ++ix) {
        const std::size_t k = static_cast<std::size_t>(iy) * u.grid.n + ix;
        std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g\n", k, u.grid.coord(ix),
                      u.grid.coord(iy), u.values[k]);
        out << line;
      }
  }
}

}  // namespace fraclab
