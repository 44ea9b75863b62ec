#ifndef FRACLAB_GRID_HPP
#define FRACLAB_GRID_HPP

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fraclab {

/** Thrown when inputs violate a documented precondition. The CLI maps this
 * to exit code 2. */
class invalid_input : public std::runtime_error {
 public:
  explicit invalid_input(const std::string& what) : std::runtime_error(what) {}
};

/** Uniform periodic grid on the torus [0,L)^dim, dim = 1 or 2.
 * Nodes sit at x_i = i*h with h = L/n; all quadrature is the
 * rectangle rule sum(values)*h^dim. */
struct Grid {
  int dim = 1;
  int n = 0;          // points per axis, power of two, >= 8
  double length = 1.0;

  Grid() = default;
  Grid(int dim_, int n_, double length_);

  double h() const { return length / n; }
  std::size_t size() const;
  double cell_volume() const;

  // coordinate of node along one axis
  double coord(int i) const { return i * h(); }

  // torus distance between two nodes given their index separation per axis
  double torus_dist(int mx) const;              // 1D
  double torus_dist(int mx, int my) const;      // 2D

  bool operator==(const Grid& o) const {
    return dim == o.dim && n == o.n && length == o.length;
  }
};

/** Real function sampled at the grid nodes. Values stored row-major
 * (index = iy*n + ix in 2D). */
struct SampledFunction {
  Grid grid;
  std::vector<double> values;

  SampledFunction() = default;
  explicit SampledFunction(const Grid& g) : grid(g), values(g.size(), 0.0) {}
  SampledFunction(const Grid& g, std::vector<double> v);

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const { return values.size(); }

  void check_finite() const;  // throws invalid_input on NaN/Inf
};

/** Half-open axis-aligned box inside [0,L)^dim. Only the first `dim`
 * coordinates are meaningful. */
struct Box {
  std::array<double, 2> lo{{0.0, 0.0}};
  std::array<double, 2> hi{{0.0, 0.0}};

  static Box interval(double a, double b) { return Box{{{a, 0.0}}, {{b, 0.0}}}; }
  static Box square(double ax, double bx, double ay, double by) {
    return Box{{{ax, ay}}, {{bx, by}}};
  }

  double width(int axis) const { return hi[axis] - lo[axis]; }
  double center(int axis) const { return 0.5 * (lo[axis] + hi[axis]); }
  double measure(int dim) const;
  double diam(int dim) const;  // Euclidean diameter of the closed box

  /** Concentric box scaled by lambda about the center. */
  Box scaled(double lambda, int dim) const;
};

/** Finite union of pairwise disjoint grid-aligned boxes. */
struct Domain {
  std::vector<Box> boxes;

  static Domain full(const Grid& g);
  static Domain of_box(const Box& b) { return Domain{{b}}; }

  bool empty() const { return boxes.empty(); }
  double measure(int dim) const;

  /** Validates alignment/disjointness against a grid; throws invalid_input. */
  void validate(const Grid& g) const;

  bool contains(const Grid& g, std::size_t linear_index) const;

  /** Torus distance from a point to the domain (0 inside). */
  double distance(const Grid& g, const std::array<double, 2>& x) const;
};

/** Maximal runs of consecutive linear indices belonging to a domain,
 * sorted ascending. In 2D each run stays within one grid row. */
struct IndexRun {
  std::size_t begin = 0;  // linear index, inclusive
  std::size_t end = 0;    // linear index, exclusive
};

std::vector<IndexRun> domain_runs(const Domain& d, const Grid& g);
std::size_t runs_point_count(const std::vector<IndexRun>& runs);

/** Exponent bundle used across the nonlocal operators. */
struct FracParams {
  double s = 0.5;    // in (0,1)
  double p = 2.0;    // in [2,inf) for pairings/solver
  double eps = 0.0;  // >= 0
  double t = 0.0;    // internal Riesz exponent, in (0,dim)

  void validate_basic(int dim) const;
};

// --- presets -------------------------------------------------------------

using PresetParams = std::map<std::string, double>;

/** Builds one of the named sample functions:
 *   constant     value
 *   sine         k (integer harmonic), axis (2D)
 *   gaussian_bump lo,hi (support box per axis), sigma, margin
 *   hat          lo,hi (support box per axis)
 *   random_trig  seed (required), kmax
 * All presets are deterministic; random_trig uses the seed bit-exactly. */
SampledFunction make_preset(const std::string& name, const Grid& grid,
                            const PresetParams& params);

/** Mean value (u)_D = |D|^{-1} * integral_D u by the grid quadrature. */
double mean_value(const SampledFunction& u, const Domain& d);

// --- smooth profiles shared by presets and cutoffs -----------------------

/** C^inf step: 0 for t<=0, 1 for t>=1 (exp-based construction). */
double smooth_step_cinf(double t);
/** C^inf bump: exp(1 - 1/(1-r^2)) on |r|<1, 0 outside; peak value 1. */
double bump_cinf(double r);
/** Quintic smoothstep, clamped: t^3(10 - 15t + 6t^2). */
double smooth_step_quintic(double t);

// --- serialization -------------------------------------------------------

/** Flat binary format: 16-byte header (uint32 dim, uint32 n, double L,
 * all little-endian) followed by n^dim little-endian doubles. */
void save_binary(const SampledFunction& u, const std::string& path);
SampledFunction load_binary(const std::string& path);

/** CSV with header "index,x[,y],value". */
void write_csv(const SampledFunction& u, const std::string& path);

// --- deterministic RNG helper -------------------------------------------

/** Thin wrapper over mt19937_64 that avoids std distributions so that
 * streams are bit-identical across standard libraries. */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  std::uint64_t next_u64();
  double u01();                        // in [0,1)
  double uniform(double a, double b);  // in [a,b)
  int uniform_int(int n);              // in [0,n)

 private:
  std::uint64_t state_;
};

}  // namespace fraclab

#endif
