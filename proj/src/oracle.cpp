#include "gapcert/oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <vector>

#include "gapcert/errors.hpp"
#include "gapcert/quadrature.hpp"

namespace gapcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Symmetric tridiagonal eigenvalues by Sturm-sequence bisection.
// Deterministic and robust across the extreme weight ranges the radial
// problems produce.
// ---------------------------------------------------------------------------

struct Tridiag {
  Eigen::VectorXd d;  // diagonal
  Eigen::VectorXd e;  // sub-diagonal (size N-1)
};

int sturm_count_below(const Tridiag& T, double sigma) {
  const int n = static_cast<int>(T.d.size());
  int count = 0;
  double q = T.d[0] - sigma;
  if (q < 0) ++count;
  for (int i = 1; i < n; ++i) {
    double denom = q;
    if (std::abs(denom) < 1e-290) denom = std::copysign(1e-290, denom == 0 ? -1.0 : denom);
    q = T.d[i] - sigma - T.e[i - 1] * T.e[i - 1] / denom;
    if (q < 0) ++count;
  }
  return count;
}

// k-th smallest eigenvalue, k >= 1.
double tridiag_kth_eigenvalue(const Tridiag& T, int k) {
  const int n = static_cast<int>(T.d.size());
  if (n < k) fail(ErrorKind::MeshNotConverged, "mesh too coarse for requested eigenvalue");
  double lo = T.d[0], hi = T.d[0];
  for (int i = 0; i < n; ++i) {
    const double off = (i > 0 ? std::abs(T.e[i - 1]) : 0.0) +
                       (i + 1 < n ? std::abs(T.e[i]) : 0.0);
    lo = std::min(lo, T.d[i] - off);
    hi = std::max(hi, T.d[i] + off);
  }
  for (int it = 0; it < 110 && hi - lo > 1e-15 * (std::abs(lo) + std::abs(hi)) + 1e-300;
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count_below(T, mid) >= k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// 1D finite-volume assembly on a node set, log-domain weight.
//
// Stiffness uses edge-midpoint weights; mass and the optional diagonal terms
// (potential, centrifugal) integrate the weight over each node's control
// volume with 2-point Gauss.
// ---------------------------------------------------------------------------

struct LineProblem {
  std::vector<double> nodes;
  std::function<double(double)> logw;
  std::function<double(double)> potential;  // may be null
  double centrifugal = 0.0;                 // coefficient of 1/x^2 (radial sectors)
  bool drop_first_node = false;             // Dirichlet at the left end
};

bool g_singular_mass_warned = false;

Tridiag assemble_line(const LineProblem& p) {
  const auto& r = p.nodes;
  const int N = static_cast<int>(r.size());
  // common shift keeps everything within double range
  double shift = -kInf;
  for (int i = 0; i < N; ++i) shift = std::max(shift, p.logw(r[i]));
  for (int i = 0; i + 1 < N; ++i) shift = std::max(shift, p.logw(0.5 * (r[i] + r[i + 1])));
  auto w = [&](double x) {
    const double g = p.logw(x) - shift;
    return g < -690.0 ? 0.0 : std::exp(g);
  };

  Eigen::VectorXd cond(N - 1), mass = Eigen::VectorXd::Zero(N),
                  diag = Eigen::VectorXd::Zero(N);
  const double g1 = 0.5 - 0.5 / std::sqrt(3.0), g2 = 0.5 + 0.5 / std::sqrt(3.0);
  for (int i = 0; i + 1 < N; ++i) {
    const double a = r[i], b = r[i + 1], h = b - a, xm = 0.5 * (a + b);
    cond[i] = w(xm) / h;
    const struct { double lo, hi; int node; } halves[2] = {{a, xm, i}, {xm, b, i + 1}};
    for (const auto& hv : halves) {
      const double x1 = hv.lo + (hv.hi - hv.lo) * g1;
      const double x2 = hv.lo + (hv.hi - hv.lo) * g2;
      const double len = 0.5 * (hv.hi - hv.lo);
      const double w1 = w(x1), w2 = w(x2);
      mass[hv.node] += len * (w1 + w2);
      double pot = 0.0;
      if (p.potential) pot += len * (p.potential(x1) * w1 + p.potential(x2) * w2);
      if (p.centrifugal != 0.0)
        pot += p.centrifugal * len * (w1 / (x1 * x1) + w2 / (x2 * x2));
      diag[hv.node] += pot;
    }
  }

  const int i0 = p.drop_first_node ? 1 : 0;
  const int M = N - i0;
  Tridiag T;
  T.d.resize(M);
  T.e.resize(M - 1);
  Eigen::VectorXd sdiag = Eigen::VectorXd::Zero(N);
  for (int i = 0; i + 1 < N; ++i) {
    sdiag[i] += cond[i];
    sdiag[i + 1] += cond[i];
  }
  for (int i = 0; i < M; ++i) {
    double m = mass[i0 + i];
    if (m < 1e-300) {
      if (!g_singular_mass_warned) {
        std::cerr << "[gapcert] warning: mass node underflow, clamped at 1e-300\n";
        g_singular_mass_warned = true;
      }
      m = 1e-300;
    }
    mass[i0 + i] = m;
  }
  for (int i = 0; i < M; ++i)
    T.d[i] = (sdiag[i0 + i] + diag[i0 + i]) / mass[i0 + i];
  for (int i = 0; i + 1 < M; ++i)
    T.e[i] = -cond[i0 + i] / std::sqrt(mass[i0 + i] * mass[i0 + i + 1]);
  return T;
}

// ---------------------------------------------------------------------------
// Radial meshes: a blend of uniform spacing with the family-adapted grading
// (equal increments of y = r^alpha/alpha for power laws, equal mass
// quantiles otherwise) resolves both the r = 0 coefficient degeneracy and
// the decaying tail.
// ---------------------------------------------------------------------------

std::vector<double> graded_radial_mesh(const NormalizedMeasure& m, double r_lo,
                                       double r_hi, int mesh) {
  std::vector<double> nodes;
  nodes.reserve(static_cast<size_t>(mesh) + 2);
  const int half = mesh / 2;
  for (int i = 0; i <= mesh - half; ++i)
    nodes.push_back(r_lo + (r_hi - r_lo) * i / (mesh - half));

  const RadialMeasure* rm = m.base.is_radial() ? &m.base.radial() : nullptr;
  if (rm && rm->family) {
    const double alpha = rm->family->alpha;
    const double y_lo = std::pow(r_lo, alpha) / alpha;
    const double y_hi = std::pow(r_hi, alpha) / alpha;
    for (int i = 1; i < half; ++i) {
      const double y = y_lo + (y_hi - y_lo) * i / half;
      nodes.push_back(std::pow(alpha * y, 1.0 / alpha));
    }
  } else if (m.base.is_radial()) {
    // equal-mass quantiles from a fine cumulative table
    const int fine = 8 * mesh;
    std::vector<double> cum(fine + 1, 0.0);
    double gmax = -kInf;
    for (int i = 0; i <= fine; ++i) {
      const double r = r_lo + (r_hi - r_lo) * i / fine;
      gmax = std::max(gmax, m.base.log_radial_weight(r));
    }
    for (int i = 1; i <= fine; ++i) {
      const double ra = r_lo + (r_hi - r_lo) * (i - 1) / fine;
      const double rb = r_lo + (r_hi - r_lo) * i / fine;
      const double g = m.base.log_radial_weight(0.5 * (ra + rb)) - gmax;
      cum[i] = cum[i - 1] + (g < -690 ? 0.0 : std::exp(g)) * (rb - ra);
    }
    const double total = cum[fine];
    if (total > 0) {
      int j = 0;
      for (int i = 1; i < half; ++i) {
        const double target = total * i / half;
        while (j < fine && cum[j + 1] < target) ++j;
        const double frac =
            cum[j + 1] > cum[j] ? (target - cum[j]) / (cum[j + 1] - cum[j]) : 0.5;
        nodes.push_back(r_lo + (r_hi - r_lo) * (j + frac) / fine);
      }
    }
  }

  std::sort(nodes.begin(), nodes.end());
  std::vector<double> out;
  out.reserve(nodes.size());
  const double tol = (r_hi - r_lo) * 1e-9;
  for (double x : nodes)
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  out.back() = r_hi;
  out.front() = r_lo;
  return out;
}

std::vector<double> interval_mesh(const NormalizedMeasure& m, double a, double b,
                                  int mesh) {
  // 1D problems run on [a, b] in the x variable; reuse the radial grading on
  // |x| by mirroring when the interval straddles the origin.
  std::vector<double> nodes;
  if (m.base.is_radial() && a < 0 && b > 0) {
    const double R = std::max(-a, b);
    std::vector<double> half = graded_radial_mesh(m, 0.0, R, mesh / 2);
    for (double r : half) {
      if (-r >= a) nodes.push_back(-r);
      if (r <= b) nodes.push_back(r);
    }
    nodes.push_back(a);
    nodes.push_back(b);
  } else {
    for (int i = 0; i <= mesh; ++i) nodes.push_back(a + (b - a) * i / mesh);
  }
  std::sort(nodes.begin(), nodes.end());
  std::vector<double> out;
  const double tol = (b - a) * 1e-9;
  for (double x : nodes)
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  out.front() = a;
  out.back() = b;
  return out;
}

// ---------------------------------------------------------------------------
// Sector solves
// ---------------------------------------------------------------------------

double solve_radial_sector(const NormalizedMeasure& m, double r_lo, double r_hi,
                           int mesh, int ell, int kth,
                           const std::function<double(double)>& U) {
  const int n = m.base.dim();
  LineProblem p;
  p.nodes = graded_radial_mesh(m, r_lo, r_hi, mesh);
  p.logw = [&m](double r) { return m.base.log_radial_weight(r); };
  if (U) p.potential = U;
  if (ell >= 1) {
    p.centrifugal = static_cast<double>(ell) * (ell + n - 2);
    p.drop_first_node = r_lo == 0.0;
  }
  return tridiag_kth_eigenvalue(assemble_line(p), kth);
}

double solve_interval(const NormalizedMeasure& m, double a, double b, int mesh, int kth,
                      const std::function<double(double)>& U_of_x) {
  LineProblem p;
  p.nodes = interval_mesh(m, a, b, mesh);
  if (m.base.is_radial()) {
    const RadialMeasure& rm = m.base.radial();
    auto W = rm.profile;
    p.logw = [W](double x) { return -W(std::abs(x)); };
  } else {
    const PotentialEvaluator& pe = m.base.evaluator();
    auto V = pe.value;
    p.logw = [V](double x) {
      Eigen::VectorXd p1(1);
      p1[0] = x;
      return -V(p1);
    };
  }
  if (U_of_x) p.potential = U_of_x;
  return tridiag_kth_eigenvalue(assemble_line(p), kth);
}

// gap over all sectors, n >= 2
double gap_once(const NormalizedMeasure& m, double r_lo, double r_hi, int mesh,
                int l_max, int* sector_out) {
  double best = kInf;
  int best_l = 0;
  for (int ell = 0; ell <= std::max(1, l_max); ++ell) {
    const double v = ell == 0
                         ? solve_radial_sector(m, r_lo, r_hi, mesh, 0, 2, nullptr)
                         : solve_radial_sector(m, r_lo, r_hi, mesh, ell, 1, nullptr);
    if (v < best) {
      best = v;
      best_l = ell;
    }
  }
  if (sector_out) *sector_out = best_l;
  return best;
}

// Largest radius at which the radial weight stays within the representable
// dynamic range of the assembled operator.
bool weight_representable(const NormalizedMeasure& m, double R) {
  if (!m.base.is_radial()) return false;
  double peak = -kInf;
  for (int i = 1; i <= 64; ++i)
    peak = std::max(peak, m.base.log_radial_weight(R * i / 64.0));
  return m.base.log_radial_weight(R) > peak - 580.0;
}

struct TruncatedRange {
  double r_hi;
  double trunc_err;
};

// Doubles the truncation radius until the quantity of interest stabilizes.
// Stops early (keeping the last observed difference as the error) once the
// weight at the doubled radius would leave the representable range.
TruncatedRange stabilize_truncation(const NormalizedMeasure& m, double r_lo,
                                    int probe_mesh, double rel_tol,
                                    const std::function<double(double)>& value_at) {
  double R = std::max(m.tail_radius, r_lo * 1.25 + 1.0);
  double v1 = value_at(R);
  double err = 0.0;
  for (int i = 0; i < 9; ++i) {
    const double R2 = 2.0 * R;
    if (!weight_representable(m, R2)) break;
    const double v2 = value_at(R2);
    err = std::abs(v2 - v1);
    R = R2;
    v1 = v2;
    if (err <= rel_tol * std::max(std::abs(v2), 1e-12)) break;
  }
  (void)probe_mesh;
  return {R, err};
}

void check_mesh_stability(double d1, double d2, double scale) {
  // second-order scheme: halving the mesh should shrink the Richardson
  // difference by about 4; anything not clearly below 1 signals trouble
  if (d2 > 1e-9 * scale && d1 > 1e-9 * scale && d1 > 0.95 * d2)
    fail(ErrorKind::MeshNotConverged, "Richardson ratio unstable under refinement");
}

std::pair<double, double> interval_of(const Cell& cell) {
  if (cell.dim != 1) fail(ErrorKind::UnsupportedGeometry, "not a 1D cell");
  if (cell.shape == Cell::Shape::Box) return {cell.lo[0], cell.hi[0]};
  if (cell.shape == Cell::Shape::Ball) return {-cell.radius, cell.radius};
  fail(ErrorKind::UnsupportedGeometry,
       "1D oracle needs an interval cell, got " + cell.describe());
}

} // namespace

// ---------------------------------------------------------------------------
// radial_sector_gap
// ---------------------------------------------------------------------------

SpectralResult radial_sector_gap(const NormalizedMeasure& measure, const Cell& cell,
                                 const RadialOracleOptions& opt) {
  if (!measure.base.is_radial())
    fail(ErrorKind::UnsupportedGeometry, "radial oracle needs a radial measure");
  if (opt.mesh < 256) fail(ErrorKind::SchemaError, "oracle mesh must be >= 256");
  const int n = measure.base.dim();
  SpectralResult res;
  res.method = OracleMethod::radial_sector;
  res.mesh_size = opt.mesh;

  if (n == 1) {
    double a = 0.0, b = kInf;
    if (!cell.is_full_space()) std::tie(a, b) = interval_of(cell);
    double trunc_err = 0.0;
    if (std::isinf(b)) {
      auto at = [&](double R) {
        return solve_interval(measure, -R, R, opt.mesh / 2, 2, nullptr);
      };
      TruncatedRange tr =
          stabilize_truncation(measure, 0.0, opt.mesh / 2, opt.tail_rel_tol, at);
      a = -tr.r_hi;
      b = tr.r_hi;
      trunc_err = tr.trunc_err;
    }
    const double v4 = solve_interval(measure, a, b, opt.mesh / 4, 2, nullptr);
    const double v2 = solve_interval(measure, a, b, opt.mesh / 2, 2, nullptr);
    const double v1 = solve_interval(measure, a, b, opt.mesh, 2, nullptr);
    const double d1 = std::abs(v1 - v2), d2 = std::abs(v2 - v4);
    check_mesh_stability(d1, d2, std::abs(v1) + 1e-30);
    res.value = v1;
    res.error_estimate = d1 + trunc_err + 1e-12 * (1.0 + std::abs(v1));
    return res;
  }

  auto [r_lo, r_hi] = cell.radial_range();
  double trunc_err = 0.0;
  if (std::isinf(r_hi)) {
    auto at = [&](double R) {
      return gap_once(measure, r_lo, R, opt.mesh / 2, std::min(opt.l_max, 1), nullptr);
    };
    TruncatedRange tr = stabilize_truncation(measure, r_lo, opt.mesh / 2,
                                             opt.tail_rel_tol, at);
    r_hi = tr.r_hi;
    trunc_err = tr.trunc_err;
  }

  int sector = -1;
  const double v4 = gap_once(measure, r_lo, r_hi, opt.mesh / 4, opt.l_max, nullptr);
  const double v2 = gap_once(measure, r_lo, r_hi, opt.mesh / 2, opt.l_max, nullptr);
  const double v1 = gap_once(measure, r_lo, r_hi, opt.mesh, opt.l_max, &sector);
  const double d1 = std::abs(v1 - v2), d2 = std::abs(v2 - v4);
  check_mesh_stability(d1, d2, std::abs(v1) + 1e-30);

  res.value = v1;
  res.error_estimate = d1 + trunc_err + 1e-12 * (1.0 + std::abs(v1));
  res.sector_l = sector;
  return res;
}

// ---------------------------------------------------------------------------
// schrodinger_ground_energy
// ---------------------------------------------------------------------------

SpectralResult schrodinger_ground_energy(const NormalizedMeasure& measure,
                                         const Cell& cell, const ScalarField& U,
                                         int mesh) {
  if (mesh < 256) fail(ErrorKind::SchemaError, "oracle mesh must be >= 256");
  const int n = measure.base.dim();

  auto solve_at = [&](double r_lo, double r_hi, int m) {
    if (n == 1) {
      auto Upoint = U.point;
      auto Ux = [Upoint](double x) {
        Eigen::VectorXd p(1);
        p[0] = x;
        return Upoint(p);
      };
      return solve_interval(measure, r_lo, r_hi, m, 1, Ux);
    }
    if (!U.is_radial())
      fail(ErrorKind::UnsupportedGeometry,
           "ground-energy oracle needs a radial potential for n >= 2");
    return solve_radial_sector(measure, r_lo, r_hi, m, 0, 1, U.radial->f);
  };

  double a, b;
  if (n == 1 && !cell.is_full_space()) {
    std::tie(a, b) = interval_of(cell);
  } else if (n == 1) {
    a = 0;
    b = kInf;
  } else {
    std::tie(a, b) = cell.radial_range();
  }

  double trunc_err = 0.0;
  if (std::isinf(b)) {
    auto at = [&](double R) { return n == 1 ? solve_at(-R, R, mesh / 2)
                                            : solve_at(a, R, mesh / 2); };
    TruncatedRange tr = stabilize_truncation(measure, std::max(a, 0.0), mesh / 2, 2e-4, at);
    b = tr.r_hi;
    trunc_err = tr.trunc_err;
    if (n == 1) a = -b;
  }

  const double v4 = solve_at(a, b, mesh / 4);
  const double v2 = solve_at(a, b, mesh / 2);
  const double v1 = solve_at(a, b, mesh);
  const double d1 = std::abs(v1 - v2), d2 = std::abs(v2 - v4);
  check_mesh_stability(d1, d2, std::abs(v1) + 1e-30);

  SpectralResult res;
  res.value = v1;
  res.error_estimate = d1 + trunc_err + 1e-12 * (1.0 + std::abs(v1));
  res.method = OracleMethod::radial_sector;
  res.mesh_size = mesh;
  return res;
}

// ---------------------------------------------------------------------------
// 2D grid oracle
// ---------------------------------------------------------------------------

namespace {

struct Grid2D {
  int nx, ny;
  double h;
  Eigen::VectorXd x0;
  Eigen::SparseMatrix<double> S;
  Eigen::VectorXd mass;  // diagonal
};

int checked_panels(double len, double h) {
  const double q = len / h;
  const int m = static_cast<int>(std::lround(q));
  if (m < 2 || std::abs(q - m) > 1e-9 * std::max(1.0, q))
    fail(ErrorKind::SchemaError, "grid spacing h must divide the box edges");
  return m;
}

Grid2D assemble_grid(const PotentialEvaluator& pe, const Cell& box, double h) {
  if (box.shape != Cell::Shape::Box || box.dim != 2)
    fail(ErrorKind::UnsupportedGeometry, "grid oracle needs a 2D Box cell");
  Grid2D g;
  g.h = h;
  g.nx = checked_panels(box.hi[0] - box.lo[0], h) + 1;
  g.ny = checked_panels(box.hi[1] - box.lo[1], h) + 1;
  g.x0 = box.lo;
  const int N = g.nx * g.ny;
  auto idx = [&](int i, int j) { return j * g.nx + i; };
  auto point = [&](double i, double j) {
    Eigen::VectorXd p(2);
    p[0] = box.lo[0] + i * h;
    p[1] = box.lo[1] + j * h;
    return p;
  };

  // shift keeps e^{-V} in range on the box
  double vmin = kInf;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) vmin = std::min(vmin, pe.value(point(i, j)));

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(5) * N);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(N);
  auto add_edge = [&](int a, int b, double w) {
    diag[a] += w;
    diag[b] += w;
    trips.emplace_back(a, b, -w);
    trips.emplace_back(b, a, -w);
  };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i + 1 < g.nx; ++i)
      add_edge(idx(i, j), idx(i + 1, j),
               std::exp(-(pe.value(point(i + 0.5, j)) - vmin)));
  for (int j = 0; j + 1 < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      add_edge(idx(i, j), idx(i, j + 1),
               std::exp(-(pe.value(point(i, j + 0.5)) - vmin)));
  for (int k = 0; k < N; ++k) trips.emplace_back(k, k, diag[k]);
  g.S.resize(N, N);
  g.S.setFromTriplets(trips.begin(), trips.end());

  g.mass.resize(N);
  bool clamped = false;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double area = h * h;
      if (i == 0 || i + 1 == g.nx) area *= 0.5;
      if (j == 0 || j + 1 == g.ny) area *= 0.5;
      double m = area * std::exp(-(pe.value(point(i, j)) - vmin));
      if (m < 1e-300) {
        m = 1e-300;
        clamped = true;
      }
      g.mass[idx(i, j)] = m;
    }
  if (clamped && !g_singular_mass_warned) {
    std::cerr << "[gapcert] warning: grid mass underflow, clamped at 1e-300\n";
    g_singular_mass_warned = true;
  }
  return g;
}

// second-smallest generalized eigenvalue of (S, diag(mass)); the smallest is
// 0 with constant eigenvector
double grid_second_eigenvalue(const Grid2D& g) {
  const int N = static_cast<int>(g.mass.size());
  const Eigen::VectorXd rs = g.mass.cwiseSqrt().cwiseInverse();

  if (N <= 2000) {
    Eigen::MatrixXd B = Eigen::MatrixXd(g.S);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) B(i, j) *= rs[i] * rs[j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(1);
  }

  // shift-invert power iteration on B = D^{-1/2} S D^{-1/2}, deflating the
  // weighted constant (the kernel direction z = D^{1/2} 1)
  Eigen::SparseMatrix<double> B = g.S;
  for (int k = 0; k < B.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(B, k); it; ++it)
      it.valueRef() *= rs[it.row()] * rs[it.col()];
  double max_diag = 0.0;
  for (int i = 0; i < N; ++i) max_diag = std::max(max_diag, B.coeff(i, i));
  const double tau = 1e-6 * max_diag;
  Eigen::SparseMatrix<double> A = B;
  for (int i = 0; i < N; ++i) A.coeffRef(i, i) += tau;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
  if (solver.info() != Eigen::Success)
    fail(ErrorKind::MeshNotConverged, "grid factorization failed");

  Eigen::VectorXd z = g.mass.cwiseSqrt();
  z.normalize();
  Eigen::VectorXd v(N);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      v[j * g.nx + i] = i + M_PI * j + 0.37 * std::sin(2.1 * i + 1.3 * j);
  v -= z * z.dot(v);
  v.normalize();
  double lam = v.dot(B * v);
  for (int it = 0; it < 800; ++it) {
    Eigen::VectorXd w = solver.solve(v);
    w -= z * z.dot(w);
    const double norm = w.norm();
    if (!(norm > 0)) fail(ErrorKind::MeshNotConverged, "inverse iteration collapsed");
    w /= norm;
    const double lam_new = w.dot(B * w);
    const bool settled = std::abs(lam_new - lam) <= 1e-12 * std::max(1.0, std::abs(lam_new));
    lam = lam_new;
    v = w;
    if (settled && it >= 8) {
      const double resid = (B * v - lam * v).norm();
      if (resid <= 1e-9 * std::max(1.0, std::abs(lam))) return lam;
    }
  }
  const double resid = (B * v - lam * v).norm();
  if (resid > 1e-7 * std::max(1.0, std::abs(lam)))
    fail(ErrorKind::MeshNotConverged, "inverse iteration did not converge");
  return lam;
}

} // namespace

int grid_node_count(const Cell& box, double h) {
  if (box.dim == 1) return checked_panels(box.hi[0] - box.lo[0], h) + 1;
  return (checked_panels(box.hi[0] - box.lo[0], h) + 1) *
         (checked_panels(box.hi[1] - box.lo[1], h) + 1);
}

SpectralResult grid_gap(const PotentialEvaluator& pe, const Cell& box, double h) {
  if (box.shape != Cell::Shape::Box)
    fail(ErrorKind::UnsupportedGeometry, "grid oracle needs a Box cell");
  if (box.dim == 1) {
    // 1D boxes route through the line solver
    NormalizedMeasure m = unnormalized(MeasureSpec::from_evaluator(pe), box.hi[0]);
    const int mesh = std::max(256, checked_panels(box.hi[0] - box.lo[0], h));
    const double v1 = solve_interval(m, box.lo[0], box.hi[0], mesh, 2, nullptr);
    const double v2 = solve_interval(m, box.lo[0], box.hi[0], mesh / 2, 2, nullptr);
    SpectralResult res;
    res.value = v1;
    res.error_estimate = std::abs(v1 - v2) + 1e-12 * (1 + std::abs(v1));
    res.method = OracleMethod::grid_fd;
    res.mesh_size = mesh;
    return res;
  }
  const Grid2D fine = assemble_grid(pe, box, h);
  const double v1 = grid_second_eigenvalue(fine);
  // coarse companion for the Richardson estimate
  const int nx = fine.nx - 1;
  const int nx2 = std::max(2, nx / 2);
  const double h2 = (box.hi[0] - box.lo[0]) / nx2;
  const Grid2D coarse = assemble_grid(pe, box, h2);
  const double v2 = grid_second_eigenvalue(coarse);

  SpectralResult res;
  res.value = v1;
  res.error_estimate = std::abs(v1 - v2) + 1e-12 * (1 + std::abs(v1));
  res.method = OracleMethod::grid_fd;
  res.mesh_size = fine.nx * fine.ny;
  return res;
}

double rayleigh_quotient(const Eigen::VectorXd& u, const PotentialEvaluator& pe,
                         const Cell& box, double h) {
  const Grid2D g = assemble_grid(pe, box, h);
  if (u.size() != g.mass.size())
    fail(ErrorKind::SchemaError, "grid function size mismatch");
  const double num = u.dot(g.S * u);
  const double total = g.mass.sum();
  const double mean = g.mass.dot(u) / total;
  const Eigen::VectorXd centered = u.array() - mean;
  const double den = centered.cwiseProduct(g.mass.asDiagonal() * centered).sum();
  if (den <= 1e-14 * u.squaredNorm() * g.mass.maxCoeff())
    fail(ErrorKind::ZeroVariance, "trial function is constant");
  return num / den;
}

} // namespace gapcert
