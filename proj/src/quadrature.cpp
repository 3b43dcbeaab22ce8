#include "gapcert/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "gapcert/errors.hpp"

namespace gapcert::quad {

namespace {

// Kronrod-15 abscissae on [0,1] (positive half) and weights; the embedded
// Gauss-7 rule uses the odd-indexed nodes.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Panel {
  double a, b;
  double kron, err;
  bool operator<(const Panel& o) const { return err < o.err; }
};

Panel eval_panel(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kXgk[i]);
    fv[14 - i] = f(c + h * kXgk[i]);
  }
  fv[7] = f(c);
  double kron = kWgk[7] * fv[7];
  double gauss = kWg[3] * fv[7];
  for (int i = 0; i < 7; ++i) {
    kron += kWgk[i] * (fv[i] + fv[14 - i]);
    if (i % 2 == 1) gauss += kWg[i / 2] * (fv[i] + fv[14 - i]);
  }
  return Panel{a, b, kron * h, std::abs(kron - gauss) * h};
}

// Log-domain panel: log of the K15 sum of exp(g) and log of |K15-G7|.
struct LogPanel {
  double a, b;
  double log_kron;
  double log_err;
  bool operator<(const LogPanel& o) const { return log_err < o.log_err; }
};

LogPanel eval_log_panel(const std::function<double(double)>& g, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double gv[15];
  for (int i = 0; i < 7; ++i) {
    gv[i] = g(c - h * kXgk[i]);
    gv[14 - i] = g(c + h * kXgk[i]);
  }
  gv[7] = g(c);
  double m = kNegInf;
  for (double v : gv) m = std::max(m, v);
  LogPanel out{a, b, kNegInf, kNegInf};
  if (!(m > kNegInf)) return out;  // integrand vanishes identically here
  double kron = 0.0, gauss = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double e = std::exp(gv[i] - m);
    const int j = std::min(i, 14 - i);
    kron += kWgk[j] * e;
    if (i % 2 == 1) gauss += kWg[j / 2] * e;
  }
  out.log_kron = m + std::log(kron * h);
  const double diff = std::abs(kron - gauss);
  out.log_err = diff > 0 ? m + std::log(diff * h) : kNegInf;
  return out;
}

} // namespace

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opt) {
  Result res;
  if (!(b > a)) {
    res.converged = true;
    return res;
  }
  std::priority_queue<Panel> heap;
  double total = 0.0, err = 0.0;
  auto push = [&](double lo, double hi) {
    Panel p = eval_panel(f, lo, hi);
    total += p.kron;
    err += p.err;
    heap.push(p);
  };
  auto resum = [&]() {
    total = 0.0;
    err = 0.0;
    std::priority_queue<Panel> copy = heap;
    while (!copy.empty()) {
      total += copy.top().kron;
      err += copy.top().err;
      copy.pop();
    }
  };
  push(a, b);
  int n = 1;
  while (n < opt.max_intervals) {
    const double tol = std::max(opt.rel_tol * std::abs(total), opt.abs_tol);
    if (err <= tol || err <= 1e-300) {
      res.converged = true;
      break;
    }
    Panel p = heap.top();
    const double mid = 0.5 * (p.a + p.b);
    if (mid <= p.a || mid >= p.b) {  // interval at rounding resolution
      res.converged = true;
      break;
    }
    heap.pop();
    total -= p.kron;
    err -= p.err;
    push(p.a, mid);
    push(mid, p.b);
    n += 1;
    if (n % 256 == 0) resum();  // kill accumulation drift
  }
  resum();
  res.value = total;
  res.abs_error = err;
  res.intervals = n;
  if (!res.converged)
    res.converged = err <= std::max(opt.rel_tol * std::abs(total), opt.abs_tol);
  return res;
}

LogResult integrate_log(const std::function<double(double)>& g, double a, double b,
                        const Options& opt) {
  LogResult res;
  if (!(b > a)) {
    res.log_value = kNegInf;
    res.converged = true;
    return res;
  }
  // Seed with several panels so an interior spike is not missed by a single
  // K15 stencil.
  std::priority_queue<LogPanel> heap;
  const int seeds = 8;
  for (int i = 0; i < seeds; ++i) {
    const double lo = a + (b - a) * i / seeds;
    const double hi = (i + 1 == seeds) ? b : a + (b - a) * (i + 1) / seeds;
    heap.push(eval_log_panel(g, lo, hi));
  }
  int n = seeds;
  double log_total = kNegInf, log_err = kNegInf;
  auto resum = [&]() {
    log_total = kNegInf;
    log_err = kNegInf;
    std::priority_queue<LogPanel> copy = heap;
    while (!copy.empty()) {
      log_total = log_add(log_total, copy.top().log_kron);
      log_err = log_add(log_err, copy.top().log_err);
      copy.pop();
    }
  };
  resum();
  while (n < opt.max_intervals) {
    if (log_total == kNegInf || log_err == kNegInf ||
        log_err <= log_total + std::log(opt.rel_tol)) {
      res.converged = true;
      break;
    }
    LogPanel p = heap.top();
    const double mid = 0.5 * (p.a + p.b);
    if (mid <= p.a || mid >= p.b) {
      res.converged = true;
      break;
    }
    heap.pop();
    heap.push(eval_log_panel(g, p.a, mid));
    heap.push(eval_log_panel(g, mid, p.b));
    n += 1;
    resum();
  }
  resum();
  res.log_value = log_total;
  res.rel_error =
      (log_err == kNegInf || log_total == kNegInf)
          ? 0.0
          : std::exp(std::min(log_err - log_total, 0.0));
  res.intervals = n;
  if (!res.converged)
    res.converged = log_err == kNegInf || log_err <= log_total + std::log(opt.rel_tol);
  return res;
}

double decay_cutoff(const std::function<double(double)>& g, double start, double g_peak,
                    double drop) {
  double step = std::max(1.0, std::abs(start));
  double x = start;
  for (int i = 0; i < 400; ++i) {
    if (g(x) <= g_peak - drop) return x;
    x = start + step;
    step *= 2.0;
  }
  fail(ErrorKind::QuadratureFailure,
       "integrand does not decay; no cutoff found past x=" + std::to_string(x));
}

} // namespace gapcert::quad
