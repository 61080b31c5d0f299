#pragma once
// Adaptive Gauss-Kronrod (G7-K15) quadrature for exponentially decaying
// integrands on intervals, half-lines, and full lines, with generic nested
// multidimensional evaluation and Richardson-extrapolated derivatives.
//
// Integrands are *batched*: a callable void f(span<const double> xs,
// span<T> out) fills out[i] with the value at xs[i]. This lets the hot
// kernel layer process whole node sets at once (SIMD-friendly) and keeps
// the evaluation order deterministic: panels are refined worst-first with
// a full ordering (error, position), and the final sum is accumulated in
// left-to-right panel order, so results are bit-stable across runs.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfric::quad {

struct QuadratureSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-14;
  // Characteristic 1/e length of the integrand tail in the integration
  // variable; supplied by the caller from geometry (e.g. 1/(2*z) for
  // kernels decaying like exp(-2*p*z)).
  double decay_scale = 1.0;
  int max_evals = 1'000'000;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class T>
struct QuadratureResult {
  T value{};
  double error_estimate = 0.0;
  int evals = 0;
};

// Minimal vector-space + magnitude operations used by the adaptive driver.
template <class T>
struct ValueOps;

template <>
struct ValueOps<double> {
  static double zero() { return 0.0; }
  static void add(double& a, const double& b) { a += b; }
  static void add_scaled(double& a, double w, const double& b) { a += w * b; }
  static void scale(double& a, double s) { a *= s; }
  static double dist(const double& a, const double& b) { return std::abs(a - b); }
  static double norm(const double& a) { return std::abs(a); }
  static bool finite(const double& a) { return std::isfinite(a); }
};

template <>
struct ValueOps<std::complex<double>> {
  using C = std::complex<double>;
  static C zero() { return {0.0, 0.0}; }
  static void add(C& a, const C& b) { a += b; }
  static void add_scaled(C& a, double w, const C& b) { a += w * b; }
  static void scale(C& a, double s) { a *= s; }
  static double dist(const C& a, const C& b) { return std::abs(a - b); }
  static double norm(const C& a) { return std::abs(a); }
  static bool finite(const C& a) {
    return std::isfinite(a.real()) && std::isfinite(a.imag());
  }
};

template <std::size_t N>
struct ValueOps<std::array<double, N>> {
  using A = std::array<double, N>;
  static A zero() {
    A a{};
    return a;
  }
  static void add(A& a, const A& b) {
    for (std::size_t i = 0; i < N; ++i) a[i] += b[i];
  }
  static void add_scaled(A& a, double w, const A& b) {
    for (std::size_t i = 0; i < N; ++i) a[i] += w * b[i];
  }
  static void scale(A& a, double s) {
    for (std::size_t i = 0; i < N; ++i) a[i] *= s;
  }
  static double dist(const A& a, const A& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < N; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
  }
  static double norm(const A& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < N; ++i) m = std::max(m, std::abs(a[i]));
    return m;
  }
  static bool finite(const A& a) {
    for (std::size_t i = 0; i < N; ++i)
      if (!std::isfinite(a[i])) return false;
    return true;
  }
};

namespace detail {

// 15-point Kronrod extension of 7-point Gauss on [-1, 1].
inline constexpr std::array<double, 15> k15_nodes = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,                0.207784955007898,
    0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};

inline constexpr std::array<double, 15> k15_weights = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};

// Gauss weights attach to the odd-index Kronrod nodes.
inline constexpr std::array<double, 7> g7_weights = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

template <class T>
struct Panel {
  double a, b;
  T value;       // K15 estimate on [a, b]
  double error;  // |K15 - G7|
};

// Worst-first ordering with a full positional tie-break for determinism.
template <class T>
struct PanelWorse {
  bool operator()(const Panel<T>& x, const Panel<T>& y) const {
    if (x.error != y.error) return x.error < y.error;
    if (x.a != y.a) return x.a > y.a;
    return x.b > y.b;
  }
};

// Kronrod/Gauss evaluation of a batch of panels. `xs`/`vals` are scratch.
// Each panel consumes 15 consecutive entries.
template <class T, class F>
void evaluate_panels(F& f, std::span<Panel<T>> panels, std::vector<double>& xs,
                     std::vector<T>& vals) {
  const std::size_t n = panels.size();
  xs.resize(15 * n);
  vals.resize(15 * n);
  for (std::size_t p = 0; p < n; ++p) {
    const double mid = 0.5 * (panels[p].a + panels[p].b);
    const double half = 0.5 * (panels[p].b - panels[p].a);
    for (int i = 0; i < 15; ++i) xs[15 * p + i] = mid + half * k15_nodes[i];
  }
  f(std::span<const double>(xs.data(), xs.size()),
    std::span<T>(vals.data(), vals.size()));
  for (std::size_t p = 0; p < n; ++p) {
    const double half = 0.5 * (panels[p].b - panels[p].a);
    T k15 = ValueOps<T>::zero();
    T g7 = ValueOps<T>::zero();
    for (int i = 0; i < 15; ++i) {
      const T& v = vals[15 * p + i];
      if (!ValueOps<T>::finite(v))
        throw QuadratureError("integrand returned a non-finite value at x=" +
                              std::to_string(xs[15 * p + i]));
      ValueOps<T>::add_scaled(k15, half * k15_weights[i], v);
      if (i % 2 == 1) ValueOps<T>::add_scaled(g7, half * g7_weights[i / 2], v);
    }
    panels[p].value = k15;
    panels[p].error = ValueOps<T>::dist(k15, g7);
  }
}

// Adaptive driver over an initial panel decomposition given by `edges`
// (sorted, size >= 2). `evals_pool`, when non-null, is a shared evaluation
// budget for nested integration; it is decremented by this call.
template <class T, class F>
QuadratureResult<T> integrate_edges(F&& f, const std::vector<double>& edges,
                                    const QuadratureSpec& spec,
                                    int* evals_pool = nullptr) {
  const int budget = evals_pool ? std::min(*evals_pool, spec.max_evals)
                                : spec.max_evals;
  int evals = 0;
  std::vector<double> xs;
  std::vector<T> vals;

  std::vector<Panel<T>> init(edges.size() - 1);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    init[i] = Panel<T>{edges[i], edges[i + 1], ValueOps<T>::zero(), 0.0};
  evaluate_panels<T>(f, std::span<Panel<T>>(init), xs, vals);
  evals += static_cast<int>(15 * init.size());

  std::priority_queue<Panel<T>, std::vector<Panel<T>>, PanelWorse<T>> heap(
      PanelWorse<T>{}, std::move(init));

  auto totals = [&heap]() {
    // Drain a copy to sum deterministically in positional order.
    auto copy = heap;
    std::vector<Panel<T>> all;
    while (!copy.empty()) {
      all.push_back(copy.top());
      copy.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel<T>& x, const Panel<T>& y) {
      return x.a < y.a || (x.a == y.a && x.b < y.b);
    });
    T value = ValueOps<T>::zero();
    double err = 0.0;
    for (const auto& p : all) {
      ValueOps<T>::add(value, p.value);
      err += p.error;
    }
    return std::pair<T, double>(value, err);
  };

  // Cheap running totals for the stopping test; the returned value is
  // re-accumulated deterministically at the end.
  T run_value = ValueOps<T>::zero();
  double run_err = 0.0;
  {
    auto copy = heap;
    while (!copy.empty()) {
      ValueOps<T>::add(run_value, copy.top().value);
      run_err += copy.top().error;
      copy.pop();
    }
  }

  while (true) {
    const double tol =
        std::max(spec.abs_tol, spec.rel_tol * ValueOps<T>::norm(run_value));
    if (run_err <= tol) break;
    if (evals + 30 > budget)
      throw QuadratureError(
          "max_evals exceeded before reaching tolerance (evals=" +
          std::to_string(evals) + ", error=" + std::to_string(run_err) + ")");
    Panel<T> worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b))
      throw QuadratureError("panel underflow: cannot subdivide further near x=" +
                            std::to_string(worst.a));
    std::array<Panel<T>, 2> halves = {
        Panel<T>{worst.a, mid, ValueOps<T>::zero(), 0.0},
        Panel<T>{mid, worst.b, ValueOps<T>::zero(), 0.0}};
    evaluate_panels<T>(f, std::span<Panel<T>>(halves), xs, vals);
    evals += 30;
    // Update running totals incrementally (exact bookkeeping is restored by
    // the final deterministic accumulation).
    ValueOps<T>::add_scaled(run_value, -1.0, worst.value);
    run_err -= worst.error;
    for (auto& h : halves) {
      ValueOps<T>::add(run_value, h.value);
      run_err += h.error;
      heap.push(h);
    }
  }

  auto [value, err] = totals();
  if (evals_pool) *evals_pool -= evals;
  return QuadratureResult<T>{value, err, evals};
}

// Map t in (0,1) -> x in (0,inf): x = -L*log(1-t), dx = L/(1-t) dt.
// L is twice the caller's decay scale so the map decays slower than the
// integrand (adaptivity then only ever sees a decaying transformed tail).
template <class T, class F>
struct HalflineMapped {
  F& f;
  double L;
  std::vector<double> xbuf;
  void operator()(std::span<const double> ts, std::span<T> out) {
    xbuf.resize(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i)
      xbuf[i] = -L * std::log1p(-ts[i]);
    f(std::span<const double>(xbuf.data(), xbuf.size()), out);
    for (std::size_t i = 0; i < ts.size(); ++i)
      ValueOps<T>::scale(out[i], L / (1.0 - ts[i]));
  }
};

// g(x) = f(x) + f(-x) on the half-line, evaluated in one batched call.
template <class T, class F>
struct FoldedFullline {
  F& f;
  std::vector<double> xbuf;
  std::vector<T> vbuf;
  void operator()(std::span<const double> xs, std::span<T> out) {
    const std::size_t n = xs.size();
    xbuf.resize(2 * n);
    vbuf.resize(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      xbuf[i] = xs[i];
      xbuf[n + i] = -xs[i];
    }
    f(std::span<const double>(xbuf.data(), xbuf.size()),
      std::span<T>(vbuf.data(), vbuf.size()));
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = vbuf[i];
      ValueOps<T>::add(out[i], vbuf[n + i]);
    }
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Public entry points. T is deduced from an explicit template argument:
//   integrate_halfline<double>(f, spec)
// ---------------------------------------------------------------------------

template <class T, class F>
QuadratureResult<T> integrate_interval(F&& f, double a, double b,
                                       const QuadratureSpec& spec,
                                       std::vector<double> breakpoints = {},
                                       int* evals_pool = nullptr) {
  std::vector<double> edges{a, b};
  for (double c : breakpoints)
    if (c > a && c < b) edges.push_back(c);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return detail::integrate_edges<T>(f, edges, spec, evals_pool);
}

template <class T, class F>
QuadratureResult<T> integrate_halfline(F&& f, const QuadratureSpec& spec,
                                       int* evals_pool = nullptr) {
  detail::HalflineMapped<T, std::remove_reference_t<F>> g{f,
                                                          2.0 * spec.decay_scale,
                                                          {}};
  // Seed panels resolve the rise near t=0 and the compressed tail near t=1.
  const std::vector<double> edges = {0.0, 0.25, 0.5, 0.75, 0.9375, 1.0};
  return detail::integrate_edges<T>(g, edges, spec, evals_pool);
}

template <class T, class F>
QuadratureResult<T> integrate_fullline(F&& f, const QuadratureSpec& spec,
                                       int* evals_pool = nullptr) {
  detail::FoldedFullline<T, std::remove_reference_t<F>> g{f, {}, {}};
  return integrate_halfline<T>(g, spec, evals_pool);
}

enum class Axis { halfline, fullline };

struct AxisSpec {
  Axis kind = Axis::halfline;
  double decay_scale = 1.0;
};

namespace detail {

template <class T, class F>
QuadratureResult<T> nested_level(F& f, int dims, int level,
                                 std::vector<double>& outer,
                                 const QuadratureSpec& spec,
                                 std::span<const AxisSpec> axes,
                                 int* evals_pool) {
  QuadratureSpec level_spec = spec;
  level_spec.decay_scale = axes[level].decay_scale;
  if (level == dims - 1) {
    // Innermost axis: hand the node batch to the integrand directly.
    auto leaf = [&](std::span<const double> xs, std::span<T> out) {
      f(std::span<const double>(outer.data(), outer.size()), xs, out);
    };
    return axes[level].kind == Axis::halfline
               ? integrate_halfline<T>(leaf, level_spec, evals_pool)
               : integrate_fullline<T>(leaf, level_spec, evals_pool);
  }
  // Outer axis: each node value is itself a nested integral. Inner levels
  // run at a modestly tighter relative tolerance so their bias does not
  // dominate this level's error estimate.
  QuadratureSpec inner_spec = spec;
  inner_spec.rel_tol = spec.rel_tol * 0.2;
  auto node_fn = [&](std::span<const double> xs, std::span<T> out) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      outer.push_back(xs[i]);
      out[i] = nested_level<T>(f, dims, level + 1, outer, inner_spec, axes,
                               evals_pool)
                   .value;
      outer.pop_back();
    }
  };
  return axes[level].kind == Axis::halfline
             ? integrate_halfline<T>(node_fn, level_spec, evals_pool)
             : integrate_fullline<T>(node_fn, level_spec, evals_pool);
}

}  // namespace detail

// Nested adaptive integration over dims in {2, 4} axes. The integrand is
// batched over the innermost axis:
//   f(span<const double> outer_point /*dims-1 coords, outermost first*/,
//     span<const double> xs_inner, span<T> out).
// The evaluation budget spec.max_evals is shared across all levels.
template <class T, class F>
QuadratureResult<T> integrate_nested(F&& f, int dims, const QuadratureSpec& spec,
                                     std::span<const AxisSpec> axes) {
  if ((dims != 2 && dims != 4) || static_cast<int>(axes.size()) != dims)
    throw std::invalid_argument("integrate_nested: dims must be 2 or 4 and "
                                "match the number of axis specs");
  int pool = spec.max_evals;
  std::vector<double> outer;
  outer.reserve(dims - 1);
  auto res = detail::nested_level<T>(f, dims, 0, outer, spec, axes, &pool);
  res.evals = spec.max_evals - pool;
  return res;
}

struct DerivativeResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

// First derivative by central differences with one Richardson step over
// steps h and h/2; the error estimate is the difference between the
// extrapolated value and the finer central difference.
template <class F>
DerivativeResult derivative_at(F&& f, double x0, int order = 1, double h = -1.0) {
  if (order != 1)
    throw std::invalid_argument("derivative_at: only order 1 is supported");
  if (h <= 0.0) h = 1e-3 * (1.0 + std::abs(x0));
  if (x0 + h == x0 || x0 + 0.5 * h == x0)
    throw std::invalid_argument("derivative_at: step underflow");
  const double d1 = (f(x0 + h) - f(x0 - h)) / (2.0 * h);
  const double d2 = (f(x0 + 0.5 * h) - f(x0 - 0.5 * h)) / h;
  const double rich = (4.0 * d2 - d1) / 3.0;
  return DerivativeResult{rich, std::abs(rich - d2)};
}

}  // namespace qfric::quad
