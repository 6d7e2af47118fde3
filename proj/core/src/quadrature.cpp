#include "bougerol/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace bougerol {
namespace {

constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for nodes 1, 3, 5, 7 of kNodes.
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double res_k = fc * kKronrod[7];
  double res_g = fc * kGauss[3];
  double res_abs = std::abs(res_k);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    res_k += kKronrod[j] * (f1[j] + f2[j]);
    res_abs += kKronrod[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) res_g += kGauss[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = 0.5 * res_k;
  double res_asc = kKronrod[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) res_asc += kKronrod[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  const double scale = std::abs(half);
  res_k *= half;
  res_abs *= scale;
  res_asc *= scale;
  double err = std::abs((res_k - res_g * half));
  if (res_asc != 0.0 && err != 0.0) err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * res_abs, err);
  return {a, b, res_k, err};
}

}  // namespace

QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b,
                                const QuadratureOptions& opts) {
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  const std::size_t panels = std::max<std::size_t>(1, opts.initial_panels);
  std::priority_queue<Panel> heap;
  double total = 0.0;
  double total_err = 0.0;
  const double width = (b - a) / static_cast<double>(panels);
  for (std::size_t i = 0; i < panels; ++i) {
    const double lo = a + width * static_cast<double>(i);
    const double hi = i + 1 == panels ? b : lo + width;
    Panel p = gk15(f, lo, hi);
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }
  out.evaluations = 15 * panels;

  const auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
  while (total_err > tolerance() && heap.size() < std::max(opts.max_intervals, panels)) {
    const Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= std::min(worst.a, worst.b) || mid >= std::max(worst.a, worst.b)) break;
    heap.pop();
    const Panel left = gk15(f, worst.a, mid);
    const Panel right = gk15(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum from the panels to shed the drift of incremental updates.
  total = 0.0;
  total_err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  out.value = total;
  out.abs_error = total_err;
  out.converged = total_err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
  return out;
}

}  // namespace bougerol
