#include "bougerol/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "bougerol/error.hpp"

namespace bougerol {
namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void require_dim(const SampleSet& s, std::size_t dim, const char* what) {
  if (s.dim() != dim)
    throw InputError(std::string(what) + " needs dimension " + std::to_string(dim) + " samples, got " +
                     std::to_string(s.dim()) + " (" + s.label() + ")");
  if (s.empty()) throw InputError(std::string(what) + " needs non-empty samples (" + s.label() + ")");
}

}  // namespace

SampleSet::SampleSet(std::size_t dim, std::string label, RngStream provenance)
    : dim_(dim), label_(std::move(label)), provenance_(provenance) {
  if (dim != 1 && dim != 2) throw InputError("sample dimension must be 1 or 2");
}

void SampleSet::push_row(std::span<const double> row) {
  if (row.size() != dim_) throw InputError("row length does not match sample dimension");
  for (double v : row)
    if (!std::isfinite(v)) throw InputError("non-finite value in sample " + label_);
  data_.insert(data_.end(), row.begin(), row.end());
}

std::vector<double> SampleSet::column(std::size_t col) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i, col);
  return out;
}

TestReport& TestReport::meta(std::string key, std::string value) {
  metadata.emplace_back(std::move(key), std::move(value));
  return *this;
}

TestReport& TestReport::meta(std::string key, double value) {
  return meta(std::move(key), format_double(value));
}

const std::string* TestReport::find_meta(const std::string& key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return &v;
  return nullptr;
}

double kolmogorov_survival(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  constexpr double pi = std::numbers::pi;
  if (lambda < 1.18) {
    // Theta-function form converges fast for small lambda.
    const double w = pi * pi / (8.0 * lambda * lambda);
    double sum = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double term = std::exp(-static_cast<double>((2 * k - 1) * (2 * k - 1)) * w);
      sum += term;
      if (term < 1e-18) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InputError("KS statistic needs non-empty samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

TestReport ks_two_sample(const SampleSet& s1, const SampleSet& s2, double alpha) {
  require_dim(s1, 1, "ks_two_sample");
  require_dim(s2, 1, "ks_two_sample");
  TestReport r;
  r.test_name = "ks_two_sample:" + s1.label() + "~" + s2.label();
  r.n1 = s1.size();
  r.n2 = s2.size();
  r.statistic = ks_statistic(s1.column(0), s2.column(0));
  const double ne = static_cast<double>(r.n1) * static_cast<double>(r.n2) /
                    static_cast<double>(r.n1 + r.n2);
  r.threshold_or_pvalue = kolmogorov_survival(std::sqrt(ne) * r.statistic);
  r.passed = r.threshold_or_pvalue > alpha;
  r.meta("decision", "p > " + format_double(alpha));
  return r;
}

TestReport ks_one_sample(const SampleSet& s, const std::function<double(double)>& cdf, std::string cdf_label,
                         double alpha) {
  require_dim(s, 1, "ks_one_sample");
  if (s.size() == 0) throw InputError("ks_one_sample: empty sample");
  std::vector<double> x = s.column(0);
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  TestReport r;
  r.test_name = "ks_one_sample:" + s.label() + "~" + cdf_label;
  r.n1 = x.size();
  r.statistic = d;
  r.threshold_or_pvalue = kolmogorov_survival(std::sqrt(n) * d);
  r.passed = r.threshold_or_pvalue > alpha;
  r.meta("decision", "p > " + format_double(alpha));
  return r;
}

double sorted_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InputError("quantile of empty data");
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<GridPoint> pooled_quantile_grid(const SampleSet& s1, const SampleSet& s2,
                                            std::span<const double> probs) {
  require_dim(s1, 2, "pooled_quantile_grid");
  require_dim(s2, 2, "pooled_quantile_grid");
  std::array<std::vector<double>, 2> marks;
  for (std::size_t c = 0; c < 2; ++c) {
    std::vector<double> pooled = s1.column(c);
    const std::vector<double> other = s2.column(c);
    pooled.insert(pooled.end(), other.begin(), other.end());
    std::sort(pooled.begin(), pooled.end());
    for (double p : probs) marks[c].push_back(sorted_quantile(pooled, p));
  }
  std::vector<GridPoint> grid;
  for (double g0 : marks[0])
    for (double g1 : marks[1]) grid.push_back({g0, g1});
  return grid;
}

std::vector<GridPoint> pooled_quantile_grid(const SampleSet& s1, const SampleSet& s2) {
  static constexpr std::array<double, 5> kProbs{0.1, 0.3, 0.5, 0.7, 0.9};
  return pooled_quantile_grid(s1, s2, kProbs);
}

double ecdf2(const SampleSet& s, const GridPoint& g) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < s.size(); ++i) count += (s.at(i, 0) <= g[0] && s.at(i, 1) <= g[1]) ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(s.size());
}

TestReport ecdf_grid_compare(const SampleSet& s1, const SampleSet& s2, std::span<const GridPoint> grid,
                             double alpha) {
  require_dim(s1, 2, "ecdf_grid_compare");
  require_dim(s2, 2, "ecdf_grid_compare");
  if (grid.empty()) throw InputError("ecdf_grid_compare needs a non-empty grid");
  TestReport r;
  r.test_name = "ecdf_grid:" + s1.label() + "~" + s2.label();
  r.n1 = s1.size();
  r.n2 = s2.size();
  double worst = 0.0;
  for (const auto& g : grid) worst = std::max(worst, std::abs(ecdf2(s1, g) - ecdf2(s2, g)));
  const double n = static_cast<double>(std::min(r.n1, r.n2));
  r.statistic = worst;
  r.threshold_or_pvalue = 2.0 * std::sqrt(std::log(2.0 / alpha) / (2.0 * n));
  r.passed = r.statistic <= r.threshold_or_pvalue;
  r.meta("decision", "statistic <= threshold").meta("grid_points", static_cast<double>(grid.size()));
  return r;
}

TestReport energy_perm_test(const SampleSet& s1, const SampleSet& s2, RngStream rng,
                            const EnergyOptions& opts) {
  if (s1.dim() != s2.dim()) throw InputError("energy_perm_test needs equal dimensions");
  if (s1.empty() || s2.empty()) throw InputError("energy_perm_test needs non-empty samples");
  if (opts.n_perm < 99) throw InputError("energy_perm_test needs n_perm >= 99");
  const std::size_t dim = s1.dim();
  const std::size_t n1 = std::min(s1.size(), opts.max_points);
  const std::size_t n2 = std::min(s2.size(), opts.max_points);
  const std::size_t m = n1 + n2;

  std::vector<double> pts(m * dim);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t c = 0; c < dim; ++c) pts[i * dim + c] = s1.at(i, c);
  for (std::size_t i = 0; i < n2; ++i)
    for (std::size_t c = 0; c < dim; ++c) pts[(n1 + i) * dim + c] = s2.at(i, c);

  for (std::size_t c = 0; c < dim; ++c) {
    std::vector<double> col(m);
    for (std::size_t i = 0; i < m; ++i) col[i] = pts[i * dim + c];
    std::sort(col.begin(), col.end());
    double scale = sorted_quantile(col, 0.75) - sorted_quantile(col, 0.25);
    if (!(scale > 0.0)) scale = col.back() - col.front();
    if (!(scale > 0.0)) scale = 1.0;
    for (std::size_t i = 0; i < m; ++i) pts[i * dim + c] /= scale;
  }

  // Packed strict upper triangle of pairwise Euclidean distances.
  std::vector<double> dist;
  dist.reserve(m * (m - 1) / 2);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < dim; ++c) {
        const double d = pts[i * dim + c] - pts[j * dim + c];
        s += d * d;
      }
      dist.push_back(std::sqrt(s));
    }

  const double dn1 = static_cast<double>(n1), dn2 = static_cast<double>(n2);
  const auto energy = [&](const std::vector<unsigned char>& label) {
    std::array<double, 3> acc{0.0, 0.0, 0.0};  // within-1, across, within-2
    std::size_t k = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const unsigned li = label[i];
      for (std::size_t j = i + 1; j < m; ++j) acc[li + label[j]] += dist[k++];
    }
    const double e = 2.0 * acc[1] / (dn1 * dn2) - 2.0 * acc[0] / (dn1 * dn1) - 2.0 * acc[2] / (dn2 * dn2);
    return e * dn1 * dn2 / (dn1 + dn2);
  };

  std::vector<unsigned char> label(m, 0);
  std::fill(label.begin() + static_cast<std::ptrdiff_t>(n1), label.end(), 1);
  const double observed = energy(label);

  Philox gen(rng);
  std::size_t at_least = 0;
  for (std::size_t p = 0; p < opts.n_perm; ++p) {
    for (std::size_t i = m - 1; i > 0; --i) {
      const auto j = static_cast<std::size_t>(gen() % (i + 1));
      std::swap(label[i], label[j]);
    }
    if (energy(label) >= observed) ++at_least;
  }

  TestReport r;
  r.test_name = "energy_perm:" + s1.label() + "~" + s2.label();
  r.n1 = n1;
  r.n2 = n2;
  r.statistic = observed;
  r.threshold_or_pvalue = static_cast<double>(1 + at_least) / static_cast<double>(1 + opts.n_perm);
  r.passed = r.threshold_or_pvalue > opts.alpha;
  r.meta("decision", "p > " + format_double(opts.alpha))
      .meta("n_perm", static_cast<double>(opts.n_perm))
      .meta("rows_used_each", static_cast<double>(opts.max_points));
  return r;
}

TestReport proportion_two_sample(std::string name, std::size_t k1, std::size_t n1, std::size_t k2,
                                 std::size_t n2, double z) {
  if (n1 == 0 || n2 == 0) throw InputError("proportion test needs non-empty samples");
  const double p1 = static_cast<double>(k1) / static_cast<double>(n1);
  const double p2 = static_cast<double>(k2) / static_cast<double>(n2);
  const double pooled = static_cast<double>(k1 + k2) / static_cast<double>(n1 + n2);
  const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
  TestReport r;
  r.test_name = std::move(name);
  r.n1 = n1;
  r.n2 = n2;
  r.statistic = std::abs(p1 - p2);
  r.threshold_or_pvalue = z * se;
  r.passed = r.statistic <= r.threshold_or_pvalue;
  r.meta("p1", p1).meta("p2", p2).meta("decision", "|p1 - p2| <= " + format_double(z) + " SE");
  return r;
}

TestReport proportion_vs_value(std::string name, std::size_t k, std::size_t n, double p0, double z) {
  if (n == 0) throw InputError("proportion test needs a non-empty sample");
  const double p = static_cast<double>(k) / static_cast<double>(n);
  TestReport r;
  r.test_name = std::move(name);
  r.n1 = n;
  r.n2 = 0;
  r.statistic = std::abs(p - p0);
  r.threshold_or_pvalue = z * std::sqrt(p0 * (1.0 - p0) / static_cast<double>(n));
  r.passed = r.statistic <= r.threshold_or_pvalue;
  r.meta("observed", p).meta("expected", p0).meta("decision", "|p - p0| <= " + format_double(z) + " SE");
  return r;
}

double chi_square_survival(double statistic, double df) {
  if (!(df > 0.0)) throw InputError("chi-square degrees of freedom must be > 0");
  if (!(statistic > 0.0)) return 1.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * statistic);
}

TestReport chi_square_gof(std::string name, std::span<const double> observed,
                          std::span<const double> probabilities, double alpha) {
  if (observed.size() != probabilities.size() || observed.size() < 2)
    throw InputError("chi-square needs matching observed/probability cells (>= 2)");
  const double n = std::accumulate(observed.begin(), observed.end(), 0.0);
  if (!(n > 0.0)) throw InputError("chi-square needs a positive total count");
  double stat = 0.0;
  double min_expected = n;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = n * probabilities[i];
    if (!(e > 0.0)) throw InputError("chi-square cell with non-positive expected count");
    min_expected = std::min(min_expected, e);
    stat += (observed[i] - e) * (observed[i] - e) / e;
  }
  const double df = static_cast<double>(observed.size() - 1);
  TestReport r;
  r.test_name = std::move(name);
  r.n1 = static_cast<std::size_t>(n);
  r.statistic = stat;
  r.threshold_or_pvalue = chi_square_survival(stat, df);
  r.passed = r.threshold_or_pvalue > alpha;
  r.meta("df", df).meta("min_expected", min_expected).meta("decision", "p > " + format_double(alpha));
  return r;
}

}  // namespace bougerol
