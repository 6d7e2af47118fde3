#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bougerol/rng.hpp"

namespace bougerol {

/// Row-major sample of dimension 1 or 2.
class SampleSet {
 public:
  SampleSet(std::size_t dim, std::string label, RngStream provenance = {});

  /// Throws InputError if the row length differs from dim or a value is not finite.
  void push_row(std::span<const double> row);
  void push(double value) { push_row(std::span<const double>(&value, 1)); }
  void push(double a, double b) {
    const std::array<double, 2> r{a, b};
    push_row(r);
  }
  void reserve(std::size_t rows) { data_.reserve(rows * dim_); }

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size() / dim_; }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }
  [[nodiscard]] double at(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }
  [[nodiscard]] std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  [[nodiscard]] std::vector<double> column(std::size_t col) const;
  [[nodiscard]] const std::string& label() const noexcept { return label_; }
  [[nodiscard]] RngStream provenance() const noexcept { return provenance_; }

 private:
  std::size_t dim_;
  std::string label_;
  RngStream provenance_;
  std::vector<double> data_;
};

/// Outcome of one equality-in-law check. `decisive` reports enter the
/// identity verdict; the others are diagnostics.
struct TestReport {
  std::string test_name;
  double statistic = 0.0;
  double threshold_or_pvalue = 0.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  bool passed = false;
  bool decisive = true;
  std::vector<std::pair<std::string, std::string>> metadata;

  TestReport& meta(std::string key, std::string value);
  TestReport& meta(std::string key, double value);
  [[nodiscard]] const std::string* find_meta(const std::string& key) const;
  [[nodiscard]] const char* verdict() const noexcept { return passed ? "pass" : "fail"; }
};

/// Significance level shared by every test unless overridden.
inline constexpr double kAlpha = 0.01;

/// Kolmogorov limiting survival function Q(lambda) = P(K > lambda).
double kolmogorov_survival(double lambda);

/// Two-sample sup-distance between empirical CDFs (ties handled exactly).
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Two-sample KS test; p from the Kolmogorov law at sqrt(n1 n2 / (n1 + n2)) * D.
/// Passes iff p > alpha. Throws InputError for dim != 1 or empty input.
TestReport ks_two_sample(const SampleSet& s1, const SampleSet& s2, double alpha = kAlpha);

/// One-sample KS against a continuous CDF (asymptotic p-value).
TestReport ks_one_sample(const SampleSet& s, const std::function<double(double)>& cdf, std::string cdf_label,
                         double alpha = kAlpha);

using GridPoint = std::array<double, 2>;

/// Cartesian product of pooled per-coordinate empirical quantiles.
std::vector<GridPoint> pooled_quantile_grid(const SampleSet& s1, const SampleSet& s2,
                                            std::span<const double> probs);
std::vector<GridPoint> pooled_quantile_grid(const SampleSet& s1, const SampleSet& s2);

/// Fraction of rows with row[0] <= g[0] and row[1] <= g[1].
double ecdf2(const SampleSet& s, const GridPoint& g);

/// max_g |F1(g) - F2(g)| against 2 sqrt(log(2/alpha) / (2 min(n1, n2))).
/// Throws InputError for dim != 2 or an empty grid.
TestReport ecdf_grid_compare(const SampleSet& s1, const SampleSet& s2,
                             std::span<const GridPoint> grid, double alpha = kAlpha);

struct EnergyOptions {
  std::size_t n_perm = 199;
  /// Each sample is truncated to its first max_points rows (rows are i.i.d.).
  std::size_t max_points = 1000;
  double alpha = kAlpha;
};

/// Energy distance with a label-permutation p-value (1 + #{E* >= E}) / (1 + n_perm).
/// Coordinates are scaled by the pooled interquartile range first.
/// Throws InputError for n_perm < 99 or mismatched dimensions.
TestReport energy_perm_test(const SampleSet& s1, const SampleSet& s2, RngStream rng,
                            const EnergyOptions& opts = {});

/// |k1/n1 - k2/n2| <= z * pooled binomial SE.
TestReport proportion_two_sample(std::string name, std::size_t k1, std::size_t n1, std::size_t k2,
                                 std::size_t n2, double z = 3.0);

/// |k/n - p0| <= z * sqrt(p0 (1 - p0) / n).
TestReport proportion_vs_value(std::string name, std::size_t k, std::size_t n, double p0,
                               double z = 3.0);

/// Pearson chi-square of observed counts against cell probabilities (which
/// must sum to 1); df = cells - 1. Passes iff p > alpha.
TestReport chi_square_gof(std::string name, std::span<const double> observed,
                          std::span<const double> probabilities, double alpha);

/// Upper tail of the chi-square law with df degrees of freedom.
double chi_square_survival(double statistic, double df);

/// Sample quantile with linear interpolation (type 7) of sorted data.
double sorted_quantile(std::span<const double> sorted, double p);

}  // namespace bougerol
