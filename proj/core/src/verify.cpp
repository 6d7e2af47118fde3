#include "bougerol/verify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bougerol/closedform.hpp"
#include "bougerol/error.hpp"
#include "bougerol/functionals.hpp"
#include "bougerol/localtime.hpp"
#include "bougerol/special.hpp"

namespace bougerol {
namespace {

// Stream roles; path i of role r draws from cfg.rng.child(r, i).
enum Role : std::uint64_t {
  kPair1Paths = 1,
  kPair2Paths = 2,
  kExactPairs = 3,
  kAuxiliary = 4,
  kPermutations = 5,
};

struct PairDraw {
  SampleSet set;
  std::size_t atoms = 0;  ///< rows whose second coordinate is exactly 0
  std::uint64_t rejected = 0;
};

SampleSet to_sample(std::size_t dim, const std::string& label, RngStream rng, const std::vector<double>& a,
                    const std::vector<double>* b = nullptr) {
  SampleSet s(dim, label, rng);
  s.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b) s.push(a[i], (*b)[i]);
    else s.push(a[i]);
  }
  return s;
}

// (e^{B} sinh x + beta_A, e^{-B} lambda^{-e^{B} sinh x}_A)
PairDraw draw_pair1(const VerifyConfig& cfg, double x) {
  const double sx = std::sinh(x);
  std::vector<double> first(cfg.n_mc), second(cfg.n_mc);
  const auto rejected = for_each_functional(
      GridSpec(cfg.t, cfg.n_steps), cfg.n_mc, cfg.rng, kPair1Paths, cfg.threads,
      [&](std::size_t i, const FunctionalSample& s, Philox& gen) {
        const auto lt = sample_bm_with_local_time(s.a_t, -s.exp_b * sx, gen);
        first[i] = s.exp_b * sx + lt.endpoint;
        second[i] = s.exp_neg_b * lt.local_time;
      });
  PairDraw d{to_sample(2, "pair1", cfg.rng, first, &second)};
  d.atoms = static_cast<std::size_t>(std::count(second.begin(), second.end(), 0.0));
  d.rejected = rejected;
  return d;
}

// (e^{-B} sinh x + e^{-B} beta_A, lambda^{-sinh x}_A)
PairDraw draw_pair2(const VerifyConfig& cfg, double x) {
  const double sx = std::sinh(x);
  std::vector<double> first(cfg.n_mc), second(cfg.n_mc);
  const auto rejected = for_each_functional(
      GridSpec(cfg.t, cfg.n_steps), cfg.n_mc, cfg.rng, kPair2Paths, cfg.threads,
      [&](std::size_t i, const FunctionalSample& s, Philox& gen) {
        const auto lt = sample_bm_with_local_time(s.a_t, -sx, gen);
        first[i] = s.exp_neg_b * sx + s.exp_neg_b * lt.endpoint;
        second[i] = lt.local_time;
      });
  PairDraw d{to_sample(2, "pair2", cfg.rng, first, &second)};
  d.atoms = static_cast<std::size_t>(std::count(second.begin(), second.end(), 0.0));
  d.rejected = rejected;
  return d;
}

// (sinh(x + B_t), sinh(|x| + L^{-x}_t) - sinh|x|) from the exact sampler.
PairDraw draw_pair3(const VerifyConfig& cfg, double x) {
  const double ax = std::abs(x);
  const double sax = std::sinh(ax);
  std::vector<double> first(cfg.n_mc), second(cfg.n_mc);
  parallel_for(cfg.n_mc, cfg.threads, [&](std::size_t i) {
    Philox gen(cfg.rng.child(kExactPairs, i));
    const auto lt = sample_bm_with_local_time(cfg.t, -x, gen);
    first[i] = std::sinh(x + lt.endpoint);
    second[i] = lt.local_time > 0.0 ? std::sinh(ax + lt.local_time) - sax : 0.0;
  });
  PairDraw d{to_sample(2, "pair3", cfg.rng, first, &second)};
  d.atoms = static_cast<std::size_t>(std::count(second.begin(), second.end(), 0.0));
  return d;
}

void stamp(TestReport& r, const VerifyConfig& cfg, double x, std::uint64_t rejected) {
  r.meta("t", cfg.t)
      .meta("x", x)
      .meta("n_mc", static_cast<double>(cfg.n_mc))
      .meta("n_steps", static_cast<double>(cfg.n_steps))
      .meta("seed", std::to_string(cfg.rng.seed))
      .meta("stream_id", std::to_string(cfg.rng.stream_id))
      .meta("rejected_paths", static_cast<double>(rejected));
}

SampleSet column_sample(const SampleSet& s, std::size_t col, const std::string& label, bool positive_only) {
  SampleSet out(1, label, s.provenance());
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double v = s.at(i, col);
    if (!positive_only || v > 0.0) out.push(v);
  }
  return out;
}

// Grid + energy for one claimed equality.
void compare_pairs(std::vector<TestReport>& out, const SampleSet& a, const SampleSet& b, const VerifyConfig& cfg,
                   double x, std::uint64_t rejected, std::uint64_t perm_index) {
  const auto grid = pooled_quantile_grid(a, b);
  TestReport g = ecdf_grid_compare(a, b, grid, cfg.alpha);
  stamp(g, cfg, x, rejected);
  out.push_back(std::move(g));
  EnergyOptions eo = cfg.energy;
  eo.alpha = cfg.alpha;
  TestReport e = energy_perm_test(a, b, cfg.rng.child(kPermutations, perm_index), eo);
  stamp(e, cfg, x, rejected);
  out.push_back(std::move(e));
}

// Pair 3 against the closed-form CDF P(Y1 <= y, Y2 >= z) on its own quantile grid.
TestReport closed_form_check(const SampleSet& pair3, const VerifyConfig& cfg, double x) {
  const auto grid = pooled_quantile_grid(pair3, pair3);
  const double n = static_cast<double>(pair3.size());
  const double sd = std::sqrt(cfg.t);
  double worst = 0.0;
  GridPoint worst_point{0.0, 0.0};
  for (const auto& g : grid) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < pair3.size(); ++i)
      count += (pair3.at(i, 0) <= g[0] && (g[1] <= 0.0 || pair3.at(i, 1) >= g[1])) ? 1 : 0;
    const double p0 = g[1] > 0.0 ? theorem_rhs_cdf(cfg.t, x, g[0], g[1])
                                 : normal_cdf((asinh_stable(g[0]) - x) / sd);
    const double se = std::max(std::sqrt(p0 * (1.0 - p0) / n), 1.0 / n);
    const double zscore = std::abs(static_cast<double>(count) / n - p0) / se;
    if (zscore > worst) {
      worst = zscore;
      worst_point = g;
    }
  }
  TestReport r;
  r.test_name = "pair3_vs_closed_form_cdf";
  r.n1 = pair3.size();
  r.statistic = worst;
  r.threshold_or_pvalue = 3.0;
  r.passed = worst <= 3.0;
  r.meta("decision", "max |ecdf - cdf| / SE <= 3")
      .meta("grid_points", static_cast<double>(grid.size()))
      .meta("worst_y", worst_point[0])
      .meta("worst_z", worst_point[1]);
  stamp(r, cfg, x, 0);
  return r;
}

std::vector<TestReport> three_way(const VerifyConfig& cfg, double x, bool bdy_mode) {
  const PairDraw p1 = draw_pair1(cfg, x);
  const PairDraw p2 = draw_pair2(cfg, x);
  const PairDraw p3 = draw_pair3(cfg, x);
  const std::uint64_t rejected = p1.rejected + p2.rejected;
  std::vector<TestReport> out;

  if (x != 0.0) {
    TestReport a12 = proportion_two_sample("atom_at_zero:pair1~pair2", p1.atoms, cfg.n_mc, p2.atoms, cfg.n_mc);
    TestReport a23 = proportion_two_sample("atom_at_zero:pair2~pair3", p2.atoms, cfg.n_mc, p3.atoms, cfg.n_mc);
    TestReport a3 = proportion_vs_value("atom_at_zero:pair3~no_hit_probability", p3.atoms, cfg.n_mc,
                                        no_hit_probability(cfg.t, x));
    a3.decisive = false;
    for (TestReport* r : {&a12, &a23, &a3}) {
      stamp(*r, cfg, x, rejected);
      out.push_back(std::move(*r));
    }
  }

  compare_pairs(out, p1.set, p2.set, cfg, x, rejected, 0);
  compare_pairs(out, p2.set, p3.set, cfg, x, rejected, 1);

  TestReport cf = closed_form_check(p3.set, cfg, x);
  cf.decisive = !bdy_mode;
  out.push_back(std::move(cf));

  // Marginal diagnostics.
  TestReport first = ks_two_sample(column_sample(p3.set, 0, "pair3.first", false),
                                   column_sample(p1.set, 0, "pair1.first", false), cfg.alpha);
  first.decisive = false;
  stamp(first, cfg, x, rejected);
  out.push_back(std::move(first));

  if (bdy_mode) {
    std::vector<double> ref(cfg.n_mc);
    const double sd = std::sqrt(cfg.t);
    for (std::size_t i = 0; i < cfg.n_mc; ++i) {
      Philox gen(cfg.rng.child(kAuxiliary, i));
      ref[i] = std::sinh(std::abs(sd * gen.normal()));
    }
    TestReport second = ks_two_sample(column_sample(p3.set, 1, "pair3.second", false),
                                      to_sample(1, "sinh|N(0,t)|", cfg.rng, ref), cfg.alpha);
    second.decisive = false;
    stamp(second, cfg, x, rejected);
    out.push_back(std::move(second));
  }
  return out;
}

}  // namespace

void VerifyConfig::validate() const {
  if (!(t > 0.0) || !std::isfinite(t)) throw InputError("t must be finite and > 0");
  if (!std::isfinite(x)) throw InputError("x must be finite");
  if (n_mc < 2) throw InputError("n_mc must be >= 2");
  if (n_steps < 1) throw InputError("n_steps must be >= 1");
}

bool identity_holds(std::span<const TestReport> reports) {
  return std::all_of(reports.begin(), reports.end(), [](const TestReport& r) { return !r.decisive || r.passed; });
}

std::vector<TestReport> verify_boug(const VerifyConfig& cfg, std::vector<double>* a_draws) {
  cfg.validate();
  std::vector<double> lhs(cfg.n_mc), rhs(cfg.n_mc);
  if (a_draws) a_draws->assign(cfg.n_mc, 0.0);
  const auto rejected = for_each_functional(GridSpec(cfg.t, cfg.n_steps), cfg.n_mc, cfg.rng, kPair1Paths,
                                            cfg.threads, [&](std::size_t i, const FunctionalSample& s, Philox& gen) {
                                              lhs[i] = std::sqrt(s.a_t) * gen.normal();
                                              if (a_draws) (*a_draws)[i] = s.a_t;
                                            });
  const double sd = std::sqrt(cfg.t);
  parallel_for(cfg.n_mc, cfg.threads, [&](std::size_t i) {
    Philox gen(cfg.rng.child(kExactPairs, i));
    rhs[i] = std::sinh(sd * gen.normal());
  });
  TestReport r = ks_two_sample(to_sample(1, "beta_A", cfg.rng, lhs), to_sample(1, "sinh(B)", cfg.rng, rhs), cfg.alpha);
  stamp(r, cfg, 0.0, rejected);
  return {r};
}

std::vector<TestReport> verify_reversal(const VerifyConfig& cfg) {
  cfg.validate();
  const GridSpec grid(cfg.t, cfg.n_steps);
  const FunctionalBatch forward = sample_functional_batch(grid, cfg.n_mc, cfg.rng, kPair1Paths, cfg.threads);
  std::vector<double> e(cfg.n_mc), a(cfg.n_mc);
  std::vector<std::uint64_t> rejected(cfg.n_mc, 0);
  parallel_for(cfg.n_mc, cfg.threads, [&](std::size_t i) {
    Philox gen(cfg.rng.child(kPair2Paths, i));
    for (;;) {
      const BrownianPath p = sample_brownian_path(grid, gen);
      const FunctionalSample rev = reversed_pair(p).second;
      if (rev.overflow || exp_functional(p).overflow) {
        ++rejected[i];
        continue;
      }
      e[i] = rev.exp_b;  // = e^{-B_t}
      a[i] = rev.a_t;    // = e^{-2B_t} A_t
      break;
    }
  });
  std::vector<double> fe(cfg.n_mc), fa(cfg.n_mc);
  for (std::size_t i = 0; i < cfg.n_mc; ++i) {
    fe[i] = forward.samples[i].exp_b;
    fa[i] = forward.samples[i].a_t;
  }
  std::uint64_t total_rejected = forward.rejected;
  for (auto r : rejected) total_rejected += r;
  std::vector<TestReport> out;
  compare_pairs(out, to_sample(2, "(exp(B),A)", cfg.rng, fe, &fa),
                to_sample(2, "(exp(-B),exp(-2B)A)", cfg.rng, e, &a), cfg, 0.0, total_rejected, 0);
  return out;
}

std::vector<TestReport> verify_bdy(const VerifyConfig& cfg) {
  cfg.validate();
  return three_way(cfg, 0.0, true);
}

std::vector<TestReport> verify_main(const VerifyConfig& cfg) {
  cfg.validate();
  return three_way(cfg, cfg.x, false);
}

std::vector<TestReport> verify_second(const VerifyConfig& cfg) {
  cfg.validate();
  const double x = cfg.x;
  const double ax = std::abs(x);
  const double sx = std::sinh(x);
  const double sax = std::sinh(ax);
  const double sd = std::sqrt(cfg.t);

  std::vector<double> lhs(cfg.n_mc), rhs(cfg.n_mc), alt(cfg.n_mc);
  const auto rejected = for_each_functional(GridSpec(cfg.t, cfg.n_steps), cfg.n_mc, cfg.rng, kPair1Paths,
                                            cfg.threads, [&](std::size_t i, const FunctionalSample& s, Philox& gen) {
                                              lhs[i] = sample_bm_with_local_time(s.a_t, sx, gen).local_time;
                                            });
  parallel_for(cfg.n_mc, cfg.threads, [&](std::size_t i) {
    Philox gen(cfg.rng.child(kExactPairs, i));
    const double l = sample_bm_with_local_time(cfg.t, x, gen).local_time;
    rhs[i] = l > 0.0 ? std::sinh(ax + l) - sax : 0.0;
    Philox aux(cfg.rng.child(kAuxiliary, i));
    alt[i] = std::max(0.0, std::sinh(std::abs(sd * aux.normal())) - sax);
  });

  const auto zeros = [](const std::vector<double>& v) {
    return static_cast<std::size_t>(std::count(v.begin(), v.end(), 0.0));
  };
  const double atom = 2.0 * normal_cdf(ax / sd) - 1.0;
  const SampleSet left = to_sample(1, "lambda^{sinh x}_A", cfg.rng, lhs);
  const SampleSet right = to_sample(1, "sinh(|x|+L^x)-sinh|x|", cfg.rng, rhs);
  const SampleSet third = to_sample(1, "(sinh|B|-sinh|x|)^+", cfg.rng, alt);

  std::vector<TestReport> out;
  out.push_back(proportion_two_sample("atom_at_zero:lhs~rhs", zeros(lhs), cfg.n_mc, zeros(rhs), cfg.n_mc));
  out.push_back(proportion_vs_value("atom_at_zero:lhs~2Phi(|x|/sqrt(t))-1", zeros(lhs), cfg.n_mc, atom));
  TestReport rhs_atom = proportion_vs_value("atom_at_zero:rhs~2Phi(|x|/sqrt(t))-1", zeros(rhs), cfg.n_mc, atom);
  rhs_atom.decisive = false;
  out.push_back(std::move(rhs_atom));

  const bool has_atom = ax > 0.0;
  out.push_back(ks_two_sample(column_sample(left, 0, left.label() + "|>0", has_atom),
                              column_sample(right, 0, right.label() + "|>0", has_atom), cfg.alpha));
  TestReport alt_ks = ks_two_sample(column_sample(right, 0, right.label() + "|>0", has_atom),
                                    column_sample(third, 0, third.label() + "|>0", has_atom), cfg.alpha);
  alt_ks.decisive = false;
  out.push_back(std::move(alt_ks));
  for (auto& r : out) stamp(r, cfg, x, rejected);
  return out;
}

}  // namespace bougerol
