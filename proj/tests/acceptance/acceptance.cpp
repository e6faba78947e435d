// Acceptance checks, one PASS/FAIL line per criterion; exit status 1 if any
// fails. Usage: acceptance [criterion ...]
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nwidths/asymptotics.hpp"
#include "nwidths/extension.hpp"
#include "nwidths/io.hpp"
#include "nwidths/widths.hpp"

#ifndef NWIDTHS_FIXTURE_DIR
#define NWIDTHS_FIXTURE_DIR "tests/fixtures"
#endif

using namespace nwidths;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double rel(double a, double b) {
  const double m = std::max(std::abs(a), std::abs(b));
  return m == 0.0 ? 0.0 : std::abs(a - b) / m;
}

std::vector<int> grid(std::initializer_list<int> v) { return v; }

// 1 ---------------------------------------------------------------------------
Outcome hilbert_oracle() {
  SearchOptions so;
  so.restarts = 16;
  double worst = 0.0;
  int runs = 0;
  for (int d = 1; d <= 6; ++d) {
    Vec e(d);
    for (int k = 0; k < d; ++k) e[k] = 1.0 / (k + 1);
    const DiagonalOperator u(e, 2.0, 2.0);
    for (int n = 0; n <= std::min(3, d - 1); ++n) {
      so.seed = static_cast<std::uint64_t>(10 * d + n);
      const WidthTriple t = compute_widths(u.body(), u.target(), n, so);
      const double s = svd_oracle(u, n).upper;
      for (double v : {t.kolmogorov.estimate.upper, t.gelfand.estimate.upper, t.linear.estimate.upper}) {
        worst = std::max(worst, rel(v, s));
      }
      ++runs;
    }
  }
  return {worst <= 1e-4, std::to_string(runs) + " instances x 3 widths, worst relative error " + fmt(worst, 3)};
}

// 2 ---------------------------------------------------------------------------
SearchOptions suite_search() {
  SearchOptions so;
  so.restarts = 4;
  so.seed = 2024;
  return so;
}

Outcome duality() {
  const SearchOptions so = suite_search();
  const auto suite = operator_suite(so.seed, 20, 4);
  double gg = 0.0;
  double lg = 0.0;
  for (const SuiteCase& c : suite) {
    const DualityReport r = duality_check(c.op, c.n, so);
    gg = std::max(gg, r.gelfand_gap);
    lg = std::max(lg, r.linear_gap);
  }
  return {gg <= 0.03 && lg <= 0.03,
          "20 operators, max gelfand/kolmogorov gap " + fmt(gg, 3) + ", max linear gap " + fmt(lg, 3)};
}

// 3 ---------------------------------------------------------------------------
Outcome chain_suite() {
  ChainOptions co;
  co.search = suite_search();
  co.sample_size = 400;
  const auto suite = operator_suite(co.search.seed, 20, 4);
  int bad_bound = 0;
  int bad_mono = 0;
  int bad_flat = 0;
  int flat_cases = 0;
  double worst_excess = -kInf;
  for (const SuiteCase& c : suite) {
    const ChainReport rep = preabsolute_chain(c.op.body(), c.op.target(), c.n, co);
    const double g = rep.widths.gelfand.estimate.upper;
    const double excess = rep.extension_value - (g * (1.0 + co.eps) + rep.slack);
    worst_excess = std::max(worst_excess, excess / g);
    if (excess > 1e-9 * g) ++bad_bound;
    for (std::size_t m = 1; m < rep.chain.size(); ++m) {
      const double prev = rep.chain[m - 1].upper;
      if (rep.chain[m].upper > prev + 1e-6 + 1e-3 * prev) ++bad_mono;
    }
    if (c.op.p == 2.0 && c.op.q == 2.0) {
      ++flat_cases;
      const double top = rep.chain.front().upper;
      for (const WidthEstimate& e : rep.chain) {
        if (rel(e.upper, top) > 1e-4) ++bad_flat;
      }
    }
  }
  return {bad_bound == 0 && bad_mono == 0 && bad_flat == 0,
          "20 chains: bound violations " + std::to_string(bad_bound) + " (worst relative excess " +
              fmt(worst_excess, 3) + "), monotonicity violations " + std::to_string(bad_mono) +
              ", flatness violations " + std::to_string(bad_flat) + " over " +
              std::to_string(flat_cases) + " Hilbert cases"};
}

// 4 ---------------------------------------------------------------------------
Outcome strict_gap() {
  std::ifstream f(std::string(NWIDTHS_FIXTURE_DIR) + "/strict_gap.json");
  if (!f) return {false, "fixture not found"};
  const io::json j = io::json::parse(f);
  const std::vector<double> d = j.at("body").at("diag").get<std::vector<double>>();
  const CompactBody A(j.at("body").at("p").get<double>(),
                      Eigen::Map<const Vec>(d.data(), static_cast<Eigen::Index>(d.size())));
  const Norm X = io::norm_from_json(j.at("space"));
  const int n = j.at("n").get<int>();
  const double margin = j.at("margin").get<double>();

  ChainOptions co;
  co.search.restarts = 16;
  const ChainReport rep = preabsolute_chain(A, X, n, co);
  const double drop = rep.chain.front().upper - rep.chain.back().upper;
  const RankOneCertificate cert = certify_rank_one_gap(A, X);
  const bool reproduced = cert.margin >= margin * (1.0 - 1e-6);
  return {drop >= 0.5 * margin && reproduced,
          "chain " + fmt(rep.chain.front().upper, 8) + " -> " + fmt(rep.chain.back().upper, 8) +
              ", drop " + fmt(drop) + ", frozen margin " + fmt(margin) + ", recertified margin " +
              fmt(cert.margin)};
}

// 5 ---------------------------------------------------------------------------
std::vector<int> kSweepN = {8, 16, 32, 64, 128, 256};

Outcome sobolev() {
  const SweepResult h = sweep(FunctionClass(MultiplierSequence::sobolev(1.0), 2.0), 2.0, kSweepN);
  double worst = 0.0;
  for (const WidthEstimate& e : h.estimates) worst = std::max(worst, rel(e.upper, 1.0 / (e.n + 1)));
  const FitResult fh = fit_order(h, FitModel::PowerLaw);

  const MultiplierSequence seq = MultiplierSequence::sobolev(0.8);
  SweepResult s = sweep(FunctionClass(seq, 1.5), 2.0, kSweepN);
  s.fit = fit_order(s, FitModel::PowerLaw);
  s.has_fit = true;
  const double lo = -0.8 - 0.1;
  const double hi = -0.8 + 1.0 / 6.0 + 0.1;
  const bool ok = worst <= 1e-12 && std::abs(fh.slope + 1.0) <= 0.02 && s.fit.slope >= lo &&
                  s.fit.slope <= hi;
  return {ok, "p=q=2 r=1: max deviation from 1/(n+1) " + fmt(worst, 3) + ", slope " +
                  fmt(fh.slope) + "; p=1.5 q=2 r=0.8: upper slope " + fmt(s.fit.slope) + " in [" +
                  fmt(lo, 4) + ", " + fmt(hi, 4) + "]"};
}

// 6 ---------------------------------------------------------------------------
Outcome super_small() {
  const MultiplierSequence seq = MultiplierSequence::super_small(1.0, 2.0, 2.0);
  const SweepResult s = sweep(FunctionClass(seq, 2.0), 2.0, kSweepN);
  double worst = 0.0;
  double ratio = 0.0;
  for (const WidthEstimate& e : s.estimates) {
    const double phi = 1.0 / std::log(e.n + 2.0);  // phi(n+1)
    worst = std::max(worst, rel(e.upper, phi));
    ratio = std::max(ratio, std::abs(std::log(e.upper * std::log(e.n + 1.0))));
  }
  const double C = 1.5;
  return {worst <= 1e-12 && ratio <= std::log(C),
          "max deviation from phi(n+1) " + fmt(worst, 3) + ", max |log(v/phi(n))| " + fmt(ratio, 4) +
              " <= log " + fmt(C, 2)};
}

// 7 ---------------------------------------------------------------------------
Outcome super_high() {
  std::ostringstream os;
  bool ok = true;
  for (const auto& [gamma, ns] : {std::pair{1.0, kSweepN}, std::pair{1.5, grid({4, 8, 16, 32, 64})}}) {
    const MultiplierSequence seq = MultiplierSequence::exponential(1.0, gamma);
    const SweepResult s = sweep(FunctionClass(seq, 2.0), 2.0, ns);
    double worst = 0.0;
    for (const WidthEstimate& e : s.estimates) {
      worst = std::max(worst, rel(e.upper, std::exp(-std::pow(e.n + 1.0, gamma))));
    }
    const FitResult f = fit_order(s, FitModel::StretchedExp);
    const double err = std::abs(f.gamma - gamma) / gamma;
    ok = ok && worst <= 1e-12 && err <= 0.05;
    os << "gamma=" << gamma << ": max deviation " << fmt(worst, 3) << ", fitted gamma "
       << fmt(f.gamma) << "; ";
  }
  std::string d = os.str();
  d.resize(d.size() - 2);
  return {ok, d};
}

// 8 ---------------------------------------------------------------------------
Outcome infinite() {
  const double p = 1.5;
  const double q = 2.0;
  const MultiplierSequence seq = MultiplierSequence::exponential(0.5, 0.5);
  SweepResult s = sweep(FunctionClass(seq, p), q, kSweepN);
  const RegimeLabel label = regime_classify(seq, p, q);
  if (label != RegimeLabel::Infinite) return {false, "classified as " + to_string(label)};
  const RegimeVerdict pred = predicted_orders(label, p, q, seq);
  s.fit = fit_order(s, FitModel::StretchedExp);
  s.has_fit = true;
  VerdictOptions vo;
  vo.envelope_tol = 0.15;
  const VerdictReport v = verdict(s, pred, vo);
  return {v.pass, "envelope slope " + fmt(v.upper_statistic, 4) + " in [" + fmt(v.bracket_lo, 4) +
                      ", " + fmt(v.bracket_hi, 4) + "]"};
}

// 9 ---------------------------------------------------------------------------
std::string determinism_run() {
  SearchOptions so;
  so.restarts = 4;
  so.seed = 77;
  std::vector<io::WidthRow> rows;
  std::vector<io::DualityRow> drows;
  const auto suite = operator_suite(so.seed, 6, 3);
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const WidthTriple t = compute_widths(suite[i].op.body(), suite[i].op.target(), suite[i].n, so);
    rows.push_back({"kolmogorov", t.kolmogorov.estimate});
    rows.push_back({"gelfand", t.gelfand.estimate});
    rows.push_back({"linear", t.linear.estimate});
    drows.push_back({static_cast<int>(i), suite[i].op, duality_check(suite[i].op, suite[i].n, so)});
  }
  SweepOptions sw;
  sw.projection.seed = so.seed;
  const SweepResult s =
      sweep(FunctionClass(MultiplierSequence::sobolev(0.8), 1.5), 2.0, {8, 16, 32, 64}, sw);
  ChainOptions co;
  co.search = so;
  co.sample_size = 200;
  const ChainReport c = preabsolute_chain(suite[0].op.body(), suite[0].op.target(), suite[0].n, co);
  return io::widths_csv(rows) + io::duality_csv(drows) + io::sweep_csv(s) + io::chain_csv(c);
}

Outcome determinism() {
  const std::string a = determinism_run();
  const std::string b = determinism_run();
  return {a == b && !a.empty(), "widths, duality, sweep and chain CSV: " + std::to_string(a.size()) +
                                    " bytes, " + (a == b ? "identical" : "different")};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
  double limit = 0.0;  // seconds, 0 = none
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "hilbert-oracle", hilbert_oracle, 60.0}, {2, "duality", duality, 300.0},
      {3, "extension-chain", chain_suite},         {4, "strict-gap", strict_gap},
      {5, "sobolev-slopes", sobolev, 300.0},       {6, "super-small", super_small},
      {7, "super-high", super_high},         {8, "infinite-smoothness", infinite},
      {9, "determinism", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const Criterion& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit > 0.0 && secs > c.limit) {
      o.pass = false;
      o.detail += "; over the " + fmt(c.limit, 3) + " s limit";
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
