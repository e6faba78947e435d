#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "config.hpp"
#include "plot.hpp"

#include "nwidths/asymptotics.hpp"
#include "nwidths/extension.hpp"
#include "nwidths/io.hpp"
#include "nwidths/optimize.hpp"
#include "nwidths/widths.hpp"

namespace fs = std::filesystem;
using namespace nwidths;
using nwidths::cli::Config;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitExists = 3;

struct OutputExists : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  bool plot = false;
  bool force = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "Scenario file (key=value lines)");
  app->add_option("--set", c.sets, "Override a config key, K=V (repeatable)");
  app->add_option("--out", c.out, "Output directory")->capture_default_str();
  app->add_option("--seed", c.seed, "Seed; overrides the config value");
  app->add_flag("--plot", c.plot, "Also write an SVG plot where available");
  app->add_flag("--force", c.force, "Overwrite existing outputs");
}

Config load_config(const Common& c) {
  Config cfg = c.config.empty() ? Config{} : Config::load(c.config);
  for (const std::string& s : c.sets) cfg.set(s);
  if (c.seed) cfg.set("seed", std::to_string(*c.seed));
  return cfg;
}

// All targets are checked before any work so that a refusal leaves no partial output.
std::vector<fs::path> claim_outputs(const Common& c, const std::vector<std::string>& names) {
  std::vector<fs::path> out;
  for (const std::string& n : names) {
    const fs::path p = fs::path(c.out) / n;
    if (fs::exists(p) && !c.force) {
      throw OutputExists("output '" + p.string() + "' exists; pass --force to overwrite");
    }
    out.push_back(p);
  }
  fs::create_directories(c.out);
  return out;
}

std::uint64_t seed_of(const Config& cfg) {
  const long s = cfg.integer("seed", 0);
  if (s < 0) throw cli::ConfigError("seed must be >= 0");
  return static_cast<std::uint64_t>(s);
}

void apply_workers(const Config& cfg) {
  const long w = cfg.integer("workers", 1);
  if (w < 0) throw cli::ConfigError("workers must be >= 0");
  set_worker_count(static_cast<int>(w));
}

SearchOptions search_options(const Config& cfg) {
  SearchOptions o;
  o.seed = seed_of(cfg);
  o.restarts = static_cast<int>(cfg.integer("restarts", o.restarts));
  o.max_evals = static_cast<int>(cfg.integer("max_evals", o.max_evals));
  o.exchange_rounds = static_cast<int>(cfg.integer("exchange_rounds", o.exchange_rounds));
  o.exchange_tol = cfg.number("exchange_tol", o.exchange_tol);
  if (o.restarts < 1 || o.max_evals < 10 || o.exchange_rounds < 1 || !(o.exchange_tol > 0.0)) {
    throw cli::ConfigError("search budget keys must be positive");
  }
  return o;
}

double exponent_key(const Config& cfg, const std::string& key) {
  const double v = cfg.number(key);
  if (!(v > 1.0) || std::isinf(v)) {
    throw cli::ConfigError("config key '" + key + "' must lie in (1, inf)");
  }
  return v;
}

Vec diagonal_from(const Config& cfg) {
  if (cfg.has("diag")) {
    const std::vector<double> d = cfg.numbers("diag");
    if (d.empty()) throw cli::ConfigError("diag is empty");
    Vec v(static_cast<Eigen::Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (!(d[i] > 0.0)) throw cli::ConfigError("diag entries must be positive");
      if (i > 0 && d[i] > d[i - 1]) throw cli::ConfigError("diag must be nonincreasing");
      v(static_cast<Eigen::Index>(i)) = d[i];
    }
    return v;
  }
  const long dim = cfg.integer("dim");
  if (dim < 1 || dim > 16) throw cli::ConfigError("dim must lie in [1, 16]");
  const std::string rule = cfg.text("diag_rule", "harmonic");
  Vec v(dim);
  for (long k = 0; k < dim; ++k) {
    if (rule == "harmonic") {
      v(k) = 1.0 / static_cast<double>(k + 1);
    } else if (rule == "geometric") {
      v(k) = std::pow(cfg.number("ratio", 0.5), static_cast<double>(k));
    } else {
      throw cli::ConfigError("diag_rule must be harmonic or geometric");
    }
  }
  return v;
}

std::vector<int> int_list(const Config& cfg, const std::string& key, std::vector<int> fallback) {
  if (!cfg.has(key)) return fallback;
  std::vector<int> out;
  for (long v : cfg.integers(key)) out.push_back(static_cast<int>(v));
  return out;
}

void print_rows(std::ostream& os, const std::vector<io::WidthRow>& rows) {
  for (const io::WidthRow& r : rows) {
    const WidthEstimate& e = r.estimate;
    os << r.width << " n=" << e.n << "  lower=" << io::format_double(e.lower)
       << "  upper=" << io::format_double(e.upper) << "  [" << e.method_string() << "]"
       << (e.certified ? " certified" : "") << (e.budget_exhausted ? " budget-exhausted" : "")
       << "\n";
  }
}

// widths ---------------------------------------------------------------------

int cmd_widths(const Common& c) {
  Config cfg = load_config(c);
  cfg.check_known({"p", "q", "n", "diag", "dim", "diag_rule", "ratio", "widths", "restarts",
                   "max_evals", "exchange_rounds", "exchange_tol", "seed", "workers"});
  const double p = exponent_key(cfg, "p");
  const double q = exponent_key(cfg, "q");
  const DiagonalOperator u(diagonal_from(cfg), p, q);
  const std::vector<int> ns = int_list(cfg, "n", {});
  if (!cfg.has("n")) throw cli::MissingKey("missing required config key 'n'");
  for (int n : ns) {
    if (n < 0) throw cli::ConfigError("n must be >= 0");
  }
  const std::string which = cfg.text("widths", "kolmogorov,gelfand,linear");
  const bool wk = which.find("kolmogorov") != std::string::npos;
  const bool wg = which.find("gelfand") != std::string::npos;
  const bool wl = which.find("linear") != std::string::npos;
  if (!wk && !wg && !wl) throw cli::ConfigError("widths must name kolmogorov, gelfand or linear");
  const SearchOptions so = search_options(cfg);
  apply_workers(cfg);
  const auto paths = claim_outputs(c, {"widths.csv", "widths.json"});

  std::vector<io::WidthRow> rows;
  for (int n : ns) {
    const WidthTriple t = compute_widths(u.body(), u.target(), n, so);
    if (wk) rows.push_back({"kolmogorov", t.kolmogorov.estimate});
    if (wg) rows.push_back({"gelfand", t.gelfand.estimate});
    if (wl) rows.push_back({"linear", t.linear.estimate});
  }
  io::json j{{"schema_version", io::kSchemaVersion}, {"p", p}, {"q", q}, {"rows", io::json::array()}};
  j["diag"] = std::vector<double>(u.entries.data(), u.entries.data() + u.entries.size());
  for (const io::WidthRow& r : rows) {
    j["rows"].push_back(io::json{{"width", r.width}, {"estimate", io::to_json(r.estimate)}});
  }
  io::write_text(paths[0].string(), io::widths_csv(rows));
  io::write_text(paths[1].string(), j.dump(2) + "\n");
  print_rows(std::cout, rows);
  return 0;
}

// sweep ----------------------------------------------------------------------

MultiplierSequence multiplier_from(const Config& cfg, double p, double q) {
  const std::string regime = cfg.text("regime");
  if (regime == "sobolev") {
    const double r = cfg.number("r");
    if (!(r > 0.0)) throw cli::ConfigError("r must be positive");
    return MultiplierSequence::sobolev(r);
  }
  if (regime == "super-small") {
    const double rho = cfg.number("rho");
    if (!(rho > 0.0)) throw cli::ConfigError("rho must be positive");
    return MultiplierSequence::super_small(rho, p, q);
  }
  if (regime == "exponential") {
    const double mu = cfg.number("mu");
    const double gamma = cfg.number("gamma");
    if (!(mu > 0.0) || !(gamma > 0.0)) throw cli::ConfigError("mu and gamma must be positive");
    return MultiplierSequence::exponential(mu, gamma);
  }
  throw cli::ConfigError("regime must be sobolev, super-small or exponential");
}

cli::Series bracket_line(const std::string& label, const std::vector<double>& x,
                         const std::vector<double>& shape, double anchor_y, const std::string& color) {
  cli::Series s;
  s.label = label;
  s.x = x;
  s.color = color;
  s.dashed = true;
  s.markers = false;
  const double k = anchor_y / shape.front();
  for (double v : shape) s.y.push_back(k * v);
  return s;
}

int cmd_sweep(const Common& c) {
  Config cfg = load_config(c);
  cfg.check_known({"regime", "p", "q", "r", "rho", "mu", "gamma", "beta", "n", "K", "grid_N",
                   "random_starts", "max_iter", "seed", "workers", "C", "tol", "gamma_tol",
                   "envelope_tol", "drift_tol"});
  const double p = exponent_key(cfg, "p");
  const double q = exponent_key(cfg, "q");
  const MultiplierSequence seq = multiplier_from(cfg, p, q);
  const FunctionClass cls(seq, p, cfg.number("beta", 0.0));
  const std::vector<int> ns = int_list(cfg, "n", {8, 16, 32, 64, 128, 256});
  SweepOptions so;
  so.projection.seed = seed_of(cfg);
  so.projection.K = static_cast<int>(cfg.integer("K", 0));
  so.projection.grid_N = static_cast<int>(cfg.integer("grid_N", 0));
  so.projection.random_starts = static_cast<int>(cfg.integer("random_starts", so.projection.random_starts));
  so.projection.max_iter = static_cast<int>(cfg.integer("max_iter", so.projection.max_iter));
  if (so.projection.random_starts < 0 || so.projection.max_iter < 1) {
    throw cli::ConfigError("random_starts must be >= 0 and max_iter >= 1");
  }
  VerdictOptions vo;
  vo.C = cfg.number("C", vo.C);
  vo.tol = cfg.number("tol", vo.tol);
  vo.gamma_tol = cfg.number("gamma_tol", vo.gamma_tol);
  vo.envelope_tol = cfg.number("envelope_tol", vo.envelope_tol);
  vo.drift_tol = cfg.number("drift_tol", vo.drift_tol);
  if (!(vo.C > 1.0)) throw cli::ConfigError("C must exceed 1");
  apply_workers(cfg);
  std::vector<std::string> names = {"sweep.csv", "sweep.json", "verdict.txt"};
  if (c.plot) names.push_back("sweep.svg");
  const auto paths = claim_outputs(c, names);

  SweepResult s;
  try {
    s = sweep(cls, q, ns, so);
  } catch (const std::invalid_argument& e) {
    throw cli::ConfigError(e.what());
  }
  const RegimeLabel label = regime_classify(seq, p, q);
  std::ostringstream vt;
  vt << "# " << s.description << "\n";
  vt << "regime: " << to_string(label) << "\n";
  std::optional<RegimeVerdict> pred;
  if (label != RegimeLabel::Unclassified && s.estimates.size() >= 4) {
    pred = predicted_orders(label, p, q, seq);
    s.has_fit = true;
    s.fit = fit_order(s, pred->shape == RegimeVerdict::Shape::StretchedExp ? FitModel::StretchedExp
                                                                           : FitModel::PowerLaw);
    const VerdictReport v = verdict(s, *pred, vo);
    for (const std::string& line : v.lines) vt << line << "\n";
  } else if (s.estimates.size() >= 4) {
    s.has_fit = true;
    s.fit = fit_order(s, FitModel::PowerLaw);
    vt << "no predicted bracket for these parameters; power-law slope "
       << io::format_double(s.fit.slope) << "\n";
  } else {
    vt << "fewer than 4 points; no fit\n";
  }

  io::write_text(paths[0].string(), io::sweep_csv(s));
  io::write_text(paths[1].string(), io::to_json(s).dump(2) + "\n");
  io::write_text(paths[2].string(), vt.str());
  if (c.plot) {
    cli::LogLogPlot plot;
    plot.title = s.description;
    cli::Series up{"upper (projection)", {}, {}, "#1f77b4"};
    cli::Series lo{"lower (duality)", {}, {}, "#d62728"};
    for (const WidthEstimate& e : s.estimates) {
      up.x.push_back(e.n + 1.0);
      up.y.push_back(e.upper);
      lo.x.push_back(e.n + 1.0);
      lo.y.push_back(e.lower);
    }
    plot.series = {up, lo};
    if (pred && !up.x.empty()) {
      std::vector<double> a;
      std::vector<double> b;
      for (double x : up.x) {
        switch (pred->shape) {
          case RegimeVerdict::Shape::LogPower:
            a.push_back(std::pow(std::log(x), -pred->rho));
            b.push_back(a.back());
            break;
          case RegimeVerdict::Shape::Power:
            a.push_back(std::pow(x, pred->lower_exponent));
            b.push_back(std::pow(x, pred->upper_exponent));
            break;
          case RegimeVerdict::Shape::StretchedExp:
            a.push_back(std::exp(-pred->mu * std::pow(x, pred->gamma)));
            b.push_back(a.back() * std::pow(x, pred->upper_poly));
            break;
        }
      }
      plot.series.push_back(bracket_line("bracket lower side", up.x, a, up.y.front(), "#7f7f7f"));
      plot.series.push_back(bracket_line("bracket upper side", up.x, b, up.y.front(), "#2ca02c"));
    }
    io::write_text(paths[3].string(), cli::render_svg(plot));
  }
  std::cout << io::sweep_csv(s) << vt.str();
  return 0;
}

// extension-demo ---------------------------------------------------------------

struct Instance {
  CompactBody A;
  Norm X;
  int n = 1;
  std::optional<double> frozen_margin;
};

Instance instance_from(const Config& cfg) {
  if (cfg.has("fixture")) {
    std::ifstream f(cfg.text("fixture"));
    if (!f) throw cli::ConfigError("cannot read fixture '" + cfg.text("fixture") + "'");
    io::json j;
    try {
      j = io::json::parse(f);
    } catch (const std::exception& e) {
      throw cli::ConfigError(std::string("fixture: ") + e.what());
    }
    const io::json& b = j.at("body");
    std::vector<double> diag = b.at("diag").get<std::vector<double>>();
    Instance in{CompactBody(b.at("p").get<double>(), Eigen::Map<Vec>(diag.data(), static_cast<Eigen::Index>(diag.size()))),
                io::norm_from_json(j.at("space")), j.at("n").get<int>(), std::nullopt};
    if (j.contains("margin")) in.frozen_margin = j.at("margin").get<double>();
    if (cfg.has("n")) in.n = static_cast<int>(cfg.integer("n"));
    return in;
  }
  const double p = cfg.number("p");
  const double q = cfg.number("q");
  if (!(p >= 1.0) || !(q >= 1.0)) throw cli::ConfigError("p and q must be >= 1");
  const Vec d = diagonal_from(cfg);
  return {CompactBody(p, d), Norm::lp(q, static_cast<int>(d.size())),
          static_cast<int>(cfg.integer("n")), std::nullopt};
}

int cmd_extension_demo(const Common& c) {
  Config cfg = load_config(c);
  cfg.check_known({"fixture", "p", "q", "diag", "dim", "diag_rule", "ratio", "n", "eps",
                   "sample_size", "sample_seed", "linearity_tol", "chain_max_evals", "restarts",
                   "max_evals", "exchange_rounds", "exchange_tol", "seed", "workers", "certify"});
  const Instance in = instance_from(cfg);
  if (in.n < 0 || in.n > in.A.dim()) throw cli::ConfigError("n must lie in [0, dim]");
  ChainOptions co;
  co.search = search_options(cfg);
  co.eps = cfg.number("eps", co.eps);
  co.sample_size = static_cast<int>(cfg.integer("sample_size", co.sample_size));
  co.sample_seed = static_cast<std::uint64_t>(cfg.integer("sample_seed", 0));
  co.linearity_tol = cfg.number("linearity_tol", co.linearity_tol);
  co.max_evals = static_cast<int>(cfg.integer("chain_max_evals", co.max_evals));
  if (co.sample_size < 1 || !(co.eps >= 0.0)) throw cli::ConfigError("sample_size and eps out of range");
  const bool rank_one = in.A.p() == 1.0 && in.X.kind() == Norm::Kind::Polytope && in.n == 1;
  const bool certify = cfg.flag("certify", rank_one);
  if (certify && !rank_one) {
    throw cli::ConfigError("certify needs an l_1 body, a polytope space and n = 1");
  }
  apply_workers(cfg);
  const auto paths = claim_outputs(c, {"chain.csv", "extension.json"});

  const ChainReport rep = preabsolute_chain(in.A, in.X, in.n, co);
  io::write_text(paths[0].string(), io::chain_csv(rep));
  io::write_text(paths[1].string(), io::extension_replay(in.A, rep).dump(2) + "\n");

  std::cout << io::chain_csv(rep);
  if (in.n > 0) {
    std::cout << "gelfand upper " << io::format_double(rep.widths.gelfand.estimate.upper)
              << ", extension value " << io::format_double(rep.extension_value) << ", slack "
              << io::format_double(rep.slack) << ", eps " << io::format_double(co.eps)
              << ", nonlinear coefficient functions " << rep.nonlinear << "\n";
  }
  if (certify) {
    const RankOneCertificate cert = certify_rank_one_gap(in.A, in.X);
    const double drop = rep.chain.front().upper - rep.chain.back().upper;
    std::cout << "certified lambda_1 >= " << io::format_double(cert.lower) << ", d^1 = "
              << io::format_double(cert.gelfand) << (cert.gelfand_certified ? " (certified)" : "")
              << ", margin " << io::format_double(cert.margin) << "\n";
    std::cout << "chain drop " << io::format_double(drop);
    if (in.frozen_margin) std::cout << " (frozen margin " << io::format_double(*in.frozen_margin) << ")";
    std::cout << "\n";
  }
  return 0;
}

// duality ----------------------------------------------------------------------

int cmd_duality(const Common& c) {
  Config cfg = load_config(c);
  cfg.check_known({"count", "dim", "exps", "n", "lo", "restarts", "max_evals", "exchange_rounds",
                   "exchange_tol", "seed", "workers", "gap_tol"});
  const int count = static_cast<int>(cfg.integer("count", 20));
  const int dim = static_cast<int>(cfg.integer("dim", 4));
  const std::vector<double> exps = cfg.has("exps") ? cfg.numbers("exps") : std::vector<double>{1.5, 2.0, 3.0};
  for (double e : exps) {
    if (!(e > 1.0) || std::isinf(e)) throw cli::ConfigError("exps must lie in (1, inf)");
  }
  const std::vector<int> ns = int_list(cfg, "n", {1, 2});
  for (int n : ns) {
    if (n < 0 || n > dim) throw cli::ConfigError("n must lie in [0, dim]");
  }
  const double gap_tol = cfg.number("gap_tol", 0.03);
  const SearchOptions so = search_options(cfg);
  if (count < 0 || dim < 1 || dim > 16) throw cli::ConfigError("count or dim out of range");
  apply_workers(cfg);
  const auto paths = claim_outputs(c, {"duality.csv"});

  std::vector<SuiteCase> suite;
  try {
    suite = operator_suite(so.seed, count, dim, exps, ns, cfg.number("lo", 0.1));
  } catch (const std::invalid_argument& e) {
    throw cli::ConfigError(e.what());
  }
  std::vector<io::DualityRow> rows;
  int fails = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const DualityReport r = duality_check(suite[i].op, suite[i].n, so);
    rows.push_back({static_cast<int>(i), suite[i].op, r});
    const bool ok = r.gelfand_gap <= gap_tol && r.linear_gap <= gap_tol;
    if (!ok) ++fails;
    std::cout << "case " << i << " p=" << suite[i].op.p << " q=" << suite[i].op.q << " n=" << suite[i].n
              << "  gelfand gap " << io::format_double(r.gelfand_gap) << "  linear gap "
              << io::format_double(r.linear_gap) << (ok ? "" : "  EXCEEDS TOLERANCE") << "\n";
  }
  io::write_text(paths[0].string(), io::duality_csv(rows));
  std::cout << (suite.size() - static_cast<std::size_t>(fails)) << "/" << suite.size()
            << " cases within " << gap_tol << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"n-width estimation for diagonal operators and multiplier classes"};
  app.require_subcommand(1);
  Common cw, cs, ce, cd;
  CLI::App* w = app.add_subcommand("widths", "Kolmogorov, Gelfand and linear widths of a diagonal operator");
  CLI::App* s = app.add_subcommand("sweep", "Width estimates over an n grid with a regime verdict");
  CLI::App* e = app.add_subcommand("extension-demo", "Preabsolute chain and extension replay");
  CLI::App* d = app.add_subcommand("duality", "Duality gaps over a seeded operator suite");
  add_common(w, cw);
  add_common(s, cs);
  add_common(e, ce);
  add_common(d, cd);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kExitUsage;
  }
  try {
    if (w->parsed()) return cmd_widths(cw);
    if (s->parsed()) return cmd_sweep(cs);
    if (e->parsed()) return cmd_extension_demo(ce);
    if (d->parsed()) return cmd_duality(cd);
  } catch (const cli::ConfigError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const OutputExists& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitExists;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
