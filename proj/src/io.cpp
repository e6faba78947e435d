#include "nwidths/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nwidths::io {
namespace {

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from(const json& a) {
  Vec v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

// Row-major nested arrays.
json mat_json(const Mat& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i).transpose()));
  return a;
}

Mat mat_from(const json& a) {
  if (a.empty()) return Mat(0, 0);
  Mat m(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(a[0].size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != static_cast<std::size_t>(m.cols())) {
      throw std::invalid_argument("json: ragged matrix");
    }
    m.row(static_cast<Eigen::Index>(i)) = vec_from(a[i]).transpose();
  }
  return m;
}

// JSON has no inf; store it as a string.
json num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double num_from(const json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  return std::nan("");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string header() { return "# schema_version=" + std::to_string(kSchemaVersion) + "\n"; }

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string widths_csv(const std::vector<WidthRow>& rows) {
  std::ostringstream os;
  os << header() << "width,n,lower,upper,method,certified,budget_exhausted\n";
  for (const WidthRow& r : rows) {
    const WidthEstimate& e = r.estimate;
    os << r.width << ',' << e.n << ',' << format_double(e.lower) << ','
       << format_double(e.upper) << ',' << csv_field(e.method_string()) << ','
       << (e.certified ? 1 : 0) << ',' << (e.budget_exhausted ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string sweep_csv(const SweepResult& s) {
  std::ostringstream os;
  os << header() << "n,lower,upper,method,certified\n";
  for (const WidthEstimate& e : s.estimates) {
    os << e.n << ',' << format_double(e.lower) << ',' << format_double(e.upper) << ','
       << csv_field(e.method_string()) << ',' << (e.certified ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string chain_csv(const ChainReport& c) {
  std::ostringstream os;
  os << header() << "m,lower,upper,method,certified\n";
  for (std::size_t m = 0; m < c.chain.size(); ++m) {
    const WidthEstimate& e = c.chain[m];
    os << m << ',' << format_double(e.lower) << ',' << format_double(e.upper) << ','
       << csv_field(e.method_string()) << ',' << (e.certified ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string duality_csv(const std::vector<DualityRow>& rows) {
  std::ostringstream os;
  os << header() << "case,p,q,n,quantity,lower,upper,method,certified,gap\n";
  auto line = [&](const DualityRow& r, const char* what, const WidthEstimate& e, double gap) {
    os << r.index << ',' << format_double(r.op.p) << ',' << format_double(r.op.q) << ','
       << r.report.n << ',' << what << ',' << format_double(e.lower) << ','
       << format_double(e.upper) << ',' << csv_field(e.method_string()) << ','
       << (e.certified ? 1 : 0) << ',' << format_double(gap) << '\n';
  };
  for (const DualityRow& r : rows) {
    line(r, "gelfand_u", r.report.gelfand_u, r.report.gelfand_gap);
    line(r, "kolmogorov_adjoint", r.report.kolmogorov_adjoint, r.report.gelfand_gap);
    line(r, "linear_u", r.report.linear_u, r.report.linear_gap);
    line(r, "linear_adjoint", r.report.linear_adjoint, r.report.linear_gap);
  }
  return os.str();
}

json to_json(const WidthEstimate& e) {
  return json{{"n", e.n},
              {"lower", num(e.lower)},
              {"upper", num(e.upper)},
              {"raw_upper", num(e.raw_upper)},
              {"method", e.method},
              {"certified", e.certified},
              {"budget_exhausted", e.budget_exhausted},
              {"monotone_violation", e.monotone_violation}};
}

WidthEstimate width_estimate_from_json(const json& j) {
  WidthEstimate e;
  e.n = j.at("n").get<int>();
  e.lower = num_from(j.at("lower"));
  e.upper = num_from(j.at("upper"));
  e.raw_upper = j.contains("raw_upper") ? num_from(j.at("raw_upper")) : e.upper;
  e.method = j.at("method").get<std::vector<std::string>>();
  e.certified = j.at("certified").get<bool>();
  e.budget_exhausted = j.value("budget_exhausted", false);
  e.monotone_violation = j.value("monotone_violation", false);
  return e;
}

json to_json(const Norm& n) {
  if (n.kind() == Norm::Kind::Polytope) {
    return json{{"kind", "polytope"}, {"facets", mat_json(n.facets())}};
  }
  return json{{"kind", "lp"}, {"p", num(n.p())}, {"scale", vec_json(n.scale())}};
}

Norm norm_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "polytope") return Norm::polytope(mat_from(j.at("facets")));
  if (kind == "lp") return Norm::scaled_lp(num_from(j.at("p")), vec_from(j.at("scale")));
  throw std::invalid_argument("json: unknown norm kind '" + kind + "'");
}

json to_json(const FitResult& f) {
  json j{{"model", to_string(f.model)}, {"points", f.points}, {"residual", f.residual}};
  if (f.model == FitModel::PowerLaw) {
    j["slope"] = f.slope;
    j["intercept"] = f.intercept;
  } else {
    j["gamma"] = f.gamma;
    j["mu"] = f.mu;
    j["c"] = f.c;
  }
  return j;
}

json to_json(const SweepResult& s) {
  json est = json::array();
  for (const WidthEstimate& e : s.estimates) est.push_back(to_json(e));
  json j{{"schema_version", kSchemaVersion},
         {"class", s.description},
         {"p", s.cls.p},
         {"q", s.q},
         {"beta", s.cls.beta},
         {"K", s.K},
         {"grid_N", s.grid_N},
         {"n", s.n_list},
         {"estimates", est}};
  if (s.has_fit) j["fit"] = to_json(s.fit);
  return j;
}

json extension_replay(const CompactBody& A, const ChainReport& c) {
  json fns = json::array();
  for (const CoefficientFunction& f : c.extension.ext_functions) {
    fns.push_back(json{{"table", vec_json(f.table)},
                       {"linear", f.linear},
                       {"deviation", f.deviation}});
  }
  json chain = json::array();
  for (const WidthEstimate& e : c.chain) chain.push_back(to_json(e));
  return json{{"schema_version", kSchemaVersion},
              {"body", {{"p", num(A.p())}, {"diag", vec_json(A.diag())}}},
              {"base", to_json(c.extension.base)},
              {"sample", mat_json(c.extension.sample)},
              {"functions", fns},
              {"Phi", mat_json(c.Phi)},
              {"extension_value", c.extension_value},
              {"slack", c.slack},
              {"chain", chain}};
}

ReplayCheck replay_extension(const json& j) {
  if (j.at("schema_version").get<int>() != kSchemaVersion) {
    throw std::invalid_argument("replay: unsupported schema version");
  }
  const CompactBody A(num_from(j.at("body").at("p")), vec_from(j.at("body").at("diag")));
  const Norm base = norm_from_json(j.at("base"));
  const Mat sample = mat_from(j.at("sample"));
  std::vector<CoefficientFunction> fns;
  for (const json& f : j.at("functions")) {
    CoefficientFunction cf = linearity_filter(vec_from(f.at("table")), sample);
    cf.linear = f.at("linear").get<bool>();
    fns.push_back(std::move(cf));
  }
  const ExtensionSpace ext = build_extension(base, sample, std::move(fns));
  ReplayCheck r;
  r.recorded = j.at("extension_value").get<double>();
  r.recomputed = extension_width_value(A, ext, mat_from(j.at("Phi"))).upper;
  return r;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace nwidths::io
