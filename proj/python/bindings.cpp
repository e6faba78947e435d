#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nwidths/asymptotics.hpp"
#include "nwidths/extension.hpp"
#include "nwidths/io.hpp"
#include "nwidths/widths.hpp"

namespace py = pybind11;
using namespace nwidths;

namespace {

SearchOptions search_opts(int restarts, std::uint64_t seed, int max_evals) {
  SearchOptions o;
  o.restarts = restarts;
  o.seed = seed;
  o.max_evals = max_evals;
  return o;
}

Norm target_norm(const std::string& kind, double q, int dim, const Mat& facets) {
  if (kind == "lp") return Norm::lp(q, dim);
  if (kind == "polytope") return Norm::polytope(facets);
  throw std::invalid_argument("space must be 'lp' or 'polytope'");
}

}  // namespace

PYBIND11_MODULE(_nwidths, m) {
  m.doc() = "n-widths of diagonal operators and multiplier classes";

  py::class_<WidthEstimate>(m, "WidthEstimate")
      .def_readonly("n", &WidthEstimate::n)
      .def_readonly("lower", &WidthEstimate::lower)
      .def_readonly("upper", &WidthEstimate::upper)
      .def_readonly("raw_upper", &WidthEstimate::raw_upper)
      .def_readonly("method", &WidthEstimate::method)
      .def_readonly("certified", &WidthEstimate::certified)
      .def_readonly("budget_exhausted", &WidthEstimate::budget_exhausted)
      .def("to_json", [](const WidthEstimate& e) { return io::to_json(e).dump(); })
      .def("__repr__", [](const WidthEstimate& e) {
        return "WidthEstimate(n=" + std::to_string(e.n) + ", lower=" + io::format_double(e.lower) +
               ", upper=" + io::format_double(e.upper) + ", method=" + e.method_string() + ")";
      });

  py::class_<MultiplierSequence>(m, "MultiplierSequence")
      .def_static("sobolev", &MultiplierSequence::sobolev, py::arg("r"))
      .def_static("super_small", &MultiplierSequence::super_small, py::arg("rho"), py::arg("p"),
                  py::arg("q"))
      .def_static("exponential", &MultiplierSequence::exponential, py::arg("mu"), py::arg("gamma"))
      .def_static("from_table", &MultiplierSequence::from_table, py::arg("table"))
      .def("__call__", &MultiplierSequence::at)
      .def("describe", &MultiplierSequence::describe);

  m.def("widths",
        [](const Vec& diag, double p, double q, int n, int restarts, std::uint64_t seed, int max_evals) {
          const DiagonalOperator u(diag, p, q);
          const WidthTriple t = compute_widths(u.body(), u.target(), n, search_opts(restarts, seed, max_evals));
          py::dict d;
          d["kolmogorov"] = t.kolmogorov.estimate;
          d["gelfand"] = t.gelfand.estimate;
          d["linear"] = t.linear.estimate;
          return d;
        },
        py::arg("diag"), py::arg("p"), py::arg("q"), py::arg("n"), py::arg("restarts") = 16,
        py::arg("seed") = 0, py::arg("max_evals") = 2000,
        "Kolmogorov, Gelfand and linear widths of diag: l_p -> l_q.");

  m.def("svd_oracle",
        [](const Vec& diag, int n) { return svd_oracle(DiagonalOperator(diag, 2.0, 2.0), n); },
        py::arg("diag"), py::arg("n"));

  m.def("duality_check",
        [](const Vec& diag, double p, double q, int n, int restarts, std::uint64_t seed) {
          const DualityReport r =
              duality_check(DiagonalOperator(diag, p, q), n, search_opts(restarts, seed, 2000));
          py::dict d;
          d["gelfand"] = r.gelfand_u;
          d["kolmogorov_adjoint"] = r.kolmogorov_adjoint;
          d["linear"] = r.linear_u;
          d["linear_adjoint"] = r.linear_adjoint;
          d["gelfand_gap"] = r.gelfand_gap;
          d["linear_gap"] = r.linear_gap;
          return d;
        },
        py::arg("diag"), py::arg("p"), py::arg("q"), py::arg("n"), py::arg("restarts") = 8,
        py::arg("seed") = 0);

  m.def("regime_classify",
        [](const MultiplierSequence& s, double p, double q) { return to_string(regime_classify(s, p, q)); },
        py::arg("seq"), py::arg("p"), py::arg("q"));

  m.def("sweep",
        [](const MultiplierSequence& seq, double p, double q, const std::vector<int>& ns, double beta,
           std::uint64_t seed) {
          SweepOptions o;
          o.projection.seed = seed;
          SweepResult s = sweep(FunctionClass(seq, p, beta), q, ns, o);
          const RegimeLabel label = regime_classify(seq, p, q);
          py::dict d;
          d["n"] = s.n_list;
          std::vector<double> lo;
          std::vector<double> up;
          for (const WidthEstimate& e : s.estimates) {
            lo.push_back(e.lower);
            up.push_back(e.upper);
          }
          d["lower"] = lo;
          d["upper"] = up;
          d["regime"] = to_string(label);
          if (label != RegimeLabel::Unclassified && s.estimates.size() >= 4) {
            const RegimeVerdict pred = predicted_orders(label, p, q, seq);
            s.fit = fit_order(s, pred.shape == RegimeVerdict::Shape::StretchedExp ? FitModel::StretchedExp
                                                                                 : FitModel::PowerLaw);
            s.has_fit = true;
            const VerdictReport v = verdict(s, pred);
            d["verdict"] = v.pass;
            d["verdict_lines"] = v.lines;
          }
          d["json"] = io::to_json(s).dump();
          return d;
        },
        py::arg("seq"), py::arg("p"), py::arg("q"), py::arg("n"), py::arg("beta") = 0.0,
        py::arg("seed") = 0);

  m.def("fit",
        [](const std::vector<double>& x, const std::vector<double>& v, const std::string& model) {
          const FitModel fm = model == "power" ? FitModel::PowerLaw : FitModel::StretchedExp;
          if (model != "power" && model != "stretched_exp") {
            throw std::invalid_argument("model must be 'power' or 'stretched_exp'");
          }
          const FitResult f = fit_values(x, v, fm);
          py::dict d;
          d["slope"] = f.slope;
          d["intercept"] = f.intercept;
          d["mu"] = f.mu;
          d["gamma"] = f.gamma;
          d["c"] = f.c;
          d["residual"] = f.residual;
          return d;
        },
        py::arg("x"), py::arg("v"), py::arg("model") = "power");

  m.def("extension_chain",
        [](const Vec& diag, double p, const std::string& space, double q, const Mat& facets, int n,
           int restarts, int sample_size, std::uint64_t seed) {
          const CompactBody A(p, diag);
          const Norm X = target_norm(space, q, A.dim(), facets);
          ChainOptions co;
          co.search = search_opts(restarts, seed, 2000);
          co.sample_size = sample_size;
          const ChainReport r = preabsolute_chain(A, X, n, co);
          py::dict d;
          d["chain"] = r.chain;
          d["gelfand"] = r.widths.gelfand.estimate;
          d["extension_value"] = r.extension_value;
          d["slack"] = r.slack;
          d["nonlinear"] = r.nonlinear;
          return d;
        },
        py::arg("diag"), py::arg("p"), py::arg("space") = "lp", py::arg("q") = 2.0,
        py::arg("facets") = Mat(0, 0), py::arg("n") = 1, py::arg("restarts") = 8,
        py::arg("sample_size") = 1000, py::arg("seed") = 0);

  m.def("certify_rank_one_gap",
        [](const Vec& diag, const Mat& facets) {
          const RankOneCertificate c = certify_rank_one_gap(CompactBody(1.0, diag), Norm::polytope(facets));
          py::dict d;
          d["lower"] = c.lower;
          d["upper"] = c.upper;
          d["gelfand"] = c.gelfand;
          d["margin"] = c.margin;
          d["cells"] = c.cells;
          return d;
        },
        py::arg("diag"), py::arg("facets"));
}
