#pragma once

#include <string>
#include <vector>

#include "nwidths/classes.hpp"
#include "nwidths/widths.hpp"

namespace nwidths {

enum class FitModel { PowerLaw, StretchedExp };

std::string to_string(FitModel m);

/// Power law: log v = intercept + slope log x.
/// Stretched exponential: log v = c - mu x^gamma.
/// The abscissa is x = n + 1.
struct FitResult {
  FitModel model = FitModel::PowerLaw;
  double slope = 0.0;
  double intercept = 0.0;
  double mu = 0.0;
  double gamma = 0.0;
  double c = 0.0;
  /// Root-mean-square residual in log v.
  double residual = 0.0;
  int points = 0;
};

struct SweepOptions {
  /// K = 0 picks 4 * max n; grid_N = 0 picks 4 K.
  ProjectionOptions projection;
  std::string estimator = "projection";
};

struct SweepResult {
  std::string description;
  FunctionClass cls;
  double q = 2.0;
  std::vector<int> n_list;
  std::vector<WidthEstimate> estimates;
  int K = 0;
  int grid_N = 0;
  bool has_fit = false;
  FitResult fit;
};

SweepResult sweep(const FunctionClass& cls, double q, const std::vector<int>& n_list,
                  const SweepOptions& opts = {});

/// Fit on the upper estimates (or the lowers when use_lower is set).
FitResult fit_order(const SweepResult& s, FitModel model, bool use_lower = false);
FitResult fit_values(const std::vector<double>& x, const std::vector<double>& v, FitModel model);

struct VerdictOptions {
  double C = 3.0;          // log-ratio bound for the ~ check
  double tol = 0.1;        // slope tolerance for power brackets
  double gamma_tol = 0.05; // relative tolerance on the fitted gamma
  double envelope_tol = 0.15;
  double drift_tol = 0.1;  // residual slope against log x
};

struct VerdictReport {
  RegimeLabel label = RegimeLabel::Unclassified;
  bool pass = false;
  /// Lower-side check; pass/fail except for the small-smoothness regime,
  /// where it is reported only.
  bool lower_pass = false;
  bool lower_informational = false;
  double upper_statistic = 0.0;
  double lower_statistic = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  std::vector<std::string> lines;
};

VerdictReport verdict(const SweepResult& s, const RegimeVerdict& predicted,
                      const VerdictOptions& opts = {});

}  // namespace nwidths
