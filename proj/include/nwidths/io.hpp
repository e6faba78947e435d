#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "nwidths/asymptotics.hpp"
#include "nwidths/extension.hpp"
#include "nwidths/widths.hpp"

namespace nwidths::io {

inline constexpr int kSchemaVersion = 1;

using json = nlohmann::json;

/// Shortest round-trip form, "%.17g"; inf and nan spelled out.
std::string format_double(double v);

struct WidthRow {
  std::string width;  // kolmogorov, gelfand, linear, ...
  WidthEstimate estimate;
};

/// width,n,lower,upper,method,certified,budget_exhausted
std::string widths_csv(const std::vector<WidthRow>& rows);
/// n,lower,upper,method,certified
std::string sweep_csv(const SweepResult& s);
/// m,lower,upper,method,certified
std::string chain_csv(const ChainReport& c);

struct DualityRow {
  int index = 0;
  DiagonalOperator op;
  DualityReport report;
};

/// case,p,q,n,quantity,lower,upper,method,certified,gap; two rows per side.
std::string duality_csv(const std::vector<DualityRow>& rows);

json to_json(const WidthEstimate& e);
WidthEstimate width_estimate_from_json(const json& j);
json to_json(const Norm& n);
Norm norm_from_json(const json& j);
json to_json(const SweepResult& s);
json to_json(const FitResult& f);

/// Everything needed to re-evaluate the extension value without searching.
json extension_replay(const CompactBody& A, const ChainReport& c);

struct ReplayCheck {
  double recorded = 0.0;
  double recomputed = 0.0;
};
ReplayCheck replay_extension(const json& j);

void write_text(const std::string& path, const std::string& text);

}  // namespace nwidths::io
