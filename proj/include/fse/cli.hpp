#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fse/strength.hpp"

namespace fse::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

inline constexpr std::string_view kCsvHeader = "x,method,v,log10_v,tau_hat,flat";

enum class Format { csv, json };

/// One output line. `strength` is empty where the point is outside the method's
/// domain (e.g. x = 0 for the scale family); those fields are then emitted empty.
struct Row {
  double x = 0.0;
  std::string method;
  std::optional<EvidenceStrength> strength;
};

/// A labelled curve x -> V(x).
struct Series {
  std::string label;
  std::function<EvidenceStrength(double)> evaluate;
};

/// Grid x_i = x_min + (x_max - x_min) i / (points - 1); rows ordered by x, then by series.
std::vector<Row> evaluate_curve(const std::vector<Series>& series, double x_min, double x_max, int points);

/// Named figure presets: fig1 ... fig6.
std::vector<Row> preset_rows(std::string_view name);

/// %.12g without locale; -0 prints as 0.
std::string format_number(double v);

void write_csv(const std::vector<Row>& rows, std::ostream& out);
void write_json(const std::vector<Row>& rows, std::ostream& out);

/// Entry point. args excludes the program name. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fse::cli
