#include "fse/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fse/errors.hpp"
#include "fse/models.hpp"
#include "fse/nonparam.hpp"
#include "fse/normal.hpp"
#include "fse/parametric.hpp"
#include "fse/verify.hpp"

namespace fse::cli {
namespace {

// Input validation failure tied to a flag; exit status 2.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Params {
  double theta0 = 0.0;
  double sigma = 0.0;
  double alpha = 0.0;
  double mu = 0.0;
  double tau = 0.0;
  double x = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
  int points = 0;
  std::string methods;
  std::string model = "normal-location";
  std::string format = "csv";
  std::string preset;
};

constexpr int kPresetPoints = 601;
constexpr double kPresetTheta0 = 1.0;
constexpr double kPresetSigma = 0.1;

bool given(const CLI::App* app, const std::string& flag) { return app->count(flag) > 0; }

void need(const CLI::App* app, const std::string& flag, std::string_view why) {
  if (!given(app, flag)) throw UsageError(flag + " is required " + std::string(why));
}

void check_positive(double v, const std::string& flag) {
  if (!std::isfinite(v) || !(v > 0.0)) throw UsageError(flag + " must be a finite value > 0");
}

void check_finite(double v, const std::string& flag) {
  if (!std::isfinite(v)) throw UsageError(flag + " must be finite");
}

void check_probability(double v, const std::string& flag) {
  if (!(v > 0.0 && v < 1.0)) throw UsageError(flag + " must lie strictly between 0 and 1");
}

void check_nonnegative(double v, const std::string& flag) {
  if (!std::isfinite(v) || v < 0.0) throw UsageError(flag + " must be a finite value >= 0");
}

EvidenceModel make_model(const std::string& name, double sigma) {
  if (name == "normal-location") return NormalLocationModel(sigma);
  if (name == "mixture-location") return normal_mixture_location(sigma);
  if (name == "normal-scale") return normal_scale();
  throw UsageError("--model must be one of normal-location, normal-scale, mixture-location");
}

Series nonparam_series(std::string label, const std::string& model_name, double theta0, double sigma) {
  auto model = std::make_shared<EvidenceModel>(make_model(model_name, sigma));
  return {std::move(label), [model, theta0](double x) { return v_nonparam(*model, x, theta0); }};
}

Series known_prior_series(std::string label, double mu, double tau, double theta0, double sigma) {
  const NormalPrior prior(mu, tau);
  return {std::move(label), [=](double x) { return v_known_prior(x, prior, sigma, theta0); }};
}

Series balanced_series(std::string label, double theta0, double sigma) {
  return {std::move(label), [=](double x) { return v_balanced(x, theta0, sigma); }};
}

Series unbalanced_series(std::string label, double theta0, double sigma, double alpha) {
  return {std::move(label), [=](double x) { return v_unbalanced(x, theta0, sigma, alpha); }};
}

std::vector<std::string> split_methods(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw UsageError("--methods contains an empty entry");
    out.push_back(item);
  }
  if (out.empty()) throw UsageError("--methods must name at least one method");
  return out;
}

// Shared checks for the flags a method needs.
void validate_for_method(const CLI::App* app, const Params& p, const std::string& method) {
  const std::string why = "by method " + method;
  if (method != "nonparam" || p.model != "normal-scale") {
    need(app, "--sigma", why);
    check_positive(p.sigma, "--sigma");
  }
  need(app, "--theta0", why);
  check_finite(p.theta0, "--theta0");
  if (method == "nonparam" && p.model == "normal-scale") {
    check_positive(p.theta0, "--theta0");
  }
  if (method == "known-prior") {
    need(app, "--mu", why);
    need(app, "--tau", why);
    check_finite(p.mu, "--mu");
    check_nonnegative(p.tau, "--tau");
  } else if (method == "unbalanced") {
    need(app, "--alpha", why);
    check_probability(p.alpha, "--alpha");
  } else if (method == "nonparam") {
    if (given(app, "--alpha")) check_probability(p.alpha, "--alpha");
  } else if (method != "balanced") {
    throw UsageError("--methods: unknown method '" + method + "' (expected nonparam, known-prior, balanced, unbalanced)");
  }
}

Series series_for(const std::string& method, const Params& p) {
  if (method == "nonparam") return nonparam_series(method, p.model, p.theta0, p.sigma);
  if (method == "known-prior") return known_prior_series(method, p.mu, p.tau, p.theta0, p.sigma);
  if (method == "balanced") return balanced_series(method, p.theta0, p.sigma);
  return unbalanced_series(method, p.theta0, p.sigma, p.alpha);
}

void emit(const std::vector<Row>& rows, const Params& p, std::ostream& out) {
  if (p.format == "json") {
    write_json(rows, out);
  } else {
    write_csv(rows, out);
  }
}

double round12(double v) {
  const std::string s = format_number(v);
  double parsed = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), parsed);
  return parsed;
}

void add_format(CLI::App* sub, Params& p) {
  sub->add_option("--format", p.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

CLI::Option* add_number(CLI::App* sub, const std::string& flag, double& target, const std::string& desc) {
  return sub->add_option(flag, target, desc);
}

int print_verify(std::ostream& out) {
  bool all = true;
  int index = 1;
  for (const auto& r : verify::run_all()) {
    out << (r.passed ? "PASS" : "FAIL") << "  [" << index++ << "] " << r.name << ": " << r.detail << '\n';
    all = all && r.passed;
  }
  out << (all ? "all checks passed" : "some checks FAILED") << '\n';
  return all ? kExitOk : kExitNumerical;
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::vector<Row> evaluate_curve(const std::vector<Series>& series, double x_min, double x_max, int points) {
  if (!(x_min < x_max)) throw DomainError("curve requires x_min < x_max");
  if (points < 2) throw DomainError("curve requires at least 2 points");
  std::vector<Row> rows;
  rows.reserve(static_cast<std::size_t>(points) * series.size());
  for (int i = 0; i < points; ++i) {
    const double x = i + 1 == points ? x_max : x_min + (x_max - x_min) * i / (points - 1);
    for (const Series& s : series) {
      Row row{x, s.label, std::nullopt};
      try {
        row.strength = s.evaluate(x);
      } catch (const DomainError&) {
        // Point outside this method's domain: emitted with empty fields.
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<Row> preset_rows(std::string_view name) {
  const double t0 = kPresetTheta0;
  const double sg = kPresetSigma;
  const double lo = t0 - 5.0 * sg;
  const double hi = t0 + 5.0 * sg;
  if (name == "fig1") {
    return evaluate_curve({nonparam_series("nonparam", "normal-location", t0, sg)}, lo, hi, kPresetPoints);
  }
  if (name == "fig2") {
    return evaluate_curve({nonparam_series("nonparam", "normal-scale", t0, sg)}, -3.0 * t0, 3.0 * t0, kPresetPoints);
  }
  if (name == "fig3") {
    Series lambda{"lambda", [](double y) { return EvidenceStrength::from_log(log_lambda_ratio(y).value, Method::nonparam); }};
    return evaluate_curve({lambda}, -3.0, 3.0, kPresetPoints);
  }
  if (name == "fig4") {
    return evaluate_curve({known_prior_series("known-prior[mu=1.2]", 1.2, 0.3, t0, sg),
                           known_prior_series("known-prior[mu=0.8]", 0.8, 0.3, t0, sg)},
                          lo, hi, kPresetPoints);
  }
  if (name == "fig5") {
    return evaluate_curve({nonparam_series("nonparam", "normal-location", t0, sg), balanced_series("balanced", t0, sg)},
                          lo, hi, kPresetPoints);
  }
  if (name == "fig6") {
    return evaluate_curve({nonparam_series("nonparam", "normal-location", t0, sg), balanced_series("balanced", t0, sg),
                           unbalanced_series("unbalanced[alpha=0.55]", t0, sg, 0.55),
                           unbalanced_series("unbalanced[alpha=0.75]", t0, sg, 0.75)},
                          lo, hi, kPresetPoints);
  }
  throw DomainError("--preset must be one of fig1, fig2, fig3, fig4, fig5, fig6");
}

void write_csv(const std::vector<Row>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const Row& r : rows) {
    out << format_number(r.x) << ',' << r.method << ',';
    if (r.strength) {
      const EvidenceStrength& s = *r.strength;
      if (!s.saturated) out << format_number(s.value);
      out << ',' << format_number(s.log10_value) << ',';
      if (s.tau_hat) out << format_number(*s.tau_hat);
      out << ',' << (s.in_flat_region ? "true" : "false");
    } else {
      out << ",,,";
    }
    out << '\n';
  }
}

void write_json(const std::vector<Row>& rows, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const Row& r : rows) {
    nlohmann::ordered_json j;
    j["x"] = round12(r.x);
    j["method"] = r.method;
    if (r.strength) {
      const EvidenceStrength& s = *r.strength;
      if (!s.saturated) j["v"] = round12(s.value);
      j["log10_v"] = round12(s.log10_value);
      if (s.tau_hat) j["tau_hat"] = round12(*s.tau_hat);
      j["flat"] = s.in_flat_region;
      j["saturated"] = s.saturated;
    }
    doc["rows"].push_back(std::move(j));
  }
  out << doc.dump(2) << '\n';
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Strength of evidence (Bayes factors) for one-sided hypotheses theta >= theta0 vs theta < theta0",
               "fse"};
  app.require_subcommand(1);
  Params p;

  auto* nonparam = app.add_subcommand("nonparam", "Ratio of one-sided likelihood suprema");
  add_number(nonparam, "--theta0", p.theta0, "Threshold")->required();
  add_number(nonparam, "--sigma", p.sigma, "Measurement standard error (location models)");
  add_number(nonparam, "--x", p.x, "Evidence value")->required();
  add_number(nonparam, "--alpha", p.alpha, "Prior P(H_p); does not change the value");
  nonparam->add_option("--model", p.model, "Measurement family")
      ->check(CLI::IsMember({"normal-location", "normal-scale", "mixture-location"}));
  add_format(nonparam, p);

  auto* known = app.add_subcommand("known-prior", "Bayes factor under a known N(mu, tau^2) prior");
  add_number(known, "--theta0", p.theta0, "Threshold")->required();
  add_number(known, "--sigma", p.sigma, "Measurement standard error")->required();
  add_number(known, "--mu", p.mu, "Prior mean")->required();
  add_number(known, "--tau", p.tau, "Prior standard deviation")->required();
  add_number(known, "--x", p.x, "Evidence value")->required();
  add_format(known, p);

  auto* balanced = app.add_subcommand("balanced", "Fitted normal prior with P(H_p) = 0.5");
  add_number(balanced, "--theta0", p.theta0, "Threshold")->required();
  add_number(balanced, "--sigma", p.sigma, "Measurement standard error")->required();
  add_number(balanced, "--x", p.x, "Evidence value")->required();
  add_format(balanced, p);

  auto* unbalanced = app.add_subcommand("unbalanced", "Fitted normal prior with P(H_p) = alpha");
  add_number(unbalanced, "--theta0", p.theta0, "Threshold")->required();
  add_number(unbalanced, "--sigma", p.sigma, "Measurement standard error")->required();
  add_number(unbalanced, "--alpha", p.alpha, "Prior P(H_p)")->required();
  add_number(unbalanced, "--x", p.x, "Evidence value")->required();
  add_format(unbalanced, p);

  auto* flat = app.add_subcommand("flat-endpoint", "Left end x0 of the flat interval [x0, theta0], alpha > 0.5");
  add_number(flat, "--theta0", p.theta0, "Threshold")->required();
  add_number(flat, "--sigma", p.sigma, "Measurement standard error")->required();
  add_number(flat, "--alpha", p.alpha, "Prior P(H_p)")->required();
  add_format(flat, p);

  auto* curve = app.add_subcommand("curve", "Evaluate methods over an x grid, or a figure preset");
  auto* preset_opt = curve->add_option("--preset", p.preset, "Figure preset")
                         ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4", "fig5", "fig6"}));
  const std::vector<CLI::Option*> grid_options{
      curve->add_option("--methods", p.methods, "Comma-separated methods"),
      add_number(curve, "--theta0", p.theta0, "Threshold"),
      add_number(curve, "--sigma", p.sigma, "Measurement standard error"),
      add_number(curve, "--alpha", p.alpha, "Prior P(H_p)"),
      add_number(curve, "--mu", p.mu, "Prior mean"),
      add_number(curve, "--tau", p.tau, "Prior standard deviation"),
      add_number(curve, "--x-min", p.x_min, "Grid start"),
      add_number(curve, "--x-max", p.x_max, "Grid end"),
      curve->add_option("--points", p.points, "Grid size"),
      curve->add_option("--model", p.model, "Family for nonparam")
          ->check(CLI::IsMember({"normal-location", "normal-scale", "mixture-location"})),
  };
  for (CLI::Option* opt : grid_options) opt->excludes(preset_opt);
  add_format(curve, p);

  auto* verify_cmd = app.add_subcommand("verify", "Run the closed-form vs oracle cross-checks");

  std::vector<const char*> argv{"fse"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    if (msg.empty()) msg = "invalid arguments";
    err << "error: " << msg << '\n';
    return kExitUsage;
  }

  try {
    std::vector<Row> rows;
    if (nonparam->parsed()) {
      validate_for_method(nonparam, p, "nonparam");
      check_finite(p.x, "--x");
      if (p.model == "normal-scale" && p.x == 0.0) throw UsageError("--x must be nonzero for --model normal-scale");
      rows = {Row{p.x, "nonparam", series_for("nonparam", p).evaluate(p.x)}};
    } else if (known->parsed()) {
      validate_for_method(known, p, "known-prior");
      check_finite(p.x, "--x");
      rows = {Row{p.x, "known-prior", v_known_prior(p.x, NormalPrior(p.mu, p.tau), p.sigma, p.theta0)}};
    } else if (balanced->parsed()) {
      validate_for_method(balanced, p, "balanced");
      check_finite(p.x, "--x");
      rows = {Row{p.x, "balanced", v_balanced(p.x, p.theta0, p.sigma)}};
    } else if (unbalanced->parsed()) {
      validate_for_method(unbalanced, p, "unbalanced");
      check_finite(p.x, "--x");
      rows = {Row{p.x, "unbalanced", v_unbalanced(p.x, p.theta0, p.sigma, p.alpha)}};
    } else if (flat->parsed()) {
      validate_for_method(flat, p, "unbalanced");
      if (!(p.alpha > 0.5)) throw UsageError("--alpha must be > 0.5 for flat-endpoint");
      const double x0 = flat_left_endpoint(p.theta0, p.sigma, p.alpha);
      rows = {Row{x0, "unbalanced", v_unbalanced(x0, p.theta0, p.sigma, p.alpha)}};
    } else if (curve->parsed()) {
      if (given(curve, "--preset")) {
        rows = preset_rows(p.preset);
      } else {
        need(curve, "--methods", "unless --preset is given");
        for (const char* flag : {"--x-min", "--x-max", "--points"}) need(curve, flag, "for curve");
        check_finite(p.x_min, "--x-min");
        check_finite(p.x_max, "--x-max");
        if (!(p.x_min < p.x_max)) throw UsageError("--x-min must be smaller than --x-max");
        if (p.points < 2) throw UsageError("--points must be at least 2");
        std::vector<Series> series;
        for (const auto& m : split_methods(p.methods)) {
          validate_for_method(curve, p, m);
          series.push_back(series_for(m, p));
        }
        rows = evaluate_curve(series, p.x_min, p.x_max, p.points);
      }
    } else if (verify_cmd->parsed()) {
      return print_verify(out);
    }
    emit(rows, p, out);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const OverflowError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace fse::cli
