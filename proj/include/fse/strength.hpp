#pragma once

#include <optional>
#include <string_view>

namespace fse {

enum class Method { nonparam, known_prior, balanced, unbalanced };

std::string_view method_name(Method m);

/// |log10 V| beyond this is reported as saturated; the linear value is not emitted.
inline constexpr double kSaturationLog10 = 300.0;

/// A computed strength of evidence V(x). log10_value is the primary quantity;
/// value is 10^log10_value where representable (inf/0 otherwise).
struct EvidenceStrength {
  double value = 1.0;
  double log10_value = 0.0;
  Method method = Method::nonparam;
  std::optional<double> tau_hat;
  std::optional<double> mu_hat;
  bool in_flat_region = false;
  bool saturated = false;

  /// Builds from a natural-log value; sets `saturated` past kSaturationLog10.
  static EvidenceStrength from_log(double ln_value, Method method);

  /// V = 1 exactly.
  static EvidenceStrength unity(Method method);

  /// Reciprocal strength (log negated); diagnostics are kept.
  EvidenceStrength inverted() const;
};

}  // namespace fse
