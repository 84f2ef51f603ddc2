#include "fse/strength.hpp"

#include <cmath>
#include <numbers>

namespace fse {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::nonparam:
      return "nonparam";
    case Method::known_prior:
      return "known-prior";
    case Method::balanced:
      return "balanced";
    case Method::unbalanced:
      return "unbalanced";
  }
  return "unknown";
}

EvidenceStrength EvidenceStrength::from_log(double ln_value, Method method) {
  EvidenceStrength s;
  s.method = method;
  s.log10_value = ln_value / std::numbers::ln10;
  s.value = std::exp(ln_value);
  s.saturated = std::fabs(s.log10_value) > kSaturationLog10;
  return s;
}

EvidenceStrength EvidenceStrength::unity(Method method) {
  EvidenceStrength s;
  s.method = method;
  return s;
}

EvidenceStrength EvidenceStrength::inverted() const {
  EvidenceStrength s = *this;
  s.log10_value = -log10_value;
  s.value = 1.0 / value;
  return s;
}

}  // namespace fse
