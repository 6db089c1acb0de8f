#include "factorbreak/kernels.hpp"

#include <cmath>
#include <string>

#include "factorbreak/error.hpp"

namespace factorbreak {

const char* to_string(KernelKind kind) noexcept {
  switch (kind) {
    case KernelKind::kBartlett: return "bartlett";
  }
  return "unknown";
}

double bartlett(double u) noexcept {
  const double v = 1.0 - std::abs(u);
  return v > 0.0 ? v : 0.0;
}

double kernel_value(KernelKind kind, double u) {
  switch (kind) {
    case KernelKind::kBartlett: return bartlett(u);
  }
  throw ConfigError("unsupported kernel");
}

double nu0(KernelKind kind) {
  switch (kind) {
    case KernelKind::kBartlett: return 2.0 / 3.0;
  }
  throw ConfigError("unsupported kernel");
}

double rule_of_thumb_h(long T, long N) {
  return std::pow(static_cast<double>(T) * static_cast<double>(N), -0.2);
}

int hac_lag(long T) {
  return static_cast<int>(std::ceil(0.75 * std::cbrt(static_cast<double>(T))));
}

KernelSpec KernelSpec::make(double h, int hac_lag, KernelKind kind, KernelKind hac_kind) {
  if (!(h < 1.0)) {
    throw ConfigError("bandwidth h=" + std::to_string(h) + " must be below 1");
  }
  return make_unchecked(h, hac_lag, kind, hac_kind);
}

KernelSpec KernelSpec::make_unchecked(double h, int hac_lag, KernelKind kind,
                                      KernelKind hac_kind) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw ConfigError("bandwidth h=" + std::to_string(h) + " must be positive");
  }
  if (hac_lag < 1) throw ConfigError("HAC lag must be at least 1");
  return KernelSpec(kind, h, factorbreak::nu0(kind), hac_lag, hac_kind);
}

}  // namespace factorbreak
