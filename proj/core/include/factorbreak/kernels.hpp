#pragma once

namespace factorbreak {

enum class KernelKind { kBartlett };

const char* to_string(KernelKind kind) noexcept;

/// max(0, 1 - |u|).
double bartlett(double u) noexcept;

double kernel_value(KernelKind kind, double u);

/// Integral of K(u)^2 over [-1, 1]. Bartlett: 2/3.
double nu0(KernelKind kind);

/// (T N)^(-1/5).
double rule_of_thumb_h(long T, long N);

/// ceil(0.75 T^(1/3)).
int hac_lag(long T);

/// Smoothing kernel K with bandwidth h for the statistic, plus the HAC kernel
/// a with truncation lag l for the long-run variance.
class KernelSpec {
 public:
  /// Validating factory: requires 0 < h < 1 and hac_lag >= 1.
  static KernelSpec make(double h, int hac_lag,
                         KernelKind kind = KernelKind::kBartlett,
                         KernelKind hac_kind = KernelKind::kBartlett);

  /// Skips the h < 1 check (h > 0 and hac_lag >= 1 are still enforced).
  /// Exists for hand fixtures that need h = 1.
  static KernelSpec make_unchecked(double h, int hac_lag,
                                   KernelKind kind = KernelKind::kBartlett,
                                   KernelKind hac_kind = KernelKind::kBartlett);

  KernelKind kind() const noexcept { return kind_; }
  KernelKind hac_kind() const noexcept { return hac_kind_; }
  double h() const noexcept { return h_; }
  double nu0() const noexcept { return nu0_; }
  int hac_lag() const noexcept { return hac_lag_; }

 private:
  KernelSpec(KernelKind kind, double h, double nu0, int hac_lag, KernelKind hac_kind)
      : kind_(kind), hac_kind_(hac_kind), h_(h), nu0_(nu0), hac_lag_(hac_lag) {}

  KernelKind kind_;
  KernelKind hac_kind_;
  double h_;
  double nu0_;
  int hac_lag_;
};

}  // namespace factorbreak
