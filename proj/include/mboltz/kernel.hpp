#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace mboltz {

enum class KernelFamily { soft, hard };

inline const char* to_string(KernelFamily f) { return f == KernelFamily::soft ? "soft" : "hard"; }

/// Scattering kernel sigma = h^{-b} (soft, 0 < b < 1) or h^{a} (hard, 0 <= a < 2),
/// together with the cutoff k of the modified operator Q_k.
///
/// The soft cutoff keeps collisions with rho >= 1/k, the hard one those with
/// rho <= k. An infinite k disables the indicator.
struct KernelSpec {
  KernelFamily family = KernelFamily::soft;
  double exponent = 0.5;  // b for soft, a for hard
  double cutoff = std::numeric_limits<double>::infinity();

  static KernelSpec soft(double b, double k = std::numeric_limits<double>::infinity()) {
    KernelSpec s{KernelFamily::soft, b, k};
    s.validate();
    return s;
  }
  static KernelSpec hard(double a, double k = std::numeric_limits<double>::infinity()) {
    KernelSpec s{KernelFamily::hard, a, k};
    s.validate();
    return s;
  }

  void validate() const {
    if (family == KernelFamily::soft && !(exponent > 0.0 && exponent < 1.0)) {
      std::ostringstream os;
      os << "soft kernel exponent b = " << exponent << " outside the admissible range (0,1)";
      throw std::invalid_argument(os.str());
    }
    if (family == KernelFamily::hard && !(exponent >= 0.0 && exponent < 2.0)) {
      std::ostringstream os;
      os << "hard kernel exponent a = " << exponent << " outside the admissible range [0,2)";
      throw std::invalid_argument(os.str());
    }
    if (!(cutoff > 0.0)) {
      throw std::invalid_argument("kernel cutoff k must be > 0");
    }
  }

  /// Power of R in the collision prefactor: -3 + b or -3 - a.
  double scale_power() const {
    return family == KernelFamily::soft ? -3.0 + exponent : -3.0 - exponent;
  }

  /// Power of rho in the kernel: 2 - b or 2 + a.
  double rho_power() const { return family == KernelFamily::soft ? 2.0 - exponent : 2.0 + exponent; }

  bool admits(double rho) const {
    if (std::isinf(cutoff)) return true;
    return family == KernelFamily::soft ? rho >= 1.0 / cutoff : rho <= cutoff;
  }

  KernelSpec with_cutoff(double k) const {
    KernelSpec s = *this;
    s.cutoff = k;
    s.validate();
    return s;
  }

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

}  // namespace mboltz
