#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string_view>

namespace nfg {

using Complex = std::complex<double>;

/// Commutative semiring in which partition functions are evaluated.
///
/// Elements are always carried as `Complex`. The sum-product semiring uses
/// the full complex field; the min-sum semiring lives on the real axis of the
/// extended reals, with +inf as its zero and 0 as its one. Min-sum operations
/// ignore imaginary parts; `admits()` tells whether a value belongs to the
/// element domain.
class Semiring {
 public:
  enum class Kind { kSumProduct, kMinSum };

  static constexpr Semiring sum_product() { return Semiring(Kind::kSumProduct); }
  static constexpr Semiring min_sum() { return Semiring(Kind::kMinSum); }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_sum_product() const { return kind_ == Kind::kSumProduct; }

  std::string_view name() const {
    return kind_ == Kind::kSumProduct ? "sum_product" : "min_sum";
  }

  Complex zero() const {
    return kind_ == Kind::kSumProduct
               ? Complex(0.0)
               : Complex(std::numeric_limits<double>::infinity());
  }

  Complex one() const { return kind_ == Kind::kSumProduct ? Complex(1.0) : Complex(0.0); }

  Complex add(Complex a, Complex b) const {
    if (kind_ == Kind::kSumProduct) return a + b;
    return Complex(a.real() < b.real() ? a.real() : b.real());
  }

  Complex mul(Complex a, Complex b) const {
    if (kind_ == Kind::kSumProduct) return a * b;
    return Complex(a.real() + b.real());
  }

  /// True if `v` is an element of this semiring's domain.
  bool admits(Complex v) const {
    if (kind_ == Kind::kSumProduct) return std::isfinite(v.real()) && std::isfinite(v.imag());
    return v.imag() == 0.0 && !std::isnan(v.real()) &&
           v.real() != -std::numeric_limits<double>::infinity();
  }

  friend constexpr bool operator==(Semiring a, Semiring b) { return a.kind_ == b.kind_; }

 private:
  constexpr explicit Semiring(Kind kind) : kind_(kind) {}
  Kind kind_;
};

}  // namespace nfg
