#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smar/error.hpp"

namespace smar {

/// Real polynomial c0 + c1 z + ... + cp z^p in a lag (or lead) variable.
///
/// Coefficients are stored lowest degree first. Trailing zeros are trimmed
/// on construction so degree() is exact; the zero polynomial is not
/// representable. Autoregressive polynomials built by this library always
/// have c0 = 1.
class Polynomial {
 public:
  Polynomial() : coeffs_{1.0} {}

  explicit Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    for (double c : coeffs_) {
      if (!std::isfinite(c)) throw InvalidArgument("polynomial coefficient is not finite");
    }
    while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
    if (coeffs_.empty() || (coeffs_.size() == 1 && coeffs_[0] == 0.0)) {
      throw InvalidArgument("zero polynomial");
    }
  }

  /// 1 - a_1 z - ... - a_p z^p from the autoregressive coefficients a.
  static Polynomial from_ar(std::span<const double> a) {
    std::vector<double> c(a.size() + 1);
    c[0] = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) c[i + 1] = -a[i];
    return Polynomial(std::move(c));
  }

  /// Inverse of from_ar: the a_j with p(z) = 1 - sum a_j z^j, padded to
  /// `order` entries (order < 0 means degree()).
  std::vector<double> ar_coefficients(int order = -1) const {
    const std::size_t n = order < 0 ? static_cast<std::size_t>(degree()) : static_cast<std::size_t>(order);
    std::vector<double> a(n, 0.0);
    for (std::size_t i = 0; i < n && i + 1 < coeffs_.size(); ++i) a[i] = -coeffs_[i + 1];
    return a;
  }

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  double operator[](std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0.0; }
  double leading() const noexcept { return coeffs_.back(); }

  double max_abs_coeff() const noexcept {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  template <class T>
  T operator()(T z) const {
    T acc = T(coeffs_.back());
    for (std::size_t i = coeffs_.size() - 1; i-- > 0;) acc = acc * z + T(coeffs_[i]);
    return acc;
  }

  /// p(z), p'(z) and p''(z) by a single Horner pass.
  template <class T>
  std::array<T, 3> eval_derivatives(T z) const {
    T p = T(coeffs_.back()), d1 = T(0), d2 = T(0);
    for (std::size_t i = coeffs_.size() - 1; i-- > 0;) {
      d2 = d2 * z + d1;
      d1 = d1 * z + p;
      p = p * z + T(coeffs_[i]);
    }
    return {p, d1, T(2) * d2};
  }

  /// p(z^s), used for seasonal factors.
  Polynomial in_power(int s) const {
    if (s < 1) throw InvalidArgument("in_power requires s >= 1");
    std::vector<double> c(static_cast<std::size_t>(degree()) * s + 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i * s] = coeffs_[i];
    return Polynomial(std::move(c));
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Polynomial(std::move(c));
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<double> coeffs_;
};

}  // namespace smar
