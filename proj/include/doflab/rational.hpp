#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace doflab {

// Exact rational in lowest terms with a positive denominator.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t numerator, std::int64_t denominator = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  // "4/9", or "1" when the denominator is one.
  std::string to_string() const;
  // "4/9 (0.4444)"
  std::string describe(int decimals = 4) const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// Parses "a/b" or "a".
Rational parse_rational(const std::string& text);

// Per-user degrees of freedom; always within [0, 1].
using PuDofValue = Rational;

}  // namespace doflab
