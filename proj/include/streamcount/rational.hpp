#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace streamcount {

using Rational = boost::multiprecision::cpp_rational;

double to_double(const Rational& q);
std::string to_string(const Rational& q);

// Integer square root: the largest s with s * s <= x.
std::uint64_t isqrt(std::uint64_t x);

// Exact element a + b * sqrt(d) of the quadratic field Q(sqrt(d)), d >= 1.
// When d is a perfect square the irrational part is folded into a.
class Surd {
 public:
  explicit Surd(std::uint64_t radicand, Rational a = 0, Rational b = 0);

  // sqrt(d) itself.
  static Surd root(std::uint64_t radicand);
  // d^(-e) for a half-integral exponent e >= 0.
  static Surd inverse_power(std::uint64_t radicand, const Rational& exponent);

  const Rational& rational_part() const { return a_; }
  const Rational& root_part() const { return b_; }
  std::uint64_t radicand() const { return d_; }

  Surd operator+(const Surd& other) const;
  Surd operator-(const Surd& other) const;
  Surd operator*(const Surd& other) const;
  Surd operator*(const Rational& c) const;
  Surd& operator+=(const Surd& other) { return *this = *this + other; }
  Surd& operator*=(const Surd& other) { return *this = *this * other; }
  bool operator==(const Surd& other) const;
  bool is_zero() const { return a_ == 0 && b_ == 0; }

  double to_double() const;
  std::string to_string() const;

 private:
  void normalize();

  std::uint64_t d_;
  std::uint64_t square_root_;  // isqrt(d) when d is a perfect square, else 0
  Rational a_;
  Rational b_;
};

}  // namespace streamcount
