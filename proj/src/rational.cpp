#include "streamcount/rational.hpp"

#include <cmath>
#include <sstream>

#include "streamcount/error.hpp"

namespace streamcount {

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::string to_string(const Rational& q) {
  std::ostringstream out;
  out << q;
  return out.str();
}

std::uint64_t isqrt(std::uint64_t x) {
  auto s = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(x)));
  while (s > 0 && static_cast<unsigned __int128>(s) * s > x) --s;
  while (static_cast<unsigned __int128>(s + 1) * (s + 1) <= x) ++s;
  return s;
}

Surd::Surd(std::uint64_t radicand, Rational a, Rational b)
    : d_(radicand), square_root_(0), a_(std::move(a)), b_(std::move(b)) {
  if (d_ == 0) throw Error(ErrorCode::kInvalidParams, "surd radicand must be positive");
  const std::uint64_t s = isqrt(d_);
  if (s * s == d_) square_root_ = s;
  normalize();
}

Surd Surd::root(std::uint64_t radicand) { return Surd(radicand, 0, 1); }

Surd Surd::inverse_power(std::uint64_t radicand, const Rational& exponent) {
  const Rational twice = exponent * 2;
  if (exponent < 0 || denominator(twice) != 1) {
    throw Error(ErrorCode::kInvalidParams, "exponent must be a non-negative half-integer");
  }
  const auto half_steps = static_cast<unsigned>(numerator(twice));
  // d^(-k/2) = d^(-ceil(k/2)) * sqrt(d)^(k mod 2).
  Rational base = 1;
  const unsigned whole = (half_steps + 1) / 2;
  for (unsigned i = 0; i < whole; ++i) base /= Rational(radicand);
  if (half_steps % 2 == 1) return Surd(radicand, 0, base);
  return Surd(radicand, base, 0);
}

void Surd::normalize() {
  if (square_root_ != 0 && b_ != 0) {
    a_ += b_ * Rational(square_root_);
    b_ = 0;
  }
}

Surd Surd::operator+(const Surd& other) const {
  if (other.d_ != d_) throw Error(ErrorCode::kInvalidParams, "surd radicand mismatch");
  return Surd(d_, a_ + other.a_, b_ + other.b_);
}

Surd Surd::operator-(const Surd& other) const {
  if (other.d_ != d_) throw Error(ErrorCode::kInvalidParams, "surd radicand mismatch");
  return Surd(d_, a_ - other.a_, b_ - other.b_);
}

Surd Surd::operator*(const Surd& other) const {
  if (other.d_ != d_) throw Error(ErrorCode::kInvalidParams, "surd radicand mismatch");
  return Surd(d_, a_ * other.a_ + b_ * other.b_ * Rational(d_), a_ * other.b_ + b_ * other.a_);
}

Surd Surd::operator*(const Rational& c) const { return Surd(d_, a_ * c, b_ * c); }

bool Surd::operator==(const Surd& other) const {
  return d_ == other.d_ && a_ == other.a_ && b_ == other.b_;
}

double Surd::to_double() const {
  return streamcount::to_double(a_) +
         streamcount::to_double(b_) * std::sqrt(static_cast<double>(d_));
}

std::string Surd::to_string() const {
  std::ostringstream out;
  out << a_;
  if (b_ != 0) out << " + (" << b_ << ")*sqrt(" << d_ << ")";
  return out.str();
}

}  // namespace streamcount
