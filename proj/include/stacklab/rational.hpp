#ifndef STACKLAB_RATIONAL_HPP
#define STACKLAB_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

namespace stacklab {

/// Exact rational arithmetic. All quantities in the interfaces are exact, so
/// there is no floating point anywhere in the library.
class Rational {
public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Rational operator+(const Rational &o) const {
    return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  Rational operator-(const Rational &o) const {
    return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
  }
  Rational operator*(const Rational &o) const {
    return Rational(num_ * o.num_, den_ * o.den_);
  }
  Rational operator-() const { return Rational(-num_, den_); }

  bool operator==(const Rational &o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const Rational &o) const { return !(*this == o); }

  std::string str() const {
    if (den_ == 1)
      return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

private:
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0)
      den_ = 1;
  }

  std::int64_t num_;
  std::int64_t den_;
};

inline std::ostream &operator<<(std::ostream &os, const Rational &q) {
  return os << q.str();
}

} // namespace stacklab

#endif
