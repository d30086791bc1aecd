#ifndef BTH_RATIONAL_HPP
#define BTH_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace bth {

// Exact rational scalar backed by GMP. Thin eager wrapper: hides gmpxx
// expression templates (they do not mix with Eigen) and keeps values
// canonical after every operation.
class Rat {
 public:
  Rat() : v_(0) {}
  Rat(int n) : v_(n) {}
  Rat(long n) : v_(n) {}
  Rat(long long n) : v_(static_cast<long>(n)) {}
  Rat(long n, long d) : v_(n, d) { v_.canonicalize(); }
  explicit Rat(const mpq_class& v) : v_(v) { v_.canonicalize(); }

  // accepts "p" or "p/q"
  static Rat from_string(const std::string& s) {
    Rat r;
    r.v_ = mpq_class(s, 10);
    r.v_.canonicalize();
    return r;
  }

  Rat operator-() const { return Rat(mpq_class(-v_)); }
  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) { v_ /= o.v_; return *this; }

  friend Rat operator+(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ + b.v_)); }
  friend Rat operator-(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ - b.v_)); }
  friend Rat operator*(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ * b.v_)); }
  friend Rat operator/(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ / b.v_)); }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }
  double to_double() const { return v_.get_d(); }
  const mpq_class& raw() const { return v_; }

  std::string str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  friend Rat abs(const Rat& a) { return a.sign() < 0 ? -a : a; }

 private:
  mpq_class v_;
};

inline std::ostream& operator<<(std::ostream& os, const Rat& r);

}  // namespace bth

#include <ostream>

namespace bth {
inline std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }
}  // namespace bth

#include <Eigen/Core>

namespace Eigen {
template <>
struct NumTraits<bth::Rat> : GenericNumTraits<bth::Rat> {
  typedef bth::Rat Real;
  typedef bth::Rat NonInteger;
  typedef bth::Rat Nested;
  typedef bth::Rat Literal;
  static inline Real epsilon() { return bth::Rat(0); }
  static inline Real dummy_precision() { return bth::Rat(0); }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 60,
    MulCost = 60
  };
};
}  // namespace Eigen

#endif
