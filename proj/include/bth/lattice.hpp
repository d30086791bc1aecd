#ifndef BTH_LATTICE_HPP
#define BTH_LATTICE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "bth/rational.hpp"
#include "bth/timevar.hpp"

namespace bth {

// periodic lattice field: values at P sites, indexing mod P
template <class S>
using Field = Eigen::Vector<S, Eigen::Dynamic>;
using FieldD = Field<double>;

template <class S>
Field<S> shifted(const Field<S>& f, int d) {
  const int P = static_cast<int>(f.size());
  Field<S> g(P);
  for (int x = 0; x < P; ++x) g[x] = f[((x + d) % P + P) % P];
  return g;
}

// Band operator sum_d c_d(x) Lambda^d on a periodic lattice of P sites.
// Offsets are kept as plain integers (never reduced mod P): the algebra is
// the formal Laurent algebra in Lambda with P-periodic coefficients, which
// is what the order-by-order root constructions live in. to_dense() folds
// offsets mod P when a concrete matrix is wanted.
template <class S>
class BandOperator {
 public:
  BandOperator() = default;
  explicit BandOperator(int P, double eps = 1.0) : P_(P), eps_(eps) {
    if (P < 3) throw std::invalid_argument("BandOperator: P must be >= 3");
  }

  int sites() const { return P_; }
  double eps() const { return eps_; }
  bool empty() const { return diag_.empty(); }
  const std::map<int, Field<S>>& diagonals() const { return diag_; }

  int min_offset() const { return diag_.empty() ? 0 : diag_.begin()->first; }
  int max_offset() const { return diag_.empty() ? 0 : diag_.rbegin()->first; }

  Field<S> coeff(int d) const {
    auto it = diag_.find(d);
    if (it != diag_.end()) return it->second;
    return Field<S>::Constant(P_, S(0));
  }
  bool has(int d) const { return diag_.count(d) != 0; }

  void set_coeff(int d, Field<S> c) {
    if (static_cast<int>(c.size()) != P_)
      throw std::invalid_argument("BandOperator: field size mismatch");
    bool zero = true;
    for (int x = 0; x < P_; ++x)
      if (!(c[x] == S(0))) {
        zero = false;
        break;
      }
    if (zero)
      diag_.erase(d);
    else
      diag_[d] = std::move(c);
  }
  void add_coeff(int d, const Field<S>& c) {
    auto it = diag_.find(d);
    if (it == diag_.end())
      set_coeff(d, c);
    else
      set_coeff(d, Field<S>(it->second + c));
  }
  void set_constant(int d, S v) { set_coeff(d, Field<S>::Constant(P_, v)); }

  void check_compatible(const BandOperator& o) const {
    if (P_ != o.P_ || eps_ != o.eps_)
      throw std::invalid_argument("BandOperator: lattice mismatch");
  }

  friend BandOperator operator+(const BandOperator& a, const BandOperator& b) {
    a.check_compatible(b);
    BandOperator r = a;
    for (auto& [d, c] : b.diag_) r.add_coeff(d, c);
    return r;
  }
  friend BandOperator operator-(const BandOperator& a, const BandOperator& b) {
    a.check_compatible(b);
    BandOperator r = a;
    for (auto& [d, c] : b.diag_) r.add_coeff(d, Field<S>(-c));
    return r;
  }
  BandOperator scaled(const S& v) const {
    BandOperator r(P_, eps_);
    for (auto& [d, c] : diag_) r.set_coeff(d, Field<S>(c * v));
    return r;
  }

  static BandOperator identity(int P, double eps = 1.0) {
    BandOperator r(P, eps);
    r.set_constant(0, S(1));
    return r;
  }
  static BandOperator shift(int P, int d, double eps = 1.0) {
    BandOperator r(P, eps);
    r.set_constant(d, S(1));
    return r;
  }

  Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> to_dense() const {
    Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> a =
        Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>::Constant(P_, P_, S(0));
    for (auto& [d, c] : diag_)
      for (int x = 0; x < P_; ++x) a(x, ((x + d) % P_ + P_) % P_) += c[x];
    return a;
  }

  // apply to a field: (A f)(x) = sum_d c_d(x) f(x + d)
  Field<S> apply(const Field<S>& f) const {
    Field<S> g = Field<S>::Constant(P_, S(0));
    for (auto& [d, c] : diag_) g += c.cwiseProduct(shifted(f, d));
    return g;
  }

  // trace of the dense realization: offsets that are multiples of P land on
  // the main diagonal
  S trace() const {
    S t(0);
    for (auto& [d, c] : diag_)
      if (d % P_ == 0) t += c.sum();
    return t;
  }

 private:
  int P_ = 0;
  double eps_ = 1.0;
  std::map<int, Field<S>> diag_;
};

// composition: (c Lambda^a)(c' Lambda^b) = c(x) c'(x+a) Lambda^{a+b}
template <class S>
BandOperator<S> op_mul(const BandOperator<S>& a, const BandOperator<S>& b) {
  a.check_compatible(b);
  BandOperator<S> r(a.sites(), a.eps());
  for (auto& [da, ca] : a.diagonals())
    for (auto& [db, cb] : b.diagonals()) r.add_coeff(da + db, ca.cwiseProduct(shifted(cb, da)));
  return r;
}

template <class S>
BandOperator<S> op_pow(const BandOperator<S>& a, int k) {
  if (k < 0) throw std::invalid_argument("op_pow: negative power");
  BandOperator<S> r = BandOperator<S>::identity(a.sites(), a.eps());
  for (int i = 0; i < k; ++i) r = op_mul(r, a);
  return r;
}

template <class S>
BandOperator<S> commutator(const BandOperator<S>& a, const BandOperator<S>& b) {
  return op_mul(a, b) - op_mul(b, a);
}

// projections onto offset ranges
template <class S>
BandOperator<S> geq_part(const BandOperator<S>& a, int k) {
  BandOperator<S> r(a.sites(), a.eps());
  for (auto& [d, c] : a.diagonals())
    if (d >= k) r.set_coeff(d, c);
  return r;
}
template <class S>
BandOperator<S> leq_part(const BandOperator<S>& a, int k) {
  BandOperator<S> r(a.sites(), a.eps());
  for (auto& [d, c] : a.diagonals())
    if (d <= k) r.set_coeff(d, c);
  return r;
}
template <class S>
BandOperator<S> plus_part(const BandOperator<S>& a) {
  return geq_part(a, 0);
}
template <class S>
BandOperator<S> minus_part(const BandOperator<S>& a) {
  return leq_part(a, -1);
}
template <class S>
BandOperator<S> diag_part(const BandOperator<S>& a) {
  BandOperator<S> r(a.sites(), a.eps());
  if (a.has(0)) r.set_coeff(0, a.coeff(0));
  return r;
}
template <class S>
BandOperator<S> band_part(const BandOperator<S>& a, int lo, int hi) {
  BandOperator<S> r(a.sites(), a.eps());
  for (auto& [d, c] : a.diagonals())
    if (lo <= d && d <= hi) r.set_coeff(d, c);
  return r;
}

// anti-involution: Lambda^dag = Lambda^{-1}, f^dag = f, (AB)^dag = B^dag A^dag.
// Coefficientwise: (c_d Lambda^d)^dag = c_d(x+d) Lambda^{-d} ... with d -> -d:
// the offset-d coefficient of A^dag is c_{-d}(x+d).
template <class S>
BandOperator<S> dagger(const BandOperator<S>& a) {
  BandOperator<S> r(a.sites(), a.eps());
  for (auto& [d, c] : a.diagonals()) r.set_coeff(-d, shifted(c, -d));
  return r;
}

// ((A)_{>=k})^dag == (A^dag)_{<=-k}
template <class S>
bool projection_dagger_check(const BandOperator<S>& a, int k) {
  BandOperator<S> lhs = dagger(geq_part(a, k));
  BandOperator<S> rhs = leq_part(dagger(a), -k);
  BandOperator<S> diff = lhs - rhs;
  return diff.empty();
}

inline double to_double_scalar(double v) { return v; }
inline double to_double_scalar(const Rat& v) { return v.to_double(); }

// sup over |coefficients| of offsets selected by pred
template <class S, class Pred>
double offset_sup_norm(const BandOperator<S>& a, Pred pred) {
  double m = 0.0;
  for (auto& [d, c] : a.diagonals()) {
    if (!pred(d)) continue;
    for (int x = 0; x < a.sites(); ++x) m = std::max(m, std::abs(to_double_scalar(c[x])));
  }
  return m;
}

template <class S>
double sup_norm(const BandOperator<S>& a) {
  return offset_sup_norm(a, [](int) { return true; });
}

}  // namespace bth

#endif
