#ifndef BTH_MULTIPOLY_HPP
#define BTH_MULTIPOLY_HPP

#include <boost/container/small_vector.hpp>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bth/rational.hpp"
#include "bth/timevar.hpp"

namespace bth {

// Monomial: packed sorted (variable, exponent) pairs. Each pair is one
// char32_t: (var_code << 12) | exponent, with var_code = (n << 6) |
// (gamma + 32) so that code order matches the (n, gamma) variable order.
struct Monomial {
  using Code = boost::container::small_vector<char32_t, 14>;
  Code code;

  Monomial() = default;
  static char32_t pack(TimeVar v, int exp);
  static std::pair<TimeVar, int> unpack(char32_t c);

  // build from unsorted factors, merging repeats
  static Monomial from_factors(std::vector<std::pair<TimeVar, int>> f);

  std::vector<std::pair<TimeVar, int>> factors() const;
  long total_degree() const;
  bool empty() const { return code.empty(); }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.code == b.code; }
  friend bool operator<(const Monomial& a, const Monomial& b) {
    return std::lexicographical_compare(a.code.begin(), a.code.end(), b.code.begin(),
                                        b.code.end());
  }
};

using TimePoint = std::map<TimeVar, Rat>;

// Exact multivariate polynomial over time variables, rational coefficients.
// Canonical form: terms sorted by monomial, no zero coefficients.
class MultiPoly {
 public:
  using Term = std::pair<Monomial, Rat>;
  using Terms = std::vector<Term>;

  MultiPoly() = default;
  static MultiPoly constant(Rat c);
  static MultiPoly one() { return constant(Rat(1)); }
  static MultiPoly variable(TimeVar v);

  bool is_zero() const { return t_.empty(); }
  bool is_constant() const;
  Rat constant_value() const;  // value at the origin
  std::size_t term_count() const { return t_.size(); }
  const Terms& terms() const { return t_; }

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  MultiPoly operator-() const { return scaled(Rat(-1)); }
  MultiPoly scaled(const Rat& c) const;
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.t_ == b.t_; }

  void add_term(const Monomial& m, const Rat& c);

  MultiPoly derivative(TimeVar v, int order = 1) const;
  Rat eval(const TimePoint& pt) const;  // absent variables read as 0

  // variable substitution v -> image(v); colliding images merge exponents
  MultiPoly relabeled(const std::function<TimeVar(TimeVar)>& image) const;
  // t -> -t on every variable
  MultiPoly sign_flipped() const;

  long total_degree() const;  // -1 for the zero polynomial
  // degree under deg(t_{1,0}) = deg(t_{0,0}) = MN; nullopt if inhomogeneous
  std::optional<long> homogeneous_degree(const BTHSignature& sig) const;

  std::vector<TimeVar> variables() const;

  // canonical text: sorted monomials, "coeff * t[gamma,n]^e" syntax
  std::string str() const;

  // take ownership of unsorted/duplicated terms and canonicalize
  static MultiPoly from_raw(Terms raw);

 private:
  Terms t_;  // sorted by monomial code, no zero coefficients
};

// determinant of a square matrix of polynomials (expansion by minors with
// column-subset memoization; fine for the sizes used here)
MultiPoly poly_det(const std::vector<std::vector<MultiPoly>>& m);

}  // namespace bth

#endif
