#ifndef BTH_TIMEVAR_HPP
#define BTH_TIMEVAR_HPP

#include <compare>
#include <stdexcept>
#include <string>

namespace bth {

// Band signature of the hierarchy: N upper and M lower diagonals.
struct BTHSignature {
  int N = 1;
  int M = 1;

  BTHSignature() = default;
  BTHSignature(int n, int m) : N(n), M(m) {
    if (n < 1 || m < 1) throw std::invalid_argument("BTHSignature: N, M must be >= 1");
  }
  BTHSignature swapped() const { return BTHSignature(M, N); }
  friend bool operator==(const BTHSignature&, const BTHSignature&) = default;
};

// Flow variable t_{gamma,n}: gamma in [-M+1, N], n >= 0.
struct TimeVar {
  int gamma = 1;
  int n = 0;

  friend bool operator==(const TimeVar&, const TimeVar&) = default;
  // total order, lexicographic on (n, gamma)
  friend auto operator<=>(const TimeVar& a, const TimeVar& b) {
    if (a.n != b.n) return a.n <=> b.n;
    return a.gamma <=> b.gamma;
  }
};

enum class Side { L, R };

inline Side side_of(TimeVar v) { return v.gamma >= 1 ? Side::L : Side::R; }
inline Side other(Side s) { return s == Side::L ? Side::R : Side::L; }
inline bool is_primary(TimeVar v) { return v.n == 0; }

inline void check_var(const BTHSignature& sig, TimeVar v) {
  if (v.n < 0 || v.gamma > sig.N || v.gamma < -sig.M + 1)
    throw std::invalid_argument("TimeVar out of range for signature");
}

// Exponent slot of a variable: the power of z it feeds in the generating
// function exp(sum t_j z^j). L: j = N(n+1)-(gamma-1); R: j = M(n+1)+gamma.
// Both maps are bijections onto the positive integers.
inline int slot_of(const BTHSignature& sig, TimeVar v) {
  check_var(sig, v);
  return v.gamma >= 1 ? sig.N * (v.n + 1) - (v.gamma - 1) : sig.M * (v.n + 1) + v.gamma;
}

inline TimeVar var_at_slot(const BTHSignature& sig, Side side, int slot) {
  if (slot < 1) throw std::invalid_argument("var_at_slot: slot must be >= 1");
  if (side == Side::L) {
    int r = (slot - 1) % sig.N + 1;  // r in [1, N]
    int n = (slot - r) / sig.N;
    return TimeVar{sig.N - r + 1, n};
  }
  int r = (slot - 1) % sig.M + 1;
  int n = (slot - r) / sig.M;
  return TimeVar{r - sig.M, n};
}

// homogeneity grading with deg(t_{1,0}) = deg(t_{0,0}) = MN:
// an L variable at slot j has degree j*M, an R variable j*N.
inline long graded_degree(const BTHSignature& sig, TimeVar v) {
  long j = slot_of(sig, v);
  return side_of(v) == Side::L ? j * sig.M : j * sig.N;
}

inline std::string to_string(TimeVar v) {
  return "t[" + std::to_string(v.gamma) + "," + std::to_string(v.n) + "]";
}

}  // namespace bth

#endif
