#ifndef BTH_MOMENT_HPP
#define BTH_MOMENT_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "bth/multipoly.hpp"
#include "bth/schur.hpp"
#include "bth/timevar.hpp"

namespace bth {

// Staircase equivalence on matrix positions: (i, j) ~ (i+N, j-M).
// Representative: the element of the class with minimal row index >= 1.
struct ClassKey {
  int i = 1;
  int j = 1;
  friend bool operator==(const ClassKey&, const ClassKey&) = default;
  friend auto operator<=>(const ClassKey&, const ClassKey&) = default;
};

ClassKey class_rep(const BTHSignature& sig, int i, int j);
// true iff every quadrant element of the class lies inside the T x T window
bool class_inside_window(const BTHSignature& sig, ClassKey rep, int T);

// T x T truncation of the moment matrix M_infty, entries exact polynomials.
class MomentMatrix {
 public:
  MomentMatrix(const BTHSignature& sig, int T);

  int size() const { return T_; }
  const BTHSignature& signature() const { return sig_; }
  MultiPoly& entry(int i, int j);              // 1-based
  const MultiPoly& entry(int i, int j) const;  // 1-based

  // staircase M_{i+N,j} = M_{i,j+M} wherever both indices exist
  bool staircase_ok() const;

  MomentMatrix evaluated(const TimePoint& pt) const;

 private:
  BTHSignature sig_;
  int T_;
  std::vector<MultiPoly> e_;
};

// seed values given per class (keyed by any (i,j) inside the window);
// throws on two values landing in one class. Unlisted classes are zero.
MomentMatrix seed_moment_matrix(const std::vector<std::pair<ClassKey, Rat>>& seed,
                                const BTHSignature& sig, int T);

// random integer seed in [lo, hi]. hirota_safe zeroes every class that is
// not fully contained in the window; the zero-padded matrix then satisfies
// the staircase constraint as a semi-infinite object and its tau sequence
// obeys every primary Hirota identity at every index.
MomentMatrix seed_random_moment(const BTHSignature& sig, int T, std::uint64_t rng_seed,
                                bool hirota_safe = true, int lo = 1, int hi = 9);

// M(t) = U(t_alpha) M0 V(t_beta): (UM0V)_{ij} = sum_{k>=i, l>=j}
// P_{k-i}(t_alpha) M0_{kl} P_{l-j}(t_beta), sums finite on the window.
// Entries become polynomials in the side chains up to the given slots
// (defaults N+1 and M+1, enough for every primary identity).
MomentMatrix evolve_moment_matrix(const MomentMatrix& m0, int slots_left = -1,
                                  int slots_right = -1);

}  // namespace bth

#endif
