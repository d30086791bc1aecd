#ifndef BTH_TAU_HPP
#define BTH_TAU_HPP

#include <optional>
#include <vector>

#include "bth/moment.hpp"
#include "bth/multipoly.hpp"
#include "bth/schur.hpp"

namespace bth {

// tau_0..tau_T with tau_0 = 1. `terminal` marks sequences whose tail is
// genuinely zero beyond the stored range (finite-rank constructions);
// non-terminal sequences are windows of a longer unknown object.
struct TauSequence {
  BTHSignature sig;
  std::vector<MultiPoly> taus;
  bool terminal = true;

  TauSequence(const BTHSignature& s, std::vector<MultiPoly> t, bool term = true);

  int last() const { return static_cast<int>(taus.size()) - 1; }
  // last index with a nonzero tau
  int rank() const;
  // tau_i, with tau_{i<0} = 0 and, for terminal sequences, tau_{i>last} = 0
  const MultiPoly& tau(int i) const;
  bool in_range(int i) const { return terminal ? i >= -1000000 : (i >= 0 && i <= last()); }

  TauSequence evaluated_partial(const TimePoint& pt) const;  // substitute, keep polynomials
};

TauSequence tau_from_minors(const MomentMatrix& m);

// ----- rational (finite Lax) solutions ---------------------------------

// Pbar_k = sum_{a*M + b*N = k, a,b >= 0} P_a(t_alpha) P_b(t_beta)
MultiPoly pbar(const BTHSignature& sig, int k);

// admissible tau_1 degrees for a j x j Lax matrix
std::vector<int> k_set(const BTHSignature& sig, int j);

// degree diagram of tau_s in the series generated by Pbar_k
std::vector<int> degree_diagram(const BTHSignature& sig, int k, int s);

struct RationalTau {
  int k = 0;                 // homogeneous degree of tau_1
  BTHSignature reduced_sig;  // after gcd reduction
  TauSequence taus;
  // the moment-matrix realization R_{ab} = Pbar_{k-(a-1)M-(b-1)N}
  MomentMatrix moment;
};

// k = (j-1)NM + mM + nN over the gcd-reduced signature; requires
// 0 <= m < N, 0 <= n < M after reduction. tau_s = principal s-minor.
RationalTau rational_tau(const BTHSignature& sig, int j, int m, int n);

struct YoungPair {
  YoungDiagram left;   // diagram in t_alpha
  YoungDiagram right;  // diagram in t_beta
};

struct YoungDecomposition {
  std::vector<YoungPair> pairs;
  int sign = 1;  // (-1)^{s(s-1)/2}: sign * sum S_L S_R equals the tau_s determinant
  MultiPoly signed_sum(const BTHSignature& reduced_sig) const;
};

YoungDecomposition young_decomposition(const BTHSignature& sig, int j, int m, int n, int s);

// ----- Lax entries, coefficients, dressing, wave pairing ---------------

// exact ratio num/den with den a product of taus
struct TauRatio {
  MultiPoly num;
  MultiPoly den;
  bool is_zero() const { return num.is_zero(); }
};

struct LaxFromTau {
  int size = 0;  // entries a_{ij}, 1 <= i,j <= size
  std::vector<std::vector<TauRatio>> left;   // P_{i-j+N}(hat D_L) tau_j o tau_{i-1} / (tau_{i-1} tau_j)
  std::vector<std::vector<TauRatio>> right;  // P_{j-i+M}(hat D_R) tau_i o tau_{j-1} / (tau_{i-1} tau_j)
  bool dual_agree = true;     // left == right entrywise (cross-multiplied)
  bool band_ok = true;        // entries vanish outside -M <= j-i <= N
};

// Both displayed formulas for a_{ij}; throws if a needed tau denominator is
// identically zero inside the requested window. Dual agreement holds for
// staircase-constrained tau (moment or rational constructions); `strict`
// additionally makes a mismatch throw. The unconstrained all-ones vacuum
// satisfies the left formula only.
LaxFromTau lax_from_tau(const TauSequence& ts, int size = -1, bool strict = false);

struct UFromTau {
  int i;           // coefficient index, -M <= i <= N-1
  int first_site;  // = max(1, 1-i): u_{i,j} = a_{j,j+i} needs column j+i >= 1
  std::vector<TauRatio> left, right;  // sites first_site, first_site+1, ...
  bool dual_agree = true;
};

UFromTau u_from_tau(const TauSequence& ts, int i, int sites = -1);

struct DressingMatrices {
  int size = 0;
  // entries as exact ratios; zero ratio where the triangular pattern vanishes
  std::vector<std::vector<TauRatio>> pl, pl_inv, pr, pr_inv;
};

DressingMatrices dressing_matrices(const TauSequence& ts, int size = -1);

// multiply two triangular dressing factors and compare on the window
bool dressing_product_is_identity(const std::vector<std::vector<TauRatio>>& a,
                                  const std::vector<std::vector<TauRatio>>& b, int window);
// compare (pl_inv * pr) with the moment matrix on the window
bool dressing_factorizes_moment(const DressingMatrices& d, const MomentMatrix& m, int window);

struct WavePairing {
  // pairings scaled by tau_{i-1} tau_j (their natural denominator)
  MultiPoly plain;           // <W_Li, Wbar_Rj> * tau_{i-1} tau_j
  MultiPoly lambda_shifted;  // <lambda W_Li, Wbar_Rj> * tau_{i-1} tau_j
  MultiPoly hat;             // <W_Li, What_Rj> * tau_{i-1} tau_{j-1}
  MultiPoly den_plain;       // tau_{i-1} tau_j
  MultiPoly den_hat;         // tau_{i-1} tau_{j-1}
  bool lambda_valid = true;  // false when i+N > T (row range insufficient)
};

// bordered-determinant wave functions paired through the discrete moment
// functional <lambda^{a/N}, lambda^{b/M}> = C_{a,b} = M_{a+1,b+1}.
// requires i <= T, j <= T and, for the lambda-shifted pairing, i+N <= T.
WavePairing wave_pairing(const MomentMatrix& m, int i, int j);

}  // namespace bth

#endif
