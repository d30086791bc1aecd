#ifndef BTH_HIROTA_HPP
#define BTH_HIROTA_HPP

#include <string>
#include <vector>

#include "bth/tau.hpp"

namespace bth {

// The six primary bilinear families. Conventions were calibrated against
// constructive moment-matrix solutions; the displayed forms hold verbatim:
//   F1: (D_{b,0} - P_{M+b}(DR)) tau_{n+1} o tau_n = 0
//   F2: (D_{b,0} D_{-M+1,0} - 2 P_{M+b+1}(DR)) tau_n o tau_n = 0
//   F3: D_{b,0} D_{N,0} tau_n o tau_n = 2 P_{M+b-1}(DR) tau_{n+1} o tau_{n-1}
//   F4: D_{a,0} D_{-M+1,0} tau_n o tau_n = 2 P_{N-a}(DL) tau_{n+1} o tau_{n-1}
//   F5: (D_{a,0} D_{N,0} - 2 P_{N-a+2}(DL)) tau_n o tau_n = 0
//   F6: (D_{a,0} - P_{N-a+1}(DL)) tau_{n+1} o tau_n = 0
// K0: P_{Nr+m}(DL) tau_{n-m+1} o tau_n = P_{Mr-m}(DR) tau_{n+1} o tau_{n-m}
struct ResidualReport {
  std::string equation;  // "F1".."F6" or "K0"
  int n = 0;
  int param = 0;  // alpha or beta for F1..F6
  int r = 0, m = 0;  // K0 only
  MultiPoly residual;

  bool passes() const { return residual.is_zero(); }
  std::string key() const;
};

// residual of one family instance (LHS - RHS in the displayed orientation)
MultiPoly family_residual(const TauSequence& ts, int family, int param, int n);
MultiPoly k0_residual_poly(const TauSequence& ts, int r, int m, int n);

// every admissible n for every beta in [-M+1,0] / alpha in [1,N], all six
// families. Terminal sequences sweep n = 0..last (tails read as zero);
// windowed sequences restrict to instances whose indices are stored.
std::vector<ResidualReport> primary_residuals(const TauSequence& ts);

// k=0 coefficient identities, r in {0,1}, m in {-1,0,1}
ResidualReport k0_residuals(const TauSequence& ts, int r, int m, int n);
std::vector<ResidualReport> k0_residual_sweep(const TauSequence& ts);

bool all_pass(const std::vector<ResidualReport>& reports);

// Tau sequence kept as sums of t_alpha x t_beta products (the form the
// Cauchy-Binet decomposition produces). Every primary operator factors
// across the two variable families, so residuals evaluate through small
// one-sided products, and vanishing is decided by exact elimination on
// one tensor side; nothing large is ever expanded on the passing path.
struct SplitTau {
  BTHSignature sig;
  // parts[i] realizes tau_i; tau_0 = {(1,1)}
  std::vector<std::vector<std::pair<MultiPoly, MultiPoly>>> parts;

  int last() const { return static_cast<int>(parts.size()) - 1; }
  MultiPoly expanded(int i) const;
};

// rational tau in split form (signed Young decomposition); equals the
// determinant sequence of rational_tau termwise
SplitTau split_rational_tau(const BTHSignature& sig, int j, int m, int n);

// t_{gamma,n} -> t_{1-gamma,n}: parts swap sides under the (M,N) signature
SplitTau relabel_nm_to_mn(const SplitTau& st);

MultiPoly family_residual(const SplitTau& st, int family, int param, int n);
MultiPoly k0_residual_poly(const SplitTau& st, int r, int m, int n);
std::vector<ResidualReport> primary_residuals(const SplitTau& st);
std::vector<ResidualReport> k0_residual_sweep(const SplitTau& st);

// t_{gamma,n} -> t_{1-gamma,n} turns an (N,M) sequence into an (M,N) one
TauSequence relabel_nm_to_mn(const TauSequence& ts);

// operational (N,M) <-> (M,N) equivalence: whenever the (N,M) sweep of
// tau_nm passes, the (M,N) sweep of tau_mn (its relabeling) must too
bool nm_mn_relabel_check(const TauSequence& tau_nm, const TauSequence& tau_mn);

}  // namespace bth

#endif
