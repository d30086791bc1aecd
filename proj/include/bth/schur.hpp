#ifndef BTH_SCHUR_HPP
#define BTH_SCHUR_HPP

#include <vector>

#include "bth/multipoly.hpp"
#include "bth/timevar.hpp"

namespace bth {

// A variable with its generating-function slot and weight: the chain fills
// the slot-j coefficient of exp(sum_j w_j t_j z^j) with w_j * t_j.
// Weight 1 builds the tau-side polynomials P_k(t); weight 1/j builds the
// hatted operators P_k(hat-partial), P_k(hat-D).
struct WeightedVar {
  TimeVar var;
  int slot = 1;
  Rat weight = Rat(1);
};
using VarChain = std::vector<WeightedVar>;

// slots 1..max_slot of one side, weight 1
VarChain tau_chain(const BTHSignature& sig, Side side, int max_slot);
// slots 1..max_slot, weight 1/slot
VarChain hatted_chain(const BTHSignature& sig, Side side, int max_slot);

// P_k of the chain: coefficient of z^k in exp(sum_v w_v t_v z^{slot_v}).
// P_0 = 1, P_k = 0 for k < 0.
MultiPoly elementary_schur(int k, const VarChain& chain);

struct YoungDiagram {
  std::vector<int> rows;  // weakly decreasing positive parts; empty = phi

  YoungDiagram() = default;
  explicit YoungDiagram(std::vector<int> r);
  long size() const;
  YoungDiagram conjugate() const;
  friend bool operator==(const YoungDiagram&, const YoungDiagram&) = default;
  std::string str() const;
};

// Jacobi-Trudi determinant det(P_{Y_r - r + c})
MultiPoly schur_of_diagram(const YoungDiagram& y, const VarChain& chain);

// S_Y(-t) == (-1)^{|Y|} S_{Y'}(t)
bool conjugate_identity_check(const YoungDiagram& y, const VarChain& chain);

// product of plain Hirota derivatives D_v^e
struct HirotaMonomial {
  std::vector<std::pair<TimeVar, int>> factors;  // multiplicities >= 1
  int total_order() const;
};

MultiPoly hirota_apply(const HirotaMonomial& mono, const MultiPoly& f, const MultiPoly& g);

// op is a polynomial in derivative symbols: each monomial v1^e1..vk^ek acts
// as the mixed partial d^e1_{v1}..d^ek_{vk}
MultiPoly apply_diff_poly(const MultiPoly& op, const MultiPoly& f);

// P_k(hat D) f o g = sum_{a+b=k} P_a(hat-partial) f * P_b(-hat-partial) g
MultiPoly schur_hirota_apply(int k, const BTHSignature& sig, Side side, const MultiPoly& f,
                             const MultiPoly& g);

}  // namespace bth

#endif
