#include "bth/schur.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace bth {

VarChain tau_chain(const BTHSignature& sig, Side side, int max_slot) {
  VarChain c;
  c.reserve(max_slot);
  for (int j = 1; j <= max_slot; ++j) c.push_back({var_at_slot(sig, side, j), j, Rat(1)});
  return c;
}

VarChain hatted_chain(const BTHSignature& sig, Side side, int max_slot) {
  VarChain c;
  c.reserve(max_slot);
  for (int j = 1; j <= max_slot; ++j) c.push_back({var_at_slot(sig, side, j), j, Rat(1, j)});
  return c;
}

namespace {
// series coefficients [z^0..z^k] of exp(sum_v sgn * w_v t_v z^{slot_v})
std::vector<MultiPoly> exp_series(int k, const VarChain& chain, int sgn) {
  std::vector<MultiPoly> ser(k + 1);
  ser[0] = MultiPoly::one();
  for (const auto& wv : chain) {
    if (wv.slot < 1) throw std::invalid_argument("elementary_schur: slot must be >= 1");
    if (wv.slot > k) continue;
    std::vector<MultiPoly> next = ser;
    MultiPoly power = MultiPoly::one();
    Rat fact(1);
    for (int p = 1; wv.slot * p <= k; ++p) {
      power = power * MultiPoly::variable(wv.var);
      fact *= Rat(p);
      Rat w = wv.weight;
      for (int q = 1; q < p; ++q) w *= wv.weight;
      if (sgn < 0 && p % 2) w = -w;
      MultiPoly term = power.scaled(w / fact);
      for (int d = 0; d + wv.slot * p <= k; ++d)
        if (!ser[d].is_zero()) next[d + wv.slot * p] += ser[d] * term;
    }
    ser = std::move(next);
  }
  return ser;
}
}  // namespace

MultiPoly elementary_schur(int k, const VarChain& chain) {
  if (k < 0) return MultiPoly();
  if (k == 0) return MultiPoly::one();
  return exp_series(k, chain, +1)[k];
}

YoungDiagram::YoungDiagram(std::vector<int> r) : rows(std::move(r)) {
  while (!rows.empty() && rows.back() == 0) rows.pop_back();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] <= 0) throw std::invalid_argument("YoungDiagram: rows must be positive");
    if (i && rows[i] > rows[i - 1])
      throw std::invalid_argument("YoungDiagram: rows must be weakly decreasing");
  }
}

long YoungDiagram::size() const {
  long s = 0;
  for (int r : rows) s += r;
  return s;
}

YoungDiagram YoungDiagram::conjugate() const {
  YoungDiagram c;
  if (rows.empty()) return c;
  c.rows.resize(rows[0]);
  for (int j = 0; j < rows[0]; ++j) {
    int cnt = 0;
    for (int r : rows)
      if (r > j) ++cnt;
    c.rows[j] = cnt;
  }
  return c;
}

std::string YoungDiagram::str() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < rows.size(); ++i) os << (i ? "," : "") << rows[i];
  os << ")";
  return os.str();
}

MultiPoly schur_of_diagram(const YoungDiagram& y, const VarChain& chain) {
  const int n = static_cast<int>(y.rows.size());
  if (n == 0) return MultiPoly::one();
  int maxidx = 0;
  for (int r = 1; r <= n; ++r) maxidx = std::max(maxidx, y.rows[r - 1] - r + n);
  std::vector<MultiPoly> P = exp_series(maxidx, chain, +1);
  std::vector<std::vector<MultiPoly>> m(n, std::vector<MultiPoly>(n));
  for (int r = 1; r <= n; ++r)
    for (int c = 1; c <= n; ++c) {
      int idx = y.rows[r - 1] - r + c;
      m[r - 1][c - 1] = idx < 0 ? MultiPoly() : P[idx];
    }
  return poly_det(m);
}

bool conjugate_identity_check(const YoungDiagram& y, const VarChain& chain) {
  MultiPoly lhs = schur_of_diagram(y, chain).sign_flipped();
  MultiPoly rhs = schur_of_diagram(y.conjugate(), chain);
  if (y.size() % 2) rhs = -rhs;
  return lhs == rhs;
}

int HirotaMonomial::total_order() const {
  int s = 0;
  for (auto& [v, e] : factors) s += e;
  return s;
}

MultiPoly hirota_apply(const HirotaMonomial& mono, const MultiPoly& f, const MultiPoly& g) {
  // expand prod_v (d_v - d'_v)^{e_v} f(t) g(t') at t' = t
  std::vector<TimeVar> vars;
  for (auto& [v, e] : mono.factors) {
    if (e < 1) throw std::invalid_argument("hirota_apply: multiplicities must be >= 1");
    for (int k = 0; k < e; ++k) vars.push_back(v);
  }
  const std::size_t n = vars.size();
  if (n > 30) throw std::invalid_argument("hirota_apply: order too large");
  MultiPoly acc;
  for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
    MultiPoly ff = f, gg = g;
    int sign = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t(1) << i)) {
        ff = ff.derivative(vars[i]);
      } else {
        gg = gg.derivative(vars[i]);
        sign = -sign;
      }
    }
    MultiPoly prod = ff * gg;
    acc += sign > 0 ? prod : -prod;
  }
  return acc;
}

MultiPoly apply_diff_poly(const MultiPoly& op, const MultiPoly& f) {
  MultiPoly acc;
  for (auto& [m, c] : op.terms()) {
    MultiPoly g = f;
    for (auto [v, e] : m.factors()) {
      g = g.derivative(v, e);
      if (g.is_zero()) break;
    }
    acc += g.scaled(c);
  }
  return acc;
}

MultiPoly schur_hirota_apply(int k, const BTHSignature& sig, Side side, const MultiPoly& f,
                             const MultiPoly& g) {
  if (k < 0) return MultiPoly();
  VarChain chain = hatted_chain(sig, side, k);
  std::vector<MultiPoly> plus(k + 1), minus(k + 1);
  {
    auto sp = exp_series(k, chain, +1);
    auto sm = exp_series(k, chain, -1);
    for (int a = 0; a <= k; ++a) {
      plus[a] = apply_diff_poly(sp[a], f);
      minus[a] = apply_diff_poly(sm[a], g);
    }
  }
  MultiPoly acc;
  for (int a = 0; a <= k; ++a) acc += plus[a] * minus[k - a];
  return acc;
}

}  // namespace bth
