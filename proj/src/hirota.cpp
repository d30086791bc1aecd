#include "bth/hirota.hpp"

#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace bth {

namespace {
TimeVar primary(int gamma) { return TimeVar{gamma, 0}; }

// caches P_a(+-hat-partial) tau_i across the instances of a sweep; the
// bilinear products remain per-instance
class SchurCache {
 public:
  SchurCache(const TauSequence& ts) : ts_(ts) {}

  const MultiPoly& deriv(int i, Side side, int sign, int a) {
    auto key = std::make_tuple(i, side == Side::L ? 0 : 1, sign, a);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    MultiPoly val;
    if (a == 0) {
      val = ts_.tau(i);
    } else {
      MultiPoly op = elementary_schur(a, hatted_chain(ts_.sig, side, a));
      if (sign < 0) op = op.sign_flipped();
      val = apply_diff_poly(op, ts_.tau(i));
    }
    return memo_.emplace(key, std::move(val)).first->second;
  }

  // P_k(hat D) tau_f o tau_g through the cache
  MultiPoly schur_hirota(int k, Side side, int fi, int gi) {
    MultiPoly acc;
    if (k < 0) return acc;
    for (int a = 0; a <= k; ++a)
      acc += deriv(fi, side, +1, a) * deriv(gi, side, -1, k - a);
    return acc;
  }

 private:
  const TauSequence& ts_;
  std::map<std::tuple<int, int, int, int>, MultiPoly> memo_;
};


MultiPoly hirota1(TimeVar v, const MultiPoly& f, const MultiPoly& g) {
  return hirota_apply(HirotaMonomial{{{v, 1}}}, f, g);
}
MultiPoly hirota2(TimeVar v, TimeVar w, const MultiPoly& f, const MultiPoly& g) {
  if (v == w) return hirota_apply(HirotaMonomial{{{v, 2}}}, f, g);
  return hirota_apply(HirotaMonomial{{{v, 1}, {w, 1}}}, f, g);
}
}  // namespace

std::string ResidualReport::key() const {
  if (equation == "K0")
    return "K0[r=" + std::to_string(r) + ",m=" + std::to_string(m) +
           ",n=" + std::to_string(n) + "]";
  return equation + "[par=" + std::to_string(param) + ",n=" + std::to_string(n) + "]";
}

namespace {
MultiPoly family_residual_cached(SchurCache& sc, const TauSequence& ts, int family, int param,
                                 int n) {
  const BTHSignature& sig = ts.sig;
  const int N = sig.N, M = sig.M;
  switch (family) {
    case 1: {
      int b = param;
      MultiPoly lhs = hirota1(primary(b), ts.tau(n + 1), ts.tau(n));
      return lhs - sc.schur_hirota(M + b, Side::R, n + 1, n);
    }
    case 2: {
      int b = param;
      MultiPoly lhs = hirota2(primary(b), primary(-M + 1), ts.tau(n), ts.tau(n));
      return lhs - sc.schur_hirota(M + b + 1, Side::R, n, n).scaled(Rat(2));
    }
    case 3: {
      int b = param;
      MultiPoly lhs = hirota2(primary(b), primary(N), ts.tau(n), ts.tau(n));
      return lhs - sc.schur_hirota(M + b - 1, Side::R, n + 1, n - 1).scaled(Rat(2));
    }
    case 4: {
      int a = param;
      MultiPoly lhs = hirota2(primary(a), primary(-M + 1), ts.tau(n), ts.tau(n));
      return lhs - sc.schur_hirota(N - a, Side::L, n + 1, n - 1).scaled(Rat(2));
    }
    case 5: {
      int a = param;
      MultiPoly lhs = hirota2(primary(a), primary(N), ts.tau(n), ts.tau(n));
      return lhs - sc.schur_hirota(N - a + 2, Side::L, n, n).scaled(Rat(2));
    }
    case 6: {
      int a = param;
      MultiPoly lhs = hirota1(primary(a), ts.tau(n + 1), ts.tau(n));
      return lhs - sc.schur_hirota(N - a + 1, Side::L, n + 1, n);
    }
    default:
      throw std::invalid_argument("family_residual: family in 1..6");
  }
}

MultiPoly k0_residual_cached(SchurCache& sc, const TauSequence& ts, int r, int m, int n) {
  const BTHSignature& sig = ts.sig;
  int dl = sig.N * r + m, dr = sig.M * r - m;
  MultiPoly lhs = dl < 0 ? MultiPoly() : sc.schur_hirota(dl, Side::L, n - m + 1, n);
  MultiPoly rhs = dr < 0 ? MultiPoly() : sc.schur_hirota(dr, Side::R, n + 1, n - m);
  return lhs - rhs;
}
}  // namespace

MultiPoly family_residual(const TauSequence& ts, int family, int param, int n) {
  SchurCache sc(ts);
  return family_residual_cached(sc, ts, family, param, n);
}

MultiPoly k0_residual_poly(const TauSequence& ts, int r, int m, int n) {
  SchurCache sc(ts);
  return k0_residual_cached(sc, ts, r, m, n);
}

namespace {
bool indices_available(const TauSequence& ts, std::initializer_list<int> idx) {
  if (ts.terminal) return true;
  for (int i : idx)
    if (i > ts.last()) return false;
  return true;
}
}  // namespace

std::vector<ResidualReport> primary_residuals(const TauSequence& ts) {
  const BTHSignature& sig = ts.sig;
  std::vector<ResidualReport> out;
  SchurCache sc(ts);
  const int top = ts.terminal ? ts.last() : ts.last() - 1;
  for (int fam = 1; fam <= 6; ++fam) {
    const bool beta_family = fam <= 3;
    int lo = beta_family ? -sig.M + 1 : 1;
    int hi = beta_family ? 0 : sig.N;
    for (int par = lo; par <= hi; ++par) {
      for (int n = 0; n <= top; ++n) {
        bool needs_next = fam == 1 || fam == 3 || fam == 4 || fam == 6;
        if (needs_next && !indices_available(ts, {n + 1})) continue;
        out.push_back(
            ResidualReport{"F" + std::to_string(fam), n, par, 0, 0,
                           family_residual_cached(sc, ts, fam, par, n)});
      }
    }
  }
  return out;
}

ResidualReport k0_residuals(const TauSequence& ts, int r, int m, int n) {
  if (r < 0 || r > 1 || m < -1 || m > 1)
    throw std::invalid_argument("k0_residuals: r in {0,1}, m in {-1,0,1}");
  if (!indices_available(ts, {n - m + 1, n + 1, n, n - m}))
    throw std::out_of_range("k0_residuals: insufficient tau range");
  return ResidualReport{"K0", n, 0, r, m, k0_residual_poly(ts, r, m, n)};
}

std::vector<ResidualReport> k0_residual_sweep(const TauSequence& ts) {
  std::vector<ResidualReport> out;
  SchurCache sc(ts);
  const int top = ts.terminal ? ts.last() : ts.last() - 1;
  for (int r = 0; r <= 1; ++r)
    for (int m = -1; m <= 1; ++m)
      for (int n = 0; n <= top; ++n) {
        if (!indices_available(ts, {n - m + 1, n + 1, n, n - m})) continue;
        if (n - m < -1) continue;
        out.push_back(ResidualReport{"K0", n, 0, r, m, k0_residual_cached(sc, ts, r, m, n)});
      }
  return out;
}

bool all_pass(const std::vector<ResidualReport>& reports) {
  for (const auto& r : reports)
    if (!r.passes()) return false;
  return true;
}

TauSequence relabel_nm_to_mn(const TauSequence& ts) {
  std::vector<MultiPoly> out;
  out.reserve(ts.taus.size());
  for (const auto& t : ts.taus)
    out.push_back(t.relabeled([](TimeVar v) { return TimeVar{1 - v.gamma, v.n}; }));
  return TauSequence(ts.sig.swapped(), std::move(out), ts.terminal);
}

bool nm_mn_relabel_check(const TauSequence& tau_nm, const TauSequence& tau_mn) {
  auto nm_reports = primary_residuals(tau_nm);
  auto nm_k0 = k0_residual_sweep(tau_nm);
  bool nm_pass = all_pass(nm_reports) && all_pass(nm_k0);
  if (!nm_pass) return true;  // nothing claimed when the source sweep fails
  auto mn_reports = primary_residuals(tau_mn);
  auto mn_k0 = k0_residual_sweep(tau_mn);
  return all_pass(mn_reports) && all_pass(mn_k0);
}

// ---- split-representation sweep -------------------------------------------

namespace {

using Part = std::pair<MultiPoly, MultiPoly>;
using TensorSum = std::vector<Part>;

// exact zero test: triangular-reduce one tensor side, accumulate the other,
// and demand every accumulated coefficient polynomial vanish
bool tensor_is_zero(const TensorSum& terms) {
  long size_a = 0, size_b = 0;
  for (auto& [a, b] : terms) {
    size_a += static_cast<long>(a.term_count());
    size_b += static_cast<long>(b.term_count());
  }
  const bool reduce_a = size_a <= size_b;
  std::map<Monomial, std::size_t> lead_index;
  std::vector<MultiPoly> basis, acc;
  for (auto& term : terms) {
    const MultiPoly& red = reduce_a ? term.first : term.second;
    const MultiPoly& oth = reduce_a ? term.second : term.first;
    if (red.is_zero() || oth.is_zero()) continue;
    MultiPoly rem = red;
    std::vector<std::pair<std::size_t, Rat>> contribs;
    while (!rem.is_zero()) {
      const auto& [lead, c] = rem.terms().back();
      auto it = lead_index.find(lead);
      if (it == lead_index.end()) {
        std::size_t idx = basis.size();
        lead_index.emplace(lead, idx);
        basis.push_back(rem.scaled(Rat(1) / c));
        acc.push_back(MultiPoly());
        contribs.emplace_back(idx, c);
        break;
      }
      contribs.emplace_back(it->second, c);
      rem -= basis[it->second].scaled(c);
    }
    for (auto& [idx, c] : contribs) acc[idx] += oth.scaled(c);
  }
  for (auto& a : acc)
    if (!a.is_zero()) return false;
  return true;
}

MultiPoly tensor_expand(const TensorSum& terms) {
  MultiPoly r;
  for (auto& [a, b] : terms) r += a * b;
  return r;
}

// one-sided derivative cache over the parts of a SplitTau
class SplitCache {
 public:
  explicit SplitCache(const SplitTau& st) : st_(st) {}

  const std::vector<Part>& parts(int i) const {
    static const std::vector<Part> empty;
    if (i < 0 || i > st_.last()) return empty;
    return st_.parts[i];
  }

  // P_a(+-hat) applied to the `side` factor of part p of tau_i
  const MultiPoly& deriv(int i, std::size_t p, Side side, int sign, int a) {
    auto key = std::make_tuple(i, static_cast<int>(p), side == Side::L ? 0 : 1, sign, a);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const MultiPoly& base =
        side == Side::L ? st_.parts[i][p].first : st_.parts[i][p].second;
    MultiPoly val;
    if (a == 0) {
      val = base;
    } else {
      MultiPoly op = elementary_schur(a, hatted_chain(st_.sig, side, a));
      if (sign < 0) op = op.sign_flipped();
      val = apply_diff_poly(op, base);
    }
    return memo_.emplace(key, std::move(val)).first->second;
  }

  // P_k(hat D_side) tau_f o tau_g as a tensor sum
  TensorSum schur(int k, Side side, int fi, int gi) {
    TensorSum out;
    if (k < 0) return out;
    const auto& fp = parts(fi);
    const auto& gp = parts(gi);
    for (std::size_t p = 0; p < fp.size(); ++p)
      for (std::size_t q = 0; q < gp.size(); ++q) {
        MultiPoly c;
        for (int a = 0; a <= k; ++a)
          c += deriv(fi, p, side, +1, a) * deriv(gi, q, side, -1, k - a);
        if (side == Side::L)
          out.emplace_back(std::move(c), fp[p].second * gp[q].second);
        else
          out.emplace_back(fp[p].first * gp[q].first, std::move(c));
      }
    return out;
  }

  // product of first-order Hirota derivatives (one or two variables, any
  // sides) on tau_f o tau_g; every factor splits across the tensor sides
  TensorSum hirota(const std::vector<TimeVar>& vars, int fi, int gi) {
    TensorSum out;
    const auto& fp = parts(fi);
    const auto& gp = parts(gi);
    std::vector<TimeVar> lv, rv;
    for (TimeVar v : vars) (side_of(v) == Side::L ? lv : rv).push_back(v);
    for (std::size_t p = 0; p < fp.size(); ++p)
      for (std::size_t q = 0; q < gp.size(); ++q) {
        HirotaMonomial hl, hr;
        for (TimeVar v : lv) hl.factors.emplace_back(v, 1);
        for (TimeVar v : rv) hr.factors.emplace_back(v, 1);
        MultiPoly a = lv.empty() ? fp[p].first * gp[q].first
                                 : hirota_apply(hl, fp[p].first, gp[q].first);
        MultiPoly b = rv.empty() ? fp[p].second * gp[q].second
                                 : hirota_apply(hr, fp[p].second, gp[q].second);
        out.emplace_back(std::move(a), std::move(b));
      }
    return out;
  }

 private:
  const SplitTau& st_;
  std::map<std::tuple<int, int, int, int, int>, MultiPoly> memo_;
};

void append_scaled(TensorSum& dst, TensorSum src, const Rat& scale) {
  for (auto& [a, b] : src) dst.emplace_back(a.scaled(scale), std::move(b));
}

TensorSum split_family_terms(SplitCache& sc, const BTHSignature& sig, int family, int param,
                             int n) {
  const int N = sig.N, M = sig.M;
  TensorSum out;
  switch (family) {
    case 1:
      out = sc.hirota({primary(param)}, n + 1, n);
      append_scaled(out, sc.schur(M + param, Side::R, n + 1, n), Rat(-1));
      return out;
    case 2:
      out = sc.hirota({primary(param), primary(-M + 1)}, n, n);
      append_scaled(out, sc.schur(M + param + 1, Side::R, n, n), Rat(-2));
      return out;
    case 3:
      out = sc.hirota({primary(param), primary(N)}, n, n);
      append_scaled(out, sc.schur(M + param - 1, Side::R, n + 1, n - 1), Rat(-2));
      return out;
    case 4:
      out = sc.hirota({primary(param), primary(-M + 1)}, n, n);
      append_scaled(out, sc.schur(N - param, Side::L, n + 1, n - 1), Rat(-2));
      return out;
    case 5:
      out = sc.hirota({primary(param), primary(N)}, n, n);
      append_scaled(out, sc.schur(N - param + 2, Side::L, n, n), Rat(-2));
      return out;
    case 6:
      out = sc.hirota({primary(param)}, n + 1, n);
      append_scaled(out, sc.schur(N - param + 1, Side::L, n + 1, n), Rat(-1));
      return out;
    default:
      throw std::invalid_argument("split_family_terms: family in 1..6");
  }
}

TensorSum split_k0_terms(SplitCache& sc, const BTHSignature& sig, int r, int m, int n) {
  TensorSum out = sc.schur(sig.N * r + m, Side::L, n - m + 1, n);
  append_scaled(out, sc.schur(sig.M * r - m, Side::R, n + 1, n - m), Rat(-1));
  return out;
}

}  // namespace

MultiPoly SplitTau::expanded(int i) const {
  MultiPoly r;
  if (i < 0 || i > last()) return r;
  for (auto& [a, b] : parts[i]) r += a * b;
  return r;
}

SplitTau split_rational_tau(const BTHSignature& sig, int j, int m, int n) {
  int g = std::gcd(sig.N, sig.M);
  BTHSignature rs(sig.N / g, sig.M / g);
  SplitTau st;
  st.sig = rs;
  st.parts.resize(j + 1);
  st.parts[0].emplace_back(MultiPoly::one(), MultiPoly::one());
  for (int s = 1; s <= j; ++s) {
    YoungDecomposition yd = young_decomposition(sig, j, m, n, s);
    for (auto& pr : yd.pairs) {
      int maxL = pr.left.rows.empty() ? 1 : pr.left.rows[0] + static_cast<int>(pr.left.rows.size());
      int maxR =
          pr.right.rows.empty() ? 1 : pr.right.rows[0] + static_cast<int>(pr.right.rows.size());
      MultiPoly a = schur_of_diagram(pr.left, tau_chain(rs, Side::L, std::max(1, maxL)));
      if (yd.sign < 0) a = -a;
      st.parts[s].emplace_back(std::move(a),
                               schur_of_diagram(pr.right, tau_chain(rs, Side::R, std::max(1, maxR))));
    }
  }
  return st;
}

SplitTau relabel_nm_to_mn(const SplitTau& st) {
  auto image = [](TimeVar v) { return TimeVar{1 - v.gamma, v.n}; };
  SplitTau out;
  out.sig = st.sig.swapped();
  out.parts.resize(st.parts.size());
  for (std::size_t i = 0; i < st.parts.size(); ++i)
    for (auto& [a, b] : st.parts[i])
      out.parts[i].emplace_back(b.relabeled(image), a.relabeled(image));
  return out;
}

MultiPoly family_residual(const SplitTau& st, int family, int param, int n) {
  SplitCache sc(st);
  return tensor_expand(split_family_terms(sc, st.sig, family, param, n));
}

MultiPoly k0_residual_poly(const SplitTau& st, int r, int m, int n) {
  SplitCache sc(st);
  return tensor_expand(split_k0_terms(sc, st.sig, r, m, n));
}

std::vector<ResidualReport> primary_residuals(const SplitTau& st) {
  std::vector<ResidualReport> out;
  SplitCache sc(st);
  for (int fam = 1; fam <= 6; ++fam) {
    const bool beta_family = fam <= 3;
    int lo = beta_family ? -st.sig.M + 1 : 1;
    int hi = beta_family ? 0 : st.sig.N;
    for (int par = lo; par <= hi; ++par)
      for (int n = 0; n <= st.last(); ++n) {
        TensorSum terms = split_family_terms(sc, st.sig, fam, par, n);
        ResidualReport rep{"F" + std::to_string(fam), n, par, 0, 0, MultiPoly()};
        if (!tensor_is_zero(terms)) rep.residual = tensor_expand(terms);
        out.push_back(std::move(rep));
      }
  }
  return out;
}

std::vector<ResidualReport> k0_residual_sweep(const SplitTau& st) {
  std::vector<ResidualReport> out;
  SplitCache sc(st);
  for (int r = 0; r <= 1; ++r)
    for (int m = -1; m <= 1; ++m)
      for (int n = 0; n <= st.last(); ++n) {
        if (n - m < -1) continue;
        TensorSum terms = split_k0_terms(sc, st.sig, r, m, n);
        ResidualReport rep{"K0", n, 0, r, m, MultiPoly()};
        if (!tensor_is_zero(terms)) rep.residual = tensor_expand(terms);
        out.push_back(std::move(rep));
      }
  return out;
}

}  // namespace bth
