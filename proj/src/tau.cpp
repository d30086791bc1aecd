#include "bth/tau.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace bth {

namespace {
const MultiPoly kZero{};

MultiPoly schur_diff_apply(const BTHSignature& sig, Side side, int d, int sign,
                           const MultiPoly& f) {
  // P_d(+-hat-partial) f
  if (d < 0) return MultiPoly();
  if (d == 0) return f;
  MultiPoly op = elementary_schur(d, hatted_chain(sig, side, d));
  if (sign < 0) op = op.sign_flipped();
  return apply_diff_poly(op, f);
}
}  // namespace

TauSequence::TauSequence(const BTHSignature& s, std::vector<MultiPoly> t, bool term)
    : sig(s), taus(std::move(t)), terminal(term) {
  if (taus.empty() || !(taus[0] == MultiPoly::one()))
    throw std::invalid_argument("TauSequence: tau_0 must be 1");
}

int TauSequence::rank() const {
  for (int i = last(); i >= 0; --i)
    if (!taus[i].is_zero()) return i;
  return 0;
}

const MultiPoly& TauSequence::tau(int i) const {
  if (i < 0) return kZero;
  if (i > last()) {
    if (terminal) return kZero;
    throw std::out_of_range("TauSequence: index beyond stored window");
  }
  return taus[i];
}

TauSequence TauSequence::evaluated_partial(const TimePoint& pt) const {
  std::vector<MultiPoly> out;
  out.reserve(taus.size());
  for (const auto& t : taus) {
    MultiPoly::Terms raw;
    for (auto& [m, c] : t.terms()) {
      std::vector<std::pair<TimeVar, int>> keep;
      Rat coeff = c;
      bool dead = false;
      for (auto [v, e] : m.factors()) {
        auto it = pt.find(v);
        if (it == pt.end()) {
          keep.emplace_back(v, e);
        } else if (it->second.is_zero()) {
          dead = true;
          break;
        } else {
          for (int q = 0; q < e; ++q) coeff *= it->second;
        }
      }
      if (!dead) raw.emplace_back(Monomial::from_factors(std::move(keep)), coeff);
    }
    out.push_back(MultiPoly::from_raw(std::move(raw)));
  }
  return TauSequence(sig, std::move(out), terminal);
}

TauSequence tau_from_minors(const MomentMatrix& m) {
  std::vector<MultiPoly> taus;
  taus.reserve(m.size() + 1);
  taus.push_back(MultiPoly::one());
  for (int s = 1; s <= m.size(); ++s) {
    std::vector<std::vector<MultiPoly>> block(s, std::vector<MultiPoly>(s));
    for (int i = 1; i <= s; ++i)
      for (int j = 1; j <= s; ++j) block[i - 1][j - 1] = m.entry(i, j);
    taus.push_back(poly_det(block));
  }
  return TauSequence(m.signature(), std::move(taus), /*terminal=*/true);
}

MultiPoly pbar(const BTHSignature& sig, int k) {
  MultiPoly acc;
  if (k < 0) return acc;
  for (int a = 0; a * sig.M <= k; ++a) {
    int rem = k - a * sig.M;
    if (rem % sig.N) continue;
    int b = rem / sig.N;
    acc += elementary_schur(a, tau_chain(sig, Side::L, a)) *
           elementary_schur(b, tau_chain(sig, Side::R, b));
  }
  return acc;
}

std::vector<int> k_set(const BTHSignature& sig, int j) {
  int g = std::gcd(sig.N, sig.M);
  BTHSignature rs(sig.N / g, sig.M / g);
  std::vector<int> ks;
  for (int m = 0; m < rs.N; ++m)
    for (int n = 0; n < rs.M; ++n) ks.push_back((j - 1) * rs.N * rs.M + m * rs.M + n * rs.N);
  std::sort(ks.begin(), ks.end());
  return ks;
}

std::vector<int> degree_diagram(const BTHSignature& sig, int k, int s) {
  int g = std::gcd(sig.N, sig.M);
  BTHSignature rs(sig.N / g, sig.M / g);
  std::vector<int> rows(s);
  for (int i = 0; i < s; ++i) rows[i] = k - (s - 1 - i) * rs.N - i * rs.M;
  return rows;
}

RationalTau rational_tau(const BTHSignature& sig, int j, int m, int n) {
  int g = std::gcd(sig.N, sig.M);
  BTHSignature rs(sig.N / g, sig.M / g);
  if (j < 1) throw std::invalid_argument("rational_tau: j must be >= 1");
  if (m < 0 || m >= rs.N || n < 0 || n >= rs.M)
    throw std::invalid_argument("rational_tau: need 0 <= m < N, 0 <= n < M (gcd-reduced)");
  const int k = (j - 1) * rs.N * rs.M + m * rs.M + n * rs.N;
  MomentMatrix mom(rs, j);
  std::map<int, MultiPoly> cache;
  for (int a = 1; a <= j; ++a)
    for (int b = 1; b <= j; ++b) {
      int kk = k - (a - 1) * rs.M - (b - 1) * rs.N;
      auto it = cache.find(kk);
      if (it == cache.end()) it = cache.emplace(kk, pbar(rs, kk)).first;
      mom.entry(a, b) = it->second;
    }
  TauSequence taus = tau_from_minors(mom);
  return RationalTau{k, rs, std::move(taus), std::move(mom)};
}

MultiPoly YoungDecomposition::signed_sum(const BTHSignature& rs) const {
  MultiPoly acc;
  for (const auto& p : pairs) {
    int maxL = p.left.rows.empty() ? 0 : p.left.rows[0] + static_cast<int>(p.left.rows.size());
    int maxR = p.right.rows.empty() ? 0 : p.right.rows[0] + static_cast<int>(p.right.rows.size());
    acc += schur_of_diagram(p.left, tau_chain(rs, Side::L, std::max(1, maxL))) *
           schur_of_diagram(p.right, tau_chain(rs, Side::R, std::max(1, maxR)));
  }
  return sign < 0 ? -acc : acc;
}

YoungDecomposition young_decomposition(const BTHSignature& sig, int j, int m, int n, int s) {
  int g = std::gcd(sig.N, sig.M);
  BTHSignature rs(sig.N / g, sig.M / g);
  if (s < 1 || s > j) throw std::invalid_argument("young_decomposition: need 1 <= s <= j");
  if (m < 0 || m >= rs.N || n < 0 || n >= rs.M)
    throw std::invalid_argument("young_decomposition: need 0 <= m < N, 0 <= n < M");
  YoungDecomposition out;
  out.sign = (s * (s - 1) / 2) % 2 ? -1 : 1;
  std::vector<int> a(s);
  for (int i = 0; i < s; ++i) a[i] = i;
  while (true) {
    std::vector<int> left(s), right(s);
    for (int i = 1; i <= s; ++i) {
      left[i - 1] = (j - 1 - a[i - 1]) * rs.N + m - s + i;
      right[i - 1] = n + a[s - i] * rs.M - s + i;
    }
    out.pairs.push_back({YoungDiagram(left), YoungDiagram(right)});
    // next subset of {0..j-1}
    int pos = s - 1;
    while (pos >= 0 && a[pos] == j - s + pos) --pos;
    if (pos < 0) break;
    ++a[pos];
    for (int q = pos + 1; q < s; ++q) a[q] = a[q - 1] + 1;
  }
  return out;
}

LaxFromTau lax_from_tau(const TauSequence& ts, int size, bool strict) {
  const BTHSignature& sig = ts.sig;
  if (size < 0) size = ts.rank();
  if (size < 1) throw std::invalid_argument("lax_from_tau: empty window");
  for (int i = 0; i <= size; ++i)
    if (ts.tau(i).is_zero())
      throw std::invalid_argument("lax_from_tau: zero tau inside requested window");
  LaxFromTau out;
  out.size = size;
  out.left.assign(size, std::vector<TauRatio>(size));
  out.right.assign(size, std::vector<TauRatio>(size));
  for (int i = 1; i <= size; ++i)
    for (int j = 1; j <= size; ++j) {
      MultiPoly den = ts.tau(i - 1) * ts.tau(j);
      int dl = i - j + sig.N;
      int dr = j - i + sig.M;
      MultiPoly ln = dl < 0 ? MultiPoly()
                            : schur_hirota_apply(dl, sig, Side::L, ts.tau(j), ts.tau(i - 1));
      MultiPoly rn = dr < 0 ? MultiPoly()
                            : schur_hirota_apply(dr, sig, Side::R, ts.tau(i), ts.tau(j - 1));
      if (!(ln == rn)) {
        out.dual_agree = false;
        if (strict) throw std::domain_error("lax_from_tau: left/right formula mismatch");
      }
      bool inband = -sig.M <= j - i && j - i <= sig.N;
      if (!inband && !(ln.is_zero() && rn.is_zero())) out.band_ok = false;
      out.left[i - 1][j - 1] = TauRatio{std::move(ln), den};
      out.right[i - 1][j - 1] = TauRatio{std::move(rn), std::move(den)};
    }
  return out;
}

UFromTau u_from_tau(const TauSequence& ts, int i, int sites) {
  const BTHSignature& sig = ts.sig;
  if (i < -sig.M || i > sig.N - 1) throw std::invalid_argument("u_from_tau: i out of band");
  const int first = std::max(1, 1 - i);
  if (sites < 0) sites = std::max(1, ts.rank() - std::max(i, 0) - first + 1);
  UFromTau out;
  out.i = i;
  out.first_site = first;
  for (int j = first; j < first + sites; ++j) {
    if (ts.tau(j - 1).is_zero() || ts.tau(j + i).is_zero())
      throw std::invalid_argument("u_from_tau: zero tau in denominator");
    MultiPoly den = ts.tau(j - 1) * ts.tau(j + i);
    MultiPoly ln = schur_hirota_apply(sig.N - i, sig, Side::L, ts.tau(j + i), ts.tau(j - 1));
    MultiPoly rn = schur_hirota_apply(sig.M + i, sig, Side::R, ts.tau(j), ts.tau(j + i - 1));
    if (!(ln == rn)) out.dual_agree = false;
    out.left.push_back(TauRatio{std::move(ln), den});
    out.right.push_back(TauRatio{std::move(rn), std::move(den)});
  }
  return out;
}

DressingMatrices dressing_matrices(const TauSequence& ts, int size) {
  const BTHSignature& sig = ts.sig;
  if (size < 0) size = ts.rank();
  DressingMatrices d;
  d.size = size;
  auto zero = TauRatio{MultiPoly(), MultiPoly::one()};
  d.pl.assign(size, std::vector<TauRatio>(size, zero));
  d.pl_inv.assign(size, std::vector<TauRatio>(size, zero));
  d.pr.assign(size, std::vector<TauRatio>(size, zero));
  d.pr_inv.assign(size, std::vector<TauRatio>(size, zero));
  for (int i = 1; i <= size; ++i)
    for (int j = 1; j <= size; ++j) {
      if (i >= j) {
        d.pl[i - 1][j - 1] =
            TauRatio{schur_diff_apply(sig, Side::L, i - j, -1, ts.tau(i - 1)), ts.tau(i - 1)};
        d.pl_inv[i - 1][j - 1] =
            TauRatio{schur_diff_apply(sig, Side::L, i - j, +1, ts.tau(j)), ts.tau(j)};
      }
      if (j >= i) {
        d.pr[i - 1][j - 1] =
            TauRatio{schur_diff_apply(sig, Side::R, j - i, +1, ts.tau(i)), ts.tau(i - 1)};
        d.pr_inv[i - 1][j - 1] =
            TauRatio{schur_diff_apply(sig, Side::R, j - i, -1, ts.tau(j - 1)), ts.tau(j)};
      }
    }
  return d;
}

namespace {
TauRatio ratio_add(const TauRatio& a, const TauRatio& b) {
  if (a.num.is_zero()) return b;
  if (b.num.is_zero()) return a;
  return TauRatio{a.num * b.den + b.num * a.den, a.den * b.den};
}
TauRatio ratio_mul(const TauRatio& a, const TauRatio& b) {
  if (a.num.is_zero() || b.num.is_zero()) return TauRatio{MultiPoly(), MultiPoly::one()};
  return TauRatio{a.num * b.num, a.den * b.den};
}
}  // namespace

bool dressing_product_is_identity(const std::vector<std::vector<TauRatio>>& a,
                                  const std::vector<std::vector<TauRatio>>& b, int window) {
  for (int i = 1; i <= window; ++i)
    for (int k = 1; k <= window; ++k) {
      TauRatio acc{MultiPoly(), MultiPoly::one()};
      for (std::size_t j = 1; j <= a.size(); ++j)
        acc = ratio_add(acc, ratio_mul(a[i - 1][j - 1], b[j - 1][k - 1]));
      if (i == k) {
        if (!(acc.num == acc.den)) return false;
      } else {
        if (!acc.num.is_zero()) return false;
      }
    }
  return true;
}

bool dressing_factorizes_moment(const DressingMatrices& d, const MomentMatrix& m, int window) {
  for (int i = 1; i <= window; ++i)
    for (int k = 1; k <= window; ++k) {
      TauRatio acc{MultiPoly(), MultiPoly::one()};
      for (int j = 1; j <= d.size; ++j)
        acc = ratio_add(acc, ratio_mul(d.pl_inv[i - 1][j - 1], d.pr[j - 1][k - 1]));
      if (!(acc.num == m.entry(i, k) * acc.den)) return false;
    }
  return true;
}

WavePairing wave_pairing(const MomentMatrix& m, int i, int j) {
  const BTHSignature& sig = m.signature();
  const int T = m.size();
  if (i < 1 || j < 1 || i > T || j > T) throw std::invalid_argument("wave_pairing: index range");
  auto C = [&](int a, int b) -> const MultiPoly& {  // 0-based moment entries
    return m.entry(a + 1, b + 1);
  };
  // coefficient of lambda^{a/N} in W_Li * tau_{i-1}: bordered determinant
  // with the last column replaced by the indicator of row a
  auto wl_coeff = [&](int a) {
    std::vector<std::vector<MultiPoly>> rows(i, std::vector<MultiPoly>(i));
    for (int r = 0; r < i; ++r) {
      for (int c = 0; c < i - 1; ++c) rows[r][c] = C(r, c);
      rows[r][i - 1] = r == a ? MultiPoly::one() : MultiPoly();
    }
    return poly_det(rows);
  };
  auto wr_coeff = [&](int b) {
    std::vector<std::vector<MultiPoly>> rows(j, std::vector<MultiPoly>(j));
    for (int r = 0; r < j - 1; ++r)
      for (int c = 0; c < j; ++c) rows[r][c] = C(r, c);
    for (int c = 0; c < j; ++c) rows[j - 1][c] = c == b ? MultiPoly::one() : MultiPoly();
    return poly_det(rows);
  };
  std::vector<MultiPoly> fa(i), gb(j);
  for (int a = 0; a < i; ++a) fa[a] = wl_coeff(a);
  for (int b = 0; b < j; ++b) gb[b] = wr_coeff(b);

  WavePairing out;
  out.lambda_valid = i + sig.N <= T;
  for (int a = 0; a < i; ++a)
    for (int b = 0; b < j; ++b) {
      if (fa[a].is_zero() || gb[b].is_zero()) continue;
      MultiPoly fg = fa[a] * gb[b];
      out.plain += fg * C(a, b);
      if (out.lambda_valid) out.lambda_shifted += fg * C(a + sig.N, b);
    }
  out.hat = out.plain;  // What differs from Wbar only by the 1/tau_{j-1} prefactor
  // denominators
  {
    // tau_{i-1}, tau_j, tau_{j-1} as principal minors of m
    auto minor = [&](int s) {
      std::vector<std::vector<MultiPoly>> b(s, std::vector<MultiPoly>(s));
      for (int r = 1; r <= s; ++r)
        for (int c = 1; c <= s; ++c) b[r - 1][c - 1] = m.entry(r, c);
      return poly_det(b);
    };
    MultiPoly ti1 = minor(i - 1), tj = minor(j), tj1 = minor(j - 1);
    out.den_plain = ti1 * tj;
    out.den_hat = ti1 * tj1;
  }
  return out;
}

}  // namespace bth
