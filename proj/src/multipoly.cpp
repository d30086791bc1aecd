#include "bth/multipoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace bth {

namespace {
constexpr int kExpBits = 12;
constexpr char32_t kExpMask = (1u << kExpBits) - 1;
}  // namespace

char32_t Monomial::pack(TimeVar v, int exp) {
  if (v.n < 0 || v.n >= (1 << 13) || v.gamma < -32 || v.gamma > 31 || exp < 1 ||
      exp >= (1 << kExpBits))
    throw std::invalid_argument("Monomial: variable or exponent out of packing range");
  char32_t var_code = (static_cast<char32_t>(v.n) << 6) | static_cast<char32_t>(v.gamma + 32);
  return (var_code << kExpBits) | static_cast<char32_t>(exp);
}

std::pair<TimeVar, int> Monomial::unpack(char32_t c) {
  int exp = static_cast<int>(c & kExpMask);
  char32_t var_code = c >> kExpBits;
  int gamma = static_cast<int>(var_code & 63) - 32;
  int n = static_cast<int>(var_code >> 6);
  return {TimeVar{gamma, n}, exp};
}

Monomial Monomial::from_factors(std::vector<std::pair<TimeVar, int>> f) {
  std::sort(f.begin(), f.end(), [](auto& a, auto& b) { return a.first < b.first; });
  Monomial m;
  m.code.reserve(f.size());
  for (auto& [v, e] : f) {
    if (e == 0) continue;
    if (!m.code.empty() && unpack(m.code.back()).first == v) {
      auto [vv, ee] = unpack(m.code.back());
      m.code.back() = pack(vv, ee + e);
    } else {
      m.code.push_back(pack(v, e));
    }
  }
  return m;
}

std::vector<std::pair<TimeVar, int>> Monomial::factors() const {
  std::vector<std::pair<TimeVar, int>> f;
  f.reserve(code.size());
  for (char32_t c : code) f.push_back(unpack(c));
  return f;
}

long Monomial::total_degree() const {
  long d = 0;
  for (char32_t c : code) d += static_cast<long>(c & kExpMask);
  return d;
}

MultiPoly MultiPoly::constant(Rat c) {
  MultiPoly p;
  if (!c.is_zero()) p.t_.emplace_back(Monomial{}, std::move(c));
  return p;
}

MultiPoly MultiPoly::variable(TimeVar v) {
  MultiPoly p;
  Monomial m;
  m.code.push_back(Monomial::pack(v, 1));
  p.t_.emplace_back(std::move(m), Rat(1));
  return p;
}

bool MultiPoly::is_constant() const {
  return t_.empty() || (t_.size() == 1 && t_.front().first.empty());
}

Rat MultiPoly::constant_value() const {
  if (!t_.empty() && t_.front().first.empty()) return t_.front().second;
  return Rat(0);
}

void MultiPoly::add_term(const Monomial& m, const Rat& c) {
  if (c.is_zero()) return;
  auto it = std::lower_bound(t_.begin(), t_.end(), m,
                             [](const Term& t, const Monomial& k) { return t.first < k; });
  if (it != t_.end() && it->first == m) {
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  } else {
    t_.emplace(it, m, c);
  }
}

MultiPoly MultiPoly::from_raw(Terms raw) {
  std::sort(raw.begin(), raw.end(),
            [](const Term& a, const Term& b) { return a.first < b.first; });
  MultiPoly p;
  p.t_.reserve(raw.size());
  for (auto& [m, c] : raw) {
    if (c.is_zero()) continue;
    if (!p.t_.empty() && p.t_.back().first == m) {
      p.t_.back().second += c;
      if (p.t_.back().second.is_zero()) p.t_.pop_back();
    } else {
      p.t_.emplace_back(std::move(m), std::move(c));
    }
  }
  return p;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  if (o.t_.empty()) return *this;
  Terms merged;
  merged.reserve(t_.size() + o.t_.size());
  std::size_t i = 0, j = 0;
  while (i < t_.size() && j < o.t_.size()) {
    if (t_[i].first == o.t_[j].first) {
      Rat c = t_[i].second + o.t_[j].second;
      if (!c.is_zero()) merged.emplace_back(t_[i].first, std::move(c));
      ++i, ++j;
    } else if (t_[i].first < o.t_[j].first) {
      merged.push_back(std::move(t_[i++]));
    } else {
      merged.push_back(o.t_[j++]);
    }
  }
  for (; i < t_.size(); ++i) merged.push_back(std::move(t_[i]));
  for (; j < o.t_.size(); ++j) merged.push_back(o.t_[j]);
  t_ = std::move(merged);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) { return *this += o.scaled(Rat(-1)); }

MultiPoly MultiPoly::scaled(const Rat& c) const {
  MultiPoly r;
  if (c.is_zero()) return r;
  r.t_.reserve(t_.size());
  for (auto& [m, v] : t_) r.t_.emplace_back(m, v * c);
  return r;
}

namespace {
Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.code.reserve(a.code.size() + b.code.size());
  std::size_t i = 0, j = 0;
  while (i < a.code.size() && j < b.code.size()) {
    char32_t va = a.code[i] >> kExpBits, vb = b.code[j] >> kExpBits;
    if (va == vb) {
      r.code.push_back((va << kExpBits) |
                       ((a.code[i] & kExpMask) + (b.code[j] & kExpMask)));
      ++i, ++j;
    } else if (va < vb) {
      r.code.push_back(a.code[i++]);
    } else {
      r.code.push_back(b.code[j++]);
    }
  }
  r.code.insert(r.code.end(), a.code.begin() + i, a.code.end());
  r.code.insert(r.code.end(), b.code.begin() + j, b.code.end());
  return r;
}

struct MonoHash {
  std::size_t operator()(const Monomial& m) const {
    std::size_t h = 1469598103934665603ull;
    for (char32_t c : m.code) {
      h ^= static_cast<std::size_t>(c);
      h *= 1099511628211ull;
    }
    return h;
  }
};
}  // namespace

namespace {

// dense fast path: exponents of up to 24 variables byte-packed into three
// words, coefficients as integers over one common denominator per factor
struct Pack3 {
  std::uint64_t w[3];
  friend bool operator==(const Pack3& a, const Pack3& b) {
    return a.w[0] == b.w[0] && a.w[1] == b.w[1] && a.w[2] == b.w[2];
  }
};
struct Pack3Hash {
  std::size_t operator()(const Pack3& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint64_t v : k.w) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return h;
  }
};

bool dense_convert(const MultiPoly::Terms& terms,
                   const std::vector<char32_t>& var_codes,
                   std::vector<std::pair<Pack3, mpz_class>>& out, mpz_class& den) {
  // common denominator
  den = 1;
  for (auto& [m, c] : terms) {
    const mpz_class& d = c.raw().get_den();
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), d.get_mpz_t());
  }
  out.clear();
  out.reserve(terms.size());
  mpz_class scale, num;
  for (auto& [m, c] : terms) {
    Pack3 key{{0, 0, 0}};
    for (char32_t fc : m.code) {
      char32_t var = fc >> kExpBits;
      int exp = static_cast<int>(fc & kExpMask);
      if (exp > 120) return false;
      auto it = std::lower_bound(var_codes.begin(), var_codes.end(), var);
      std::size_t pos = static_cast<std::size_t>(it - var_codes.begin());
      key.w[pos >> 3] |= static_cast<std::uint64_t>(exp) << ((pos & 7) * 8);
    }
    mpz_divexact(scale.get_mpz_t(), den.get_mpz_t(), c.raw().get_den().get_mpz_t());
    num = c.raw().get_num() * scale;
    out.emplace_back(key, num);
  }
  return true;
}

MultiPoly dense_unpack(std::unordered_map<Pack3, mpz_class, Pack3Hash>& acc,
                       const std::vector<char32_t>& var_codes, const mpz_class& den) {
  MultiPoly::Terms raw;
  raw.reserve(acc.size());
  for (auto& [key, num] : acc) {
    if (sgn(num) == 0) continue;
    Monomial m;
    for (std::size_t pos = 0; pos < var_codes.size(); ++pos) {
      int exp = static_cast<int>((key.w[pos >> 3] >> ((pos & 7) * 8)) & 0xff);
      if (exp) m.code.push_back((var_codes[pos] << kExpBits) | static_cast<char32_t>(exp));
    }
    mpq_class q(num, den);
    q.canonicalize();
    raw.emplace_back(std::move(m), Rat(q));
  }
  return MultiPoly::from_raw(std::move(raw));
}

}  // namespace

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly r;
  if (a.is_zero() || b.is_zero()) return r;
  const MultiPoly& small = a.t_.size() <= b.t_.size() ? a : b;
  const MultiPoly& big = a.t_.size() <= b.t_.size() ? b : a;

  // collect the union of variable codes
  std::vector<char32_t> var_codes;
  for (const MultiPoly* p : {&a, &b})
    for (auto& [m, c] : p->terms())
      for (char32_t fc : m.code) {
        char32_t var = fc >> kExpBits;
        auto it = std::lower_bound(var_codes.begin(), var_codes.end(), var);
        if (it == var_codes.end() || *it != var) var_codes.insert(it, var);
      }

  if (var_codes.size() <= 24) {
    std::vector<std::pair<Pack3, mpz_class>> da, db;
    mpz_class dena, denb;
    if (dense_convert(small.t_, var_codes, da, dena) &&
        dense_convert(big.t_, var_codes, db, denb)) {
      std::unordered_map<Pack3, mpz_class, Pack3Hash> acc;
      acc.reserve(db.size() * 2);
      for (auto& [ka, na] : da)
        for (auto& [kb, nb] : db) {
          Pack3 k{{ka.w[0] + kb.w[0], ka.w[1] + kb.w[1], ka.w[2] + kb.w[2]}};
          mpz_class& slot = acc[k];
          mpz_addmul(slot.get_mpz_t(), na.get_mpz_t(), nb.get_mpz_t());
        }
      return dense_unpack(acc, var_codes, mpz_class(dena * denb));
    }
  }

  std::unordered_map<Monomial, Rat, MonoHash> acc;
  acc.reserve(big.t_.size() * 2);
  for (auto& [ma, ca] : small.t_)
    for (auto& [mb, cb] : big.t_) acc[mono_mul(ma, mb)] += ca * cb;
  MultiPoly::Terms raw;
  raw.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (c.is_zero()) continue;
    raw.emplace_back(m, std::move(c));
  }
  return MultiPoly::from_raw(std::move(raw));
}

MultiPoly MultiPoly::derivative(TimeVar v, int order) const {
  MultiPoly cur = *this;
  for (int k = 0; k < order; ++k) {
    Terms raw;
    raw.reserve(cur.t_.size());
    char32_t var_code =
        (static_cast<char32_t>(v.n) << 6) | static_cast<char32_t>(v.gamma + 32);
    for (auto& [m, c] : cur.t_) {
      for (std::size_t i = 0; i < m.code.size(); ++i) {
        if ((m.code[i] >> kExpBits) != var_code) continue;
        int e = static_cast<int>(m.code[i] & kExpMask);
        Monomial mm = m;
        if (e == 1)
          mm.code.erase(mm.code.begin() + i);
        else
          mm.code[i] = (var_code << kExpBits) | static_cast<char32_t>(e - 1);
        raw.emplace_back(std::move(mm), c * Rat(e));
        break;
      }
    }
    cur = from_raw(std::move(raw));
  }
  return cur;
}

Rat MultiPoly::eval(const TimePoint& pt) const {
  Rat s(0);
  for (auto& [m, c] : t_) {
    Rat term = c;
    bool dead = false;
    for (auto [v, e] : m.factors()) {
      auto it = pt.find(v);
      if (it == pt.end() || it->second.is_zero()) {
        dead = true;
        break;
      }
      for (int k = 0; k < e; ++k) term *= it->second;
    }
    if (!dead) s += term;
  }
  return s;
}

MultiPoly MultiPoly::relabeled(const std::function<TimeVar(TimeVar)>& image) const {
  Terms raw;
  raw.reserve(t_.size());
  for (auto& [m, c] : t_) {
    std::vector<std::pair<TimeVar, int>> f = m.factors();
    for (auto& [v, e] : f) v = image(v);
    raw.emplace_back(Monomial::from_factors(std::move(f)), c);
  }
  return from_raw(std::move(raw));
}

MultiPoly MultiPoly::sign_flipped() const {
  MultiPoly r;
  r.t_.reserve(t_.size());
  for (auto& [m, c] : t_) r.t_.emplace_back(m, m.total_degree() % 2 ? -c : c);
  return r;
}

long MultiPoly::total_degree() const {
  long d = -1;
  for (auto& [m, c] : t_) d = std::max(d, m.total_degree());
  return d;
}

std::optional<long> MultiPoly::homogeneous_degree(const BTHSignature& sig) const {
  std::optional<long> deg;
  for (auto& [m, c] : t_) {
    long d = 0;
    for (auto [v, e] : m.factors()) d += e * graded_degree(sig, v);
    if (!deg)
      deg = d;
    else if (*deg != d)
      return std::nullopt;
  }
  return deg;
}

std::vector<TimeVar> MultiPoly::variables() const {
  std::vector<TimeVar> vs;
  for (auto& [m, c] : t_)
    for (auto [v, e] : m.factors())
      if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
  std::sort(vs.begin(), vs.end());
  return vs;
}

std::string MultiPoly::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [m, c] : t_) {
    if (!first) os << " + ";
    first = false;
    os << c.str();
    if (!m.empty()) {
      os << " *";
      for (auto [v, e] : m.factors()) {
        os << " " << to_string(v);
        if (e > 1) os << "^" << e;
      }
    }
  }
  return os.str();
}

MultiPoly poly_det(const std::vector<std::vector<MultiPoly>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return MultiPoly::one();
  for (auto& row : m)
    if (row.size() != n) throw std::invalid_argument("poly_det: matrix not square");
  std::map<std::vector<int>, MultiPoly> memo;
  std::function<MultiPoly(std::size_t, const std::vector<int>&)> go =
      [&](std::size_t r, const std::vector<int>& cols) -> MultiPoly {
    if (r == n) return MultiPoly::one();
    auto it = memo.find(cols);
    if (it != memo.end()) return it->second;
    MultiPoly acc;
    int sign = 1;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (!m[r][cols[i]].is_zero()) {
        std::vector<int> rest;
        rest.reserve(cols.size() - 1);
        for (std::size_t j = 0; j < cols.size(); ++j)
          if (j != i) rest.push_back(cols[j]);
        MultiPoly sub = go(r + 1, rest);
        MultiPoly prod = m[r][cols[i]] * sub;
        acc += sign > 0 ? prod : -prod;
      }
      sign = -sign;
    }
    memo.emplace(cols, acc);
    return acc;
  };
  std::vector<int> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<int>(i);
  return go(0, all);
}

}  // namespace bth
