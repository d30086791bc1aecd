#include "bth/moment.hpp"

#include <random>
#include <stdexcept>

namespace bth {

ClassKey class_rep(const BTHSignature& sig, int i, int j) {
  if (i < 1 || j < 1) throw std::invalid_argument("class_rep: indices are 1-based");
  int t = (i - 1) / sig.N;
  return ClassKey{i - t * sig.N, j + t * sig.M};
}

bool class_inside_window(const BTHSignature& sig, ClassKey rep, int T) {
  int i = rep.i, j = rep.j;
  while (j >= 1) {
    if (i > T || j > T) return false;
    i += sig.N;
    j -= sig.M;
  }
  return true;
}

MomentMatrix::MomentMatrix(const BTHSignature& sig, int T) : sig_(sig), T_(T) {
  if (T < 1) throw std::invalid_argument("MomentMatrix: T must be >= 1");
  e_.resize(static_cast<std::size_t>(T) * T);
}

MultiPoly& MomentMatrix::entry(int i, int j) {
  return e_.at(static_cast<std::size_t>(i - 1) * T_ + (j - 1));
}

const MultiPoly& MomentMatrix::entry(int i, int j) const {
  return e_.at(static_cast<std::size_t>(i - 1) * T_ + (j - 1));
}

bool MomentMatrix::staircase_ok() const {
  for (int i = 1; i + sig_.N <= T_; ++i)
    for (int j = 1; j + sig_.M <= T_; ++j)
      if (!(entry(i + sig_.N, j) == entry(i, j + sig_.M))) return false;
  return true;
}

MomentMatrix MomentMatrix::evaluated(const TimePoint& pt) const {
  MomentMatrix r(sig_, T_);
  for (int i = 1; i <= T_; ++i)
    for (int j = 1; j <= T_; ++j) r.entry(i, j) = MultiPoly::constant(entry(i, j).eval(pt));
  return r;
}

MomentMatrix seed_moment_matrix(const std::vector<std::pair<ClassKey, Rat>>& seed,
                                const BTHSignature& sig, int T) {
  std::map<ClassKey, Rat> values;
  for (auto& [key, val] : seed) {
    ClassKey rep = class_rep(sig, key.i, key.j);
    auto [it, inserted] = values.emplace(rep, val);
    if (!inserted) throw std::invalid_argument("seed_moment_matrix: class seeded twice");
  }
  MomentMatrix m(sig, T);
  for (int i = 1; i <= T; ++i)
    for (int j = 1; j <= T; ++j) {
      auto it = values.find(class_rep(sig, i, j));
      if (it != values.end()) m.entry(i, j) = MultiPoly::constant(it->second);
    }
  return m;
}

MomentMatrix seed_random_moment(const BTHSignature& sig, int T, std::uint64_t rng_seed,
                                bool hirota_safe, int lo, int hi) {
  std::mt19937_64 rng(rng_seed);
  std::uniform_int_distribution<int> dist(lo, hi);
  std::map<ClassKey, Rat> values;
  MomentMatrix m(sig, T);
  for (int i = 1; i <= T; ++i)
    for (int j = 1; j <= T; ++j) {
      ClassKey rep = class_rep(sig, i, j);
      auto it = values.find(rep);
      if (it == values.end()) {
        Rat v = hirota_safe && !class_inside_window(sig, rep, T) ? Rat(0) : Rat(dist(rng));
        it = values.emplace(rep, v).first;
      }
      m.entry(i, j) = MultiPoly::constant(it->second);
    }
  return m;
}

MomentMatrix evolve_moment_matrix(const MomentMatrix& m0, int slots_left, int slots_right) {
  const BTHSignature& sig = m0.signature();
  const int T = m0.size();
  if (slots_left < 0) slots_left = sig.N + 1;
  if (slots_right < 0) slots_right = sig.M + 1;
  VarChain cl = tau_chain(sig, Side::L, slots_left);
  VarChain cr = tau_chain(sig, Side::R, slots_right);
  std::vector<MultiPoly> pl(T), pr(T);
  for (int d = 0; d < T; ++d) {
    pl[d] = elementary_schur(d, cl);
    pr[d] = elementary_schur(d, cr);
  }
  MomentMatrix m(sig, T);
  for (int i = 1; i <= T; ++i)
    for (int j = 1; j <= T; ++j) {
      MultiPoly acc;
      for (int k = i; k <= T; ++k)
        for (int l = j; l <= T; ++l) {
          const MultiPoly& seed = m0.entry(k, l);
          if (seed.is_zero()) continue;
          acc += (pl[k - i] * pr[l - j]) * seed;
        }
      m.entry(i, j) = std::move(acc);
    }
  return m;
}

}  // namespace bth
