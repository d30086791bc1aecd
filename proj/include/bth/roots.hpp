#ifndef BTH_ROOTS_HPP
#define BTH_ROOTS_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>

#include "bth/lattice.hpp"
#include "bth/timevar.hpp"

namespace bth {

struct FlowSpec {
  int gamma = 1;
  int n = 0;
};

inline void check_flow(const BTHSignature& sig, FlowSpec f) {
  if (f.n < 0 || f.gamma > sig.N || f.gamma < -sig.M + 1)
    throw std::invalid_argument("FlowSpec out of range for signature");
}

namespace detail {
template <class S>
Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> circulant_dense(const std::map<int, S>& p,
                                                                 int P) {
  Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> a =
      Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>::Constant(P, P, S(0));
  for (auto& [d, v] : p)
    for (int x = 0; x < P; ++x) a(x, ((x + d) % P + P) % P) += v;
  return a;
}

inline std::string singular_symbol_message(const std::map<int, double>& p, int P) {
  for (int k = 0; k < P; ++k) {
    std::complex<double> s(0.0, 0.0);
    for (auto& [d, v] : p) s += v * std::polar(1.0, 2.0 * M_PI * d * k / P);
    if (std::abs(s) < 1e-9)
      return "nonlocal_solve: circulant symbol vanishes at Lambda-eigenvalue exp(2*pi*i*" +
             std::to_string(k) + "/" + std::to_string(P) + ")";
  }
  return "nonlocal_solve: singular circulant system";
}
}  // namespace detail

// solve p(Lambda) g = f for a constant-coefficient Laurent polynomial p on
// the periodic lattice; throws naming the eigenvalue obstruction when the
// circulant symbol vanishes at some P-th root of unity
template <class S>
Field<S> nonlocal_solve(const std::map<int, S>& p, const Field<S>& f) {
  const int P = static_cast<int>(f.size());
  auto a = detail::circulant_dense(p, P);
  Eigen::FullPivLU<decltype(a)> lu(a);
  if (!lu.isInvertible()) {
    if constexpr (std::is_same_v<S, double>)
      throw std::domain_error(detail::singular_symbol_message(p, P));
    else
      throw std::domain_error("nonlocal_solve: singular circulant system (exact mode)");
  }
  return lu.solve(f);
}

// L^{1/N} = Lambda + sum_{k<=0} a_k Lambda^k, fixed by the unit leading term;
// coefficients found order by order, one kernel solve per step. After
// `depth` steps R^N matches L on every offset >= N-1-depth.
template <class S>
BandOperator<S> nth_root_upper(const BandOperator<S>& L, const BTHSignature& sig, int depth) {
  const int P = L.sites();
  const int N = sig.N;
  {
    Field<S> top = L.coeff(N);
    for (int x = 0; x < P; ++x)
      if (!(top[x] == S(1)))
        throw std::invalid_argument("nth_root_upper: leading coefficient must be 1");
  }
  std::map<int, S> kernel;
  for (int i = 0; i < N; ++i) kernel[i] = S(1);
  BandOperator<S> R = BandOperator<S>::shift(P, 1, L.eps());
  for (int j = 0; j <= depth; ++j) {
    BandOperator<S> E = L - op_pow(R, N);
    Field<S> rhs = E.coeff(N - 1 - j);
    R.add_coeff(-j, nonlocal_solve(kernel, rhs));
  }
  return R;
}

// L^{1/M} = b_{-1} Lambda^{-1} + b_0 + ...; the leading coefficient comes
// from exp((sum_{i<M} Lambda^{-i})^{-1} log u_{-M}); later coefficients
// solve dense variable-coefficient linear systems built by basis probing.
inline BandOperator<double> mth_root_lower(const BandOperator<double>& L,
                                           const BTHSignature& sig, int depth) {
  const int P = L.sites();
  const int M = sig.M;
  Field<double> u = L.coeff(-M);
  for (int x = 0; x < P; ++x)
    if (!(u[x] > 0.0))
      throw std::domain_error("mth_root_lower: u_{-M} must be strictly positive (site " +
                              std::to_string(x) + ")");
  std::map<int, double> kernel;
  for (int i = 0; i < M; ++i) kernel[-i] = 1.0;
  Field<double> logu = u.array().log();
  Field<double> logb = nonlocal_solve(kernel, logu);
  BandOperator<double> Sroot(P, L.eps());
  Sroot.set_coeff(-1, Field<double>(logb.array().exp()));
  for (int j = 0; j <= depth; ++j) {
    BandOperator<double> E = L - op_pow(Sroot, M);
    const int target = -M + 1 + j;
    Field<double> rhs = E.coeff(target);
    Eigen::MatrixXd K(P, P);
    BandOperator<double> base = op_pow(Sroot, M);
    for (int x = 0; x < P; ++x) {
      BandOperator<double> probe = Sroot;
      Field<double> e = Field<double>::Constant(P, 0.0);
      e[x] = 1.0;
      probe.add_coeff(j, e);
      K.col(x) = (op_pow(probe, M) - base).coeff(target);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
    if (!lu.isInvertible())
      throw std::domain_error("mth_root_lower: singular linear step at offset " +
                              std::to_string(target));
    Sroot.add_coeff(j, lu.solve(rhs));
  }
  return Sroot;
}

// B_{gamma,n}: integer powers of the fractional roots. The exponent slot
// is N(n+1)-(gamma-1) resp. M(n+1)+gamma, so B = root^slot.
inline BandOperator<double> b_operator(const BandOperator<double>& L, FlowSpec flow,
                                       const BTHSignature& sig, int depth) {
  check_flow(sig, flow);
  const int slot = slot_of(sig, TimeVar{flow.gamma, flow.n});
  if (flow.gamma >= 1) return op_pow(nth_root_upper(L, sig, depth), slot);
  return op_pow(mth_root_lower(L, sig, depth), slot);
}

}  // namespace bth

#endif
