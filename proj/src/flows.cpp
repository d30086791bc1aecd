#include "bth/flows.hpp"

#include <random>
#include <sstream>

namespace bth {

namespace {
FieldD sh(const FieldD& f, int d) { return shifted(f, d); }

std::map<int, double> one_plus_shift(int d) { return {{0, 1.0}, {d, 1.0}}; }
}  // namespace

LaxRhs lax_rhs_generic(const BandOperator<double>& L, FlowSpec flow, const BTHSignature& sig,
                       int depth) {
  check_flow(sig, flow);
  const int slot = slot_of(sig, TimeVar{flow.gamma, flow.n});
  BandOperator<double> c;
  if (flow.gamma >= 1) {
    // integer powers of L need no root
    BandOperator<double> B = slot % sig.N == 0 ? op_pow(L, slot / sig.N)
                                               : b_operator(L, flow, sig, depth);
    c = commutator(plus_part(B), L);
  } else {
    BandOperator<double> B = slot % sig.M == 0 ? op_pow(L, slot / sig.M)
                                               : b_operator(L, flow, sig, depth);
    c = commutator(minus_part(B), L).scaled(-1.0);
  }
  LaxRhs out;
  out.offband_leak =
      offset_sup_norm(c, [&](int d) { return d < -sig.M || d > sig.N; });
  out.rhs = band_part(c, -sig.M, sig.N);
  return out;
}

BandOperator<double> random_lax(const BTHSignature& sig, int P, std::uint64_t seed,
                                double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  BandOperator<double> L(P);
  L.set_constant(sig.N, 1.0);
  for (int d = sig.N - 1; d > -sig.M; --d) {
    FieldD f(P);
    for (int x = 0; x < P; ++x) f[x] = dist(rng);
    L.set_coeff(d, f);
  }
  FieldD low(P);
  for (int x = 0; x < P; ++x) low[x] = 1.0 + std::abs(dist(rng));  // positive for the lower root
  L.set_coeff(-sig.M, low);
  return L;
}

// ---- (2,1) ---------------------------------------------------------------

Bm21Fields bm21_t10(const Bm21Fields& s) {
  Bm21Fields d;
  d.c = sh(s.a, 2) - s.a;
  d.b = s.c.cwiseProduct(sh(s.a, 1)) - s.a.cwiseProduct(sh(s.c, -1));
  d.a = s.a.cwiseProduct(s.b - sh(s.b, -1));
  return d;
}

Bm21Fields bm21_t20(const Bm21Fields& s) {
  // H^{-1} c with H = (1+Lambda)/(Lambda-1): w = (1-Lambda)(1+Lambda)^{-1} c
  FieldD z = nonlocal_solve(one_plus_shift(1), s.c);
  Bm21Fields d;
  d.c = sh(s.b, 1) - s.b + s.c.cwiseProduct(z - sh(z, 1));
  d.b = sh(s.a, 1) - s.a;
  d.a = s.a.cwiseProduct(z - sh(z, -1));
  return d;
}

BandOperator<double> bm21_to_lax(const Bm21Fields& s) {
  BandOperator<double> L(static_cast<int>(s.a.size()));
  L.set_constant(2, 1.0);
  L.set_coeff(1, s.c);
  L.set_coeff(0, s.b);
  L.set_coeff(-1, s.a);
  return L;
}

// ---- (2,2) ---------------------------------------------------------------

Bth22Fields bth22_rhs(Bth22Flow flow, const Bth22Fields& s) {
  Bth22Fields d;
  const int P = static_cast<int>(s.u1.size());
  switch (flow) {
    case Bth22Flow::T20: {
      const FieldD& a0 = s.aux;
      d.u1 = sh(s.u0, 1) - s.u0 + s.u1.cwiseProduct(a0 - sh(a0, 1));
      d.u0 = sh(s.um1, 1) - s.um1;
      d.um1 = sh(s.um2, 1) - s.um2 + s.um1.cwiseProduct(a0 - sh(a0, -1));
      d.um2 = s.um2.cwiseProduct(a0 - sh(a0, -2));
      // (1 + Lambda) da0 = du1
      d.aux = nonlocal_solve(one_plus_shift(1), d.u1);
      break;
    }
    case Bth22Flow::T10: {
      d.u1 = sh(s.um1, 2) - s.um1;
      d.u0 = sh(s.um2, 2) - s.um2 + s.u1.cwiseProduct(sh(s.um1, 1)) -
             s.um1.cwiseProduct(sh(s.u1, -1));
      d.um1 = s.u1.cwiseProduct(sh(s.um2, 1)) - s.um2.cwiseProduct(sh(s.u1, -2)) +
              s.um1.cwiseProduct(s.u0 - sh(s.u0, -1));
      d.um2 = s.um2.cwiseProduct(s.u0 - sh(s.u0, -2));
      d.aux = FieldD::Zero(P);
      break;
    }
    case Bth22Flow::Tm10: {
      const FieldD& ap = s.aux;  // a'_{-1}
      d.u1 = sh(ap, 2) - ap;
      d.u0 = s.u1.cwiseProduct(sh(ap, 1)) - ap.cwiseProduct(sh(s.u1, -1));
      d.um1 = ap.cwiseProduct(s.u0 - sh(s.u0, -1));
      d.um2 = s.um1.cwiseProduct(sh(ap, -1)) - ap.cwiseProduct(sh(s.um1, -1));
      // The update keeping a'(x) a'(x-1) = u_{-2} along the flow:
      // (1 + Lambda^{-1})(da'/a') = (1 - Lambda^{-1})(u_{-1}/a').
      FieldD ratio = s.um1.cwiseQuotient(ap);
      FieldD w = nonlocal_solve(one_plus_shift(-1), FieldD(ratio - sh(ratio, -1)));
      d.aux = ap.cwiseProduct(w);
      break;
    }
  }
  return d;
}

FieldD bth22_init_aux(Bth22Flow flow, const Bth22Fields& s) {
  const int P = static_cast<int>(s.u1.size());
  switch (flow) {
    case Bth22Flow::T20:
      return nonlocal_solve(one_plus_shift(1), s.u1);
    case Bth22Flow::Tm10: {
      for (int x = 0; x < P; ++x)
        if (!(s.um2[x] > 0.0))
          throw std::domain_error("bth22_init_aux: u_{-2} must be positive");
      FieldD logu = s.um2.array().log();
      FieldD lb = nonlocal_solve(one_plus_shift(-1), logu);
      return lb.array().exp();
    }
    case Bth22Flow::T10:
      return FieldD::Zero(P);
  }
  return FieldD::Zero(P);
}

double bth22_aux_defect(Bth22Flow flow, const Bth22Fields& s) {
  switch (flow) {
    case Bth22Flow::T20:
      return (s.aux + sh(s.aux, 1) - s.u1).cwiseAbs().maxCoeff();
    case Bth22Flow::Tm10:
      return (s.aux.cwiseProduct(sh(s.aux, -1)) - s.um2).cwiseAbs().maxCoeff();
    case Bth22Flow::T10:
      return 0.0;
  }
  return 0.0;
}

BandOperator<double> bth22_to_lax(const Bth22Fields& s) {
  BandOperator<double> L(static_cast<int>(s.u1.size()));
  L.set_constant(2, 1.0);
  L.set_coeff(1, s.u1);
  L.set_coeff(0, s.u0);
  L.set_coeff(-1, s.um1);
  L.set_coeff(-2, s.um2);
  return L;
}

// ---- (1,2) ---------------------------------------------------------------

Bth12Fields bth12_rhs(Bth12Flow flow, const Bth12Fields& s) {
  Bth12Fields d;
  const int P = static_cast<int>(s.u0.size());
  switch (flow) {
    case Bth12Flow::T10:
      d.u0 = sh(s.um1, 1) - s.um1;
      d.um1 = sh(s.um2, 1) - s.um2 + s.um1.cwiseProduct(s.u0 - sh(s.u0, -1));
      d.um2 = s.um2.cwiseProduct(s.u0 - sh(s.u0, -2));
      break;
    case Bth12Flow::Tm10: {
      for (int x = 0; x < P; ++x)
        if (!(s.um2[x] > 0.0)) throw std::domain_error("bth12_rhs: u_{-2} must be positive");
      FieldD logu = s.um2.array().log();
      FieldD phi = nonlocal_solve(one_plus_shift(-1), logu).array().exp();
      d.u0 = sh(phi, 1) - phi;
      d.um1 = phi.cwiseProduct(s.u0 - sh(s.u0, -1));
      d.um2 = s.um1.cwiseProduct(sh(phi, -1)) - phi.cwiseProduct(sh(s.um1, -1));
      break;
    }
  }
  return d;
}

BandOperator<double> bth12_to_lax(const Bth12Fields& s) {
  BandOperator<double> L(static_cast<int>(s.u0.size()));
  L.set_constant(1, 1.0);
  L.set_coeff(0, s.u0);
  L.set_coeff(-1, s.um1);
  L.set_coeff(-2, s.um2);
  return L;
}

// ---- (1,1) ---------------------------------------------------------------

TodaFields toda_t10(const TodaFields& s) {
  TodaFields d;
  d.a = s.a.cwiseProduct(s.b - sh(s.b, -1));
  d.b = sh(s.a, 1) - s.a;
  return d;
}

BandOperator<double> toda_to_lax(const TodaFields& s) {
  BandOperator<double> L(static_cast<int>(s.a.size()));
  L.set_constant(1, 1.0);
  L.set_coeff(0, s.b);
  L.set_coeff(-1, s.a);
  return L;
}

// ---- integration ----------------------------------------------------------

Trajectory integrate_rk4(const std::function<Vec(const Vec&)>& rhs, Vec y0, double dt, int steps,
                         const std::vector<Monitor>& monitors) {
  if (dt <= 0) throw std::invalid_argument("integrate_rk4: dt must be positive");
  Trajectory tr;
  std::vector<double> base;
  for (const auto& m : monitors) {
    tr.monitor_names.push_back(m.name);
    base.push_back(m.value(y0));
  }
  Vec y = std::move(y0);
  for (int k = 0; k <= steps; ++k) {
    tr.times.push_back(k * dt);
    tr.states.push_back(y);
    std::vector<double> row;
    for (std::size_t i = 0; i < monitors.size(); ++i) {
      double v = monitors[i].value(y);
      row.push_back(v);
      if (std::abs(v - base[i]) > monitors[i].tol) {
        std::ostringstream os;
        os << "integrate_rk4: monitor '" << monitors[i].name << "' breached at t=" << k * dt
           << " (|" << v << " - " << base[i] << "| > " << monitors[i].tol << ")";
        throw std::runtime_error(os.str());
      }
    }
    tr.monitor_values.push_back(std::move(row));
    if (k == steps) break;
    Vec k1 = rhs(y);
    Vec k2 = rhs(y + 0.5 * dt * k1);
    Vec k3 = rhs(y + 0.5 * dt * k2);
    Vec k4 = rhs(y + dt * k3);
    y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return tr;
}

namespace {
Vec endpoint(const std::function<Vec(const Vec&)>& rhs, Vec y, double t_final, double dt) {
  int steps = static_cast<int>(std::llround(t_final / dt));
  for (int k = 0; k < steps; ++k) {
    Vec k1 = rhs(y);
    Vec k2 = rhs(y + 0.5 * dt * k1);
    Vec k3 = rhs(y + 0.5 * dt * k2);
    Vec k4 = rhs(y + dt * k3);
    y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}
}  // namespace

double richardson_ratio(const std::function<Vec(const Vec&)>& rhs, const Vec& y0, double t_final,
                        double dt) {
  Vec a = endpoint(rhs, y0, t_final, dt);
  Vec b = endpoint(rhs, y0, t_final, dt / 2);
  Vec c = endpoint(rhs, y0, t_final, dt / 4);
  return (a - b).norm() / (b - c).norm();
}

double commutativity_check(const BandOperator<double>& L, FlowSpec flow_a, FlowSpec flow_b,
                           const BTHSignature& sig, int depth, double h) {
  auto F = [&](FlowSpec f, const BandOperator<double>& X) {
    return lax_rhs_generic(X, f, sig, depth).rhs;
  };
  auto dF = [&](FlowSpec f, FlowSpec g) {
    // directional derivative of F_f along F_g(L)
    BandOperator<double> dir = F(g, L);
    BandOperator<double> up = F(f, L + dir.scaled(h));
    BandOperator<double> dn = F(f, L - dir.scaled(h));
    return (up - dn).scaled(1.0 / (2.0 * h));
  };
  BandOperator<double> mixed_ab = dF(flow_a, flow_b);
  BandOperator<double> mixed_ba = dF(flow_b, flow_a);
  return sup_norm(mixed_ab - mixed_ba);
}

Vec pack_band(const BandOperator<double>& L, const BTHSignature& sig) {
  const int P = L.sites();
  Vec y((sig.N + sig.M + 1) * P);
  int k = 0;
  for (int d = -sig.M; d <= sig.N; ++d) {
    FieldD c = L.coeff(d);
    for (int x = 0; x < P; ++x) y[k++] = c[x];
  }
  return y;
}

BandOperator<double> unpack_band(const Vec& y, const BTHSignature& sig, int P, double eps) {
  BandOperator<double> L(P, eps);
  int k = 0;
  for (int d = -sig.M; d <= sig.N; ++d) {
    FieldD c(P);
    for (int x = 0; x < P; ++x) c[x] = y[k++];
    L.set_coeff(d, c);
  }
  return L;
}

}  // namespace bth
