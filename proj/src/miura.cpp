#include "bth/miura.hpp"

#include <random>

namespace bth {

namespace {
FieldD sh(const FieldD& f, int d) { return shifted(f, d); }
}  // namespace

BandOperator<double> gauge_conjugate(const BandOperator<double>& L, const GaugeField& g) {
  const int P = L.sites();
  if (static_cast<int>(g.phi.size()) != P)
    throw std::invalid_argument("gauge_conjugate: field size mismatch");
  for (int x = 0; x < P; ++x)
    if (!(g.phi[x] > 0.0)) throw std::domain_error("gauge_conjugate: phi must be positive");
  BandOperator<double> out(P, L.eps());
  for (auto& [d, c] : L.diagonals()) {
    FieldD t = c.cwiseProduct(sh(g.phi, d)).cwiseQuotient(g.phi) * std::pow(g.growth, d);
    out.set_coeff(d, t);
  }
  return out;
}

GaugeField psi_for_signature(const BandOperator<double>& L, const BTHSignature& sig,
                             bool log_form) {
  const int P = L.sites();
  const int M = sig.M;
  if (std::gcd(M, P) != 1)
    throw std::domain_error("psi_for_signature: (1-Lambda^{-M}) needs gcd(M,P)=1");
  FieldD u = L.coeff(-M);
  for (int x = 0; x < P; ++x)
    if (!(u[x] > 0.0)) throw std::domain_error("psi_for_signature: u_{-M} must be positive");
  FieldD rhs = log_form ? FieldD(u.array().log()) : u;
  double mean = rhs.mean();
  FieldD rhs0 = rhs.array() - mean;
  // (1 - Lambda^{-M}) is singular exactly on constants; solve on the
  // zero-mean complement (minimal-norm solution) and put the mean into the
  // growth exponent
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(P, P);
  for (int x = 0; x < P; ++x) {
    a(x, x) += 1.0;
    a(x, ((x - M) % P + P) % P) -= 1.0;
  }
  Eigen::VectorXd psi = a.completeOrthogonalDecomposition().solve(rhs0);
  psi.array() -= psi.mean();
  GaugeField g;
  g.phi = psi.array().exp();
  g.growth = std::exp(mean / M);
  return g;
}

BandOperator<double> nm_to_mn(const BandOperator<double>& L, const BTHSignature& sig) {
  GaugeField psi = psi_for_signature(L, sig);
  return dagger(gauge_conjugate(L, psi));
}

HattedBm21Fields hatted_bm21_t10(const HattedBm21Fields& s) {
  HattedBm21Fields d;
  d.v0 = s.v1 - sh(s.v1, -1);
  d.v1 = s.v2 - sh(s.v2, -1) + s.v1.cwiseProduct(sh(s.v0, 1) - s.v0);
  d.v2 = s.v2.cwiseProduct(sh(s.v0, 2) - s.v0);
  return d;
}

HattedBm21Fields hatted_bm21_t20(const HattedBm21Fields& s) {
  const int P = static_cast<int>(s.v0.size());
  for (int x = 0; x < P; ++x)
    if (!(s.v2[x] > 0.0)) throw std::domain_error("hatted_bm21_t20: v2 must be positive");
  FieldD logv = s.v2.array().log();
  FieldD psi = nonlocal_solve<double>({{0, 1.0}, {1, 1.0}}, logv).array().exp();
  HattedBm21Fields d;
  d.v0 = psi - sh(psi, -1);
  d.v1 = psi.cwiseProduct(sh(s.v0, 1) - s.v0);
  d.v2 = sh(s.v1, 1).cwiseProduct(psi) - sh(psi, 1).cwiseProduct(s.v1);
  return d;
}

MiuraReport equivalence_residual(const Bth12Fields& fields, bool skip_dagger) {
  auto map_field = [&](const FieldD& f, int j) { return skip_dagger ? f : sh(f, j); };
  HattedBm21Fields v;
  v.v0 = map_field(fields.u0, 0);
  v.v1 = map_field(fields.um1, 1);
  v.v2 = map_field(fields.um2, 2);

  MiuraReport rep;
  rep.gauge_min = fields.um2.minCoeff();
  rep.gauge_max = fields.um2.maxCoeff();

  {
    Bth12Fields du = bth12_rhs(Bth12Flow::T10, fields);
    HattedBm21Fields dv = hatted_bm21_t10(v);
    double r = 0.0;
    r = std::max(r, (dv.v0 - map_field(du.u0, 0)).cwiseAbs().maxCoeff());
    r = std::max(r, (dv.v1 - map_field(du.um1, 1)).cwiseAbs().maxCoeff());
    r = std::max(r, (dv.v2 - map_field(du.um2, 2)).cwiseAbs().maxCoeff());
    rep.t10_residual = r;
  }
  {
    Bth12Fields du = bth12_rhs(Bth12Flow::Tm10, fields);
    HattedBm21Fields dv = hatted_bm21_t20(v);
    double r = 0.0;
    r = std::max(r, (dv.v0 - map_field(du.u0, 0)).cwiseAbs().maxCoeff());
    r = std::max(r, (dv.v1 - map_field(du.um1, 1)).cwiseAbs().maxCoeff());
    r = std::max(r, (dv.v2 - map_field(du.um2, 2)).cwiseAbs().maxCoeff());
    rep.tm10_residual = r;
  }
  return rep;
}

MiuraReport equivalence_residual(int P, std::uint64_t seed, bool skip_dagger) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  Bth12Fields f;
  f.u0 = FieldD(P);
  f.um1 = FieldD(P);
  f.um2 = FieldD(P);
  for (int x = 0; x < P; ++x) {
    f.u0[x] = dist(rng);
    f.um1[x] = dist(rng);
    f.um2[x] = 1.0 + std::abs(dist(rng));
  }
  return equivalence_residual(f, skip_dagger);
}

}  // namespace bth
