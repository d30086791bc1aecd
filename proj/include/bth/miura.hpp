#ifndef BTH_MIURA_HPP
#define BTH_MIURA_HPP

#include "bth/flows.hpp"

namespace bth {

// Gauge field phi(x) * growth^x (growth absorbs the geometric mean that a
// strictly periodic gauge cannot carry; conjugation stays well defined on
// periodic coefficients and preserves traces).
struct GaugeField {
  FieldD phi;
  double growth = 1.0;
};

// coefficient transform c_d(x) -> phi(x)^{-1} c_d(x) phi(x+d) * growth^d
BandOperator<double> gauge_conjugate(const BandOperator<double>& L, const GaugeField& g);

// Psi with gauge_conjugate(L, Psi) having coefficient 1 at offset -M.
// log_form: Psi = exp((1-Lambda^{-M})^{-1} log u_{-M}) (the normalizing
// variant); paper-literal exponent without the log is available for
// comparison and does not normalize.
GaugeField psi_for_signature(const BandOperator<double>& L, const BTHSignature& sig,
                             bool log_form = true);

// (Psi^{-1} L Psi)^dag: an (M,N)-signature Lax operator
BandOperator<double> nm_to_mn(const BandOperator<double>& L, const BTHSignature& sig);

// field-level (1,2) <-> (2,1) equivalence through the worked gauge pair:
// v_j(x) = u_{-j}(x + j eps) maps bth12 t_{1,0} / t_{-1,0} onto the hatted
// (2,1) systems; residual is the max pointwise RHS discrepancy.
struct MiuraReport {
  double t10_residual = 0.0;   // (1,2) t_{1,0}  vs hatted (2,1) t_{1,0}
  double tm10_residual = 0.0;  // (1,2) t_{-1,0} vs hatted (2,1) t_{2,0}
  double gauge_min = 0.0, gauge_max = 0.0;  // range of the u_{-2} data
};

// hatted-(2,1) right-hand sides for v = (v0, v1, v2), lowest coefficient 1
struct HattedBm21Fields {
  FieldD v0, v1, v2;
};
HattedBm21Fields hatted_bm21_t10(const HattedBm21Fields& s);
HattedBm21Fields hatted_bm21_t20(const HattedBm21Fields& s);

MiuraReport equivalence_residual(const Bth12Fields& fields, bool skip_dagger = false);
MiuraReport equivalence_residual(int P, std::uint64_t seed, bool skip_dagger = false);

}  // namespace bth

#endif
