#ifndef BTH_FLOWS_HPP
#define BTH_FLOWS_HPP

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "bth/roots.hpp"

namespace bth {

using Vec = Eigen::VectorXd;

// ---- generic Lax right-hand side ---------------------------------------

struct LaxRhs {
  BandOperator<double> rhs;  // commutator projected onto the (N,M) band
  double offband_leak = 0.0; // sup of the discarded off-band coefficients
};

// d L / d t_{gamma,n} = [(B)_+, L] (gamma >= 1) or [-(B)_-, L] (gamma <= 0)
LaxRhs lax_rhs_generic(const BandOperator<double>& L, FlowSpec flow, const BTHSignature& sig,
                       int depth);

// random band operator with unit leading term (and positive lowest
// coefficient, as the lower root requires)
BandOperator<double> random_lax(const BTHSignature& sig, int P, std::uint64_t seed,
                                double amplitude = 0.5);

// ---- specialized primary systems ---------------------------------------

// (2,1): L = Lambda^2 + c Lambda + b + a Lambda^{-1}
struct Bm21Fields {
  FieldD a, b, c;
};
Bm21Fields bm21_t10(const Bm21Fields& s);
Bm21Fields bm21_t20(const Bm21Fields& s);
BandOperator<double> bm21_to_lax(const Bm21Fields& s);

// (2,2): L = Lambda^2 + u1 Lambda + u0 + um1 Lambda^{-1} + um2 Lambda^{-2}
enum class Bth22Flow { T20, T10, Tm10 };
struct Bth22Fields {
  FieldD u1, u0, um1, um2;
  FieldD aux;  // a_0 for T20, a'_{-1} for Tm10, unused for T10
};
Bth22Fields bth22_rhs(Bth22Flow flow, const Bth22Fields& s);
// consistency initialization: a_0 = (1+Lambda)^{-1} u1; a'_{-1} = exp((1+Lambda^{-1})^{-1} log um2)
FieldD bth22_init_aux(Bth22Flow flow, const Bth22Fields& s);
// defect of the auxiliary relation along a trajectory
double bth22_aux_defect(Bth22Flow flow, const Bth22Fields& s);
BandOperator<double> bth22_to_lax(const Bth22Fields& s);

// (1,2): L = Lambda + u0 + um1 Lambda^{-1} + um2 Lambda^{-2}
enum class Bth12Flow { T10, Tm10 };
struct Bth12Fields {
  FieldD u0, um1, um2;
};
Bth12Fields bth12_rhs(Bth12Flow flow, const Bth12Fields& s);
BandOperator<double> bth12_to_lax(const Bth12Fields& s);

// (1,1) Toda: L = Lambda + b + a Lambda^{-1}
struct TodaFields {
  FieldD a, b;
};
TodaFields toda_t10(const TodaFields& s);
BandOperator<double> toda_to_lax(const TodaFields& s);

// ---- integration --------------------------------------------------------

struct Monitor {
  std::string name;
  std::function<double(const Vec&)> value;
  // abort when |value - value_at_start| exceeds tol
  double tol = std::numeric_limits<double>::infinity();
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;
  std::vector<std::string> monitor_names;
  std::vector<std::vector<double>> monitor_values;  // per step, per monitor
};

// classical fixed-step RK4; throws with a diagnostic when a monitor breaches
Trajectory integrate_rk4(const std::function<Vec(const Vec&)>& rhs, Vec y0, double dt, int steps,
                         const std::vector<Monitor>& monitors = {});

// endpoint Richardson ratio |y_dt - y_{dt/2}| / |y_{dt/2} - y_{dt/4}|;
// approximately 16 for a fourth-order scheme
double richardson_ratio(const std::function<Vec(const Vec&)>& rhs, const Vec& y0, double t_final,
                        double dt);

// sup norm of d_A d_B L - d_B d_A L estimated with centered differences
double commutativity_check(const BandOperator<double>& L, FlowSpec flow_a, FlowSpec flow_b,
                           const BTHSignature& sig, int depth, double h);

// pack/unpack a fixed-band Lax state for vector integration
Vec pack_band(const BandOperator<double>& L, const BTHSignature& sig);
BandOperator<double> unpack_band(const Vec& y, const BTHSignature& sig, int P, double eps = 1.0);

}  // namespace bth

#endif
