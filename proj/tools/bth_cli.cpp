// bth: batch front end for constructing solutions, running verifications,
// integrating flows, and emitting machine-readable reports.
//
// exit codes: 0 pass, 1 verification failure, 2 usage error, 3 I/O or parse
// error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "bth/flows.hpp"
#include "bth/json_io.hpp"
#include "bth/miura.hpp"

using namespace bth;
namespace fs = std::filesystem;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

fs::path resolve_output(const std::string& path) {
  fs::path p(path);
  const char* dir = std::getenv("BTH_OUTPUT_DIR");
  if (dir && *dir && p.is_relative()) p = fs::path(dir) / p;
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p;
}

void write_atomic(const fs::path& path, const std::string& body) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open " + tmp.string());
    out << body;
  }
  fs::rename(tmp, path);
}

std::string emit_manifest(const std::string& path, Json config, Json payload) {
  Json doc{{"config", std::move(config)}, {"payload", std::move(payload)}};
  doc["content_hash"] = content_hash(doc);
  write_atomic(resolve_output(path), doc.dump(2) + "\n");
  return doc["content_hash"].get<std::string>();
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

// apply a JSON config file as defaults for options the user did not pass
void apply_config_defaults(CLI::App* cmd, const std::string& config_path) {
  if (config_path.empty()) return;
  Json cfg = load_json(config_path);
  for (auto& [key, value] : cfg.items()) {
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (!opt) opt = cmd->get_option_no_throw("-" + key);
    if (!opt || opt->count() > 0) continue;
    std::string val;
    if (value.is_boolean()) {
      if (!value.get<bool>()) continue;
      val = "true";
    } else if (value.is_string()) {
      val = value.get<std::string>();
    } else {
      val = value.dump();
    }
    opt->add_result(val);
    opt->run_callback();
  }
}

// accept either a bare tau JSON or a manifest wrapping it under payload.tau
TauSequence extract_tau(const Json& j) {
  if (j.contains("taus")) return tau_from_json(j);
  if (j.contains("payload") && j.at("payload").contains("tau"))
    return tau_from_json(j.at("payload").at("tau"));
  throw Json::other_error::create(501, "no tau sequence found in input", nullptr);
}

Json tau_summary(const TauSequence& ts) {
  Json arr = Json::array();
  for (const auto& t : ts.taus) arr.push_back(t.str());
  return arr;
}

struct SweepOutcome {
  bool pass;
  Json report;
};

SweepOutcome run_sweep(const TauSequence& ts) {
  auto fam = primary_residuals(ts);
  auto k0 = k0_residual_sweep(ts);
  bool ok = all_pass(fam) && all_pass(k0);
  Json rep{{"primary", residual_report_to_json(fam)},
           {"k0", residual_report_to_json(k0)},
           {"all_pass", ok}};
  return {ok, rep};
}

// ---- evolve machinery ----------------------------------------------------

struct EvolveSystem {
  int dim = 0;
  std::function<Vec(const Vec&)> rhs;
  std::function<BandOperator<double>(const Vec&)> to_lax;
  std::function<double(const Vec&)> aux_defect;  // optional
  Vec y0;
};

EvolveSystem make_system(const std::string& name, int P, std::uint64_t seed, double amp,
                         int gamma, int nlevel, int N, int M, int depth) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-amp, amp);
  auto rf = [&]() {
    FieldD f(P);
    for (int x = 0; x < P; ++x) f[x] = dist(rng);
    return f;
  };
  auto pos = [&]() {
    FieldD f(P);
    for (int x = 0; x < P; ++x) f[x] = 1.0 + std::abs(dist(rng));
    return f;
  };
  EvolveSystem sys;
  if (name == "toda-t10") {
    TodaFields s{pos(), rf()};
    sys.dim = 2 * P;
    sys.y0 = Vec(sys.dim);
    sys.y0 << s.a, s.b;
    auto unpack = [P](const Vec& y) { return TodaFields{y.segment(0, P), y.segment(P, P)}; };
    sys.rhs = [P, unpack](const Vec& y) {
      TodaFields d = toda_t10(unpack(y));
      Vec r(2 * P);
      r << d.a, d.b;
      return r;
    };
    sys.to_lax = [unpack](const Vec& y) { return toda_to_lax(unpack(y)); };
  } else if (name == "bm21-t10" || name == "bm21-t20") {
    Bm21Fields s{pos(), rf(), rf()};
    sys.dim = 3 * P;
    sys.y0 = Vec(sys.dim);
    sys.y0 << s.a, s.b, s.c;
    bool t10 = name == "bm21-t10";
    auto unpack = [P](const Vec& y) {
      return Bm21Fields{y.segment(0, P), y.segment(P, P), y.segment(2 * P, P)};
    };
    sys.rhs = [P, unpack, t10](const Vec& y) {
      Bm21Fields d = t10 ? bm21_t10(unpack(y)) : bm21_t20(unpack(y));
      Vec r(3 * P);
      r << d.a, d.b, d.c;
      return r;
    };
    sys.to_lax = [unpack](const Vec& y) { return bm21_to_lax(unpack(y)); };
  } else if (name == "bth12-t10" || name == "bth12-tm10") {
    Bth12Fields s{rf(), rf(), pos()};
    sys.dim = 3 * P;
    sys.y0 = Vec(sys.dim);
    sys.y0 << s.u0, s.um1, s.um2;
    Bth12Flow flow = name == "bth12-t10" ? Bth12Flow::T10 : Bth12Flow::Tm10;
    auto unpack = [P](const Vec& y) {
      return Bth12Fields{y.segment(0, P), y.segment(P, P), y.segment(2 * P, P)};
    };
    sys.rhs = [P, unpack, flow](const Vec& y) {
      Bth12Fields d = bth12_rhs(flow, unpack(y));
      Vec r(3 * P);
      r << d.u0, d.um1, d.um2;
      return r;
    };
    sys.to_lax = [unpack](const Vec& y) { return bth12_to_lax(unpack(y)); };
  } else if (name == "bth22-t10" || name == "bth22-t20" || name == "bth22-tm10") {
    Bth22Flow flow = name == "bth22-t10"   ? Bth22Flow::T10
                     : name == "bth22-t20" ? Bth22Flow::T20
                                           : Bth22Flow::Tm10;
    Bth22Fields s;
    s.u1 = rf();
    s.u0 = rf();
    s.um1 = rf();
    s.um2 = pos();
    s.aux = bth22_init_aux(flow, s);
    sys.dim = 5 * P;
    sys.y0 = Vec(sys.dim);
    sys.y0 << s.u1, s.u0, s.um1, s.um2, s.aux;
    auto unpack = [P](const Vec& y) {
      Bth22Fields f;
      f.u1 = y.segment(0, P);
      f.u0 = y.segment(P, P);
      f.um1 = y.segment(2 * P, P);
      f.um2 = y.segment(3 * P, P);
      f.aux = y.segment(4 * P, P);
      return f;
    };
    sys.rhs = [P, unpack, flow](const Vec& y) {
      Bth22Fields d = bth22_rhs(flow, unpack(y));
      Vec r(5 * P);
      r << d.u1, d.u0, d.um1, d.um2, d.aux;
      return r;
    };
    sys.to_lax = [unpack](const Vec& y) { return bth22_to_lax(unpack(y)); };
    sys.aux_defect = [unpack, flow](const Vec& y) { return bth22_aux_defect(flow, unpack(y)); };
  } else if (name == "generic") {
    BTHSignature sig(N, M);
    auto L = random_lax(sig, P, seed, amp);
    sys.dim = (N + M + 1) * P;
    sys.y0 = pack_band(L, sig);
    sys.rhs = [sig, P, gamma, nlevel, depth](const Vec& y) {
      BandOperator<double> cur = unpack_band(y, sig, P);
      return pack_band(lax_rhs_generic(cur, FlowSpec{gamma, nlevel}, sig, depth).rhs, sig);
    };
    sys.to_lax = [sig, P](const Vec& y) { return unpack_band(y, sig, P); };
  } else {
    throw CLI::ValidationError("unknown system: " + name);
  }
  return sys;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"(N,M)-bigraded Toda hierarchy workbench"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON file with option defaults")
      ->check(CLI::ExistingFile);

  // ---- rational-tau -------------------------------------------------------
  auto* rat = app.add_subcommand("rational-tau", "double-Wronskian rational tau functions");
  int rN = 1, rM = 1, rj = 3, rm = 0, rn = 0;
  std::string rout = "rational_tau.json";
  rat->add_option("-N", rN, "upper band width")->check(CLI::PositiveNumber);
  rat->add_option("-M", rM, "lower band width")->check(CLI::PositiveNumber);
  rat->add_option("-j", rj, "Lax matrix size")->check(CLI::PositiveNumber);
  rat->add_option("-m", rm, "k offset in [0,N)");
  rat->add_option("-n", rn, "k offset in [0,M)");
  rat->add_option("-o,--out", rout, "output JSON");

  // ---- moment-tau ---------------------------------------------------------
  auto* mom = app.add_subcommand("moment-tau", "tau from a random staircase moment matrix");
  int mN = 1, mM = 1, mT = 4;
  std::uint64_t mseed = 1;
  bool mall = false;
  int mslots_l = -1, mslots_r = -1;
  std::string mout = "moment_tau.json";
  mom->add_option("-N", mN)->check(CLI::PositiveNumber);
  mom->add_option("-M", mM)->check(CLI::PositiveNumber);
  mom->add_option("-T", mT, "truncation size")->check(CLI::PositiveNumber);
  mom->add_option("--seed", mseed, "random seed");
  mom->add_flag("--all-classes", mall,
                "seed straddling classes too (breaks the r=1 identities)");
  mom->add_option("--slots-left", mslots_l, "active left slots (default N+1)");
  mom->add_option("--slots-right", mslots_r, "active right slots (default M+1)");
  mom->add_option("-o,--out", mout, "output JSON");

  // ---- hirota-check -------------------------------------------------------
  auto* hir = app.add_subcommand("hirota-check", "exact primary Hirota residual sweep");
  std::string hin, hout = "hirota_report.json";
  hir->add_option("--in", hin, "tau sequence JSON (as written by rational-tau/moment-tau)");
  hir->add_option("-o,--out", hout, "report JSON");

  // ---- lax-from-tau -------------------------------------------------------
  auto* lax = app.add_subcommand("lax-from-tau", "Lax matrix entries by both tau formulas");
  std::string lin, lout = "lax.json", lcsv, lat;
  int lsize = -1;
  lax->add_option("--in", lin, "tau sequence JSON")->required();
  lax->add_option("--size", lsize, "matrix window (default: tau rank)");
  lax->add_option("--at", lat, "TimePoint 'gamma,n=p/q;...' for CSV evaluation");
  lax->add_option("--csv", lcsv, "CSV of evaluated entries");
  lax->add_option("-o,--out", lout, "output JSON");

  // ---- frac-power ---------------------------------------------------------
  auto* frac = app.add_subcommand("frac-power", "fractional roots of a random Lax operator");
  int fN = 2, fM = 1, fP = 9, fdepth = -1;
  std::uint64_t fseed = 1;
  double famp = 0.5;
  std::string fout = "frac_power.json";
  frac->add_option("-N", fN)->check(CLI::PositiveNumber);
  frac->add_option("-M", fM)->check(CLI::PositiveNumber);
  frac->add_option("-P", fP, "lattice size")->check(CLI::PositiveNumber);
  frac->add_option("--depth", fdepth, "truncation depth (default P-1)");
  frac->add_option("--seed", fseed);
  frac->add_option("--amp", famp, "coefficient amplitude");
  frac->add_option("-o,--out", fout);

  // ---- evolve ---------------------------------------------------------------
  auto* evo = app.add_subcommand("evolve", "RK4 flow integration with monitors");
  std::string esys = "bm21-t10", ecsv = "trajectory.csv", eout = "evolve_manifest.json";
  int eP = 9, eN = 2, eM = 1, egamma = 1, enlevel = 0, esteps = 1000, edepth = -1;
  double edt = 1e-3, eamp = 0.1, etol = 1e-8;
  std::uint64_t eseed = 1;
  bool erich = false;
  evo->add_option("--system", esys,
                  "toda-t10|bm21-t10|bm21-t20|bth12-t10|bth12-tm10|"
                  "bth22-t10|bth22-t20|bth22-tm10|generic");
  evo->add_option("-P", eP)->check(CLI::PositiveNumber);
  evo->add_option("-N", eN, "signature (generic system)");
  evo->add_option("-M", eM, "signature (generic system)");
  evo->add_option("--gamma", egamma, "flow gamma (generic system)");
  evo->add_option("--n-level", enlevel, "flow n (generic system)");
  evo->add_option("--depth", edepth, "root depth (generic system, default P-1)");
  evo->add_option("--dt", edt)->check(CLI::PositiveNumber);
  evo->add_option("--steps", esteps)->check(CLI::PositiveNumber);
  evo->add_option("--seed", eseed);
  evo->add_option("--amp", eamp, "initial data amplitude");
  evo->add_option("--tol-trace", etol, "conserved-trace drift tolerance per unit time");
  evo->add_flag("--richardson", erich, "also estimate the RK4 order by dt halving");
  evo->add_option("--csv", ecsv, "trajectory CSV");
  evo->add_option("-o,--out", eout, "manifest JSON");

  // ---- commute-check --------------------------------------------------------
  auto* com = app.add_subcommand("commute-check", "mixed-derivative flow commutativity");
  int cN = 2, cM = 2, cP = 9, cdepth = -1;
  double ch = 1e-3, ctol = 1e-6, camp = 0.3;
  std::uint64_t cseed = 1;
  std::string cout_path = "commute_report.json";
  com->add_option("-N", cN)->check(CLI::PositiveNumber);
  com->add_option("-M", cM)->check(CLI::PositiveNumber);
  com->add_option("-P", cP)->check(CLI::PositiveNumber);
  com->add_option("--depth", cdepth, "root depth (default P-3)");
  com->add_option("--fd-step", ch, "finite-difference step");
  com->add_option("--tol", ctol, "pass threshold");
  com->add_option("--amp", camp, "coefficient amplitude");
  com->add_option("--seed", cseed);
  com->add_option("-o,--out", cout_path);

  // ---- miura-check ----------------------------------------------------------
  auto* miu = app.add_subcommand("miura-check", "(1,2) <-> (2,1) flow equivalence");
  int uP = 7, uruns = 50;
  std::uint64_t useed = 1;
  bool uskip = false;
  double utol = 1e-10;
  std::string uout = "miura_report.json", ufields;
  miu->add_option("-P", uP)->check(CLI::PositiveNumber);
  miu->add_option("--runs", uruns)->check(CLI::PositiveNumber);
  miu->add_option("--seed", useed);
  miu->add_option("--tol", utol);
  miu->add_flag("--skip-dagger", uskip, "negative control: drop the dagger shifts");
  miu->add_option("--fields", ufields, "JSON file {u0:[],um1:[],um2:[]} instead of random data");
  miu->add_option("-o,--out", uout);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (!config_path.empty())
      for (auto* sub : app.get_subcommands()) apply_config_defaults(sub, config_path);

    if (rat->parsed()) {
      RationalTau rt = rational_tau(BTHSignature(rN, rM), rj, rm, rn);
      Json young = Json::array();
      for (int s = 1; s <= rj; ++s) {
        YoungDecomposition yd = young_decomposition(BTHSignature(rN, rM), rj, rm, rn, s);
        Json pairs = Json::array();
        for (auto& p : yd.pairs)
          pairs.push_back(Json{{"left", p.left.rows}, {"right", p.right.rows}});
        young.push_back(Json{{"s", s},
                             {"sign", yd.sign},
                             {"degree_diagram", degree_diagram(BTHSignature(rN, rM), rt.k, s)},
                             {"pairs", pairs}});
      }
      Json config{{"command", "rational-tau"}, {"N", rN}, {"M", rM},
                  {"j", rj},                  {"m", rm}, {"n", rn}};
      Json payload{{"k", rt.k},
                   {"k_set", k_set(BTHSignature(rN, rM), rj)},
                   {"reduced_signature", {{"N", rt.reduced_sig.N}, {"M", rt.reduced_sig.M}}},
                   {"tau", tau_to_json(rt.taus)},
                   {"tau_text", tau_summary(rt.taus)},
                   {"young", young}};
      std::string hash = emit_manifest(rout, config, payload);
      std::cout << "rational-tau: k = " << rt.k << ", K_j = ";
      for (int k : k_set(BTHSignature(rN, rM), rj)) std::cout << k << " ";
      std::cout << "-> " << rout << " (" << hash << ")\n";
      return kExitPass;
    }

    if (mom->parsed()) {
      BTHSignature sig(mN, mM);
      MomentMatrix m0 = seed_random_moment(sig, mT, mseed, !mall);
      MomentMatrix mt = evolve_moment_matrix(m0, mslots_l, mslots_r);
      TauSequence ts = tau_from_minors(mt);
      Json config{{"command", "moment-tau"}, {"N", mN},       {"M", mM},
                  {"T", mT},                 {"seed", mseed}, {"all_classes", mall},
                  {"slots_left", mslots_l},  {"slots_right", mslots_r}};
      Json seeds = Json::array();
      for (int i = 1; i <= mT; ++i)
        for (int j = 1; j <= mT; ++j)
          if (class_rep(sig, i, j) == (ClassKey{i, j}))
            seeds.push_back(Json{{"i", i}, {"j", j}, {"value", m0.entry(i, j).str()}});
      Json payload{{"seed_classes", seeds},
                   {"staircase_ok", mt.staircase_ok()},
                   {"rank", ts.rank()},
                   {"tau", tau_to_json(ts)},
                   {"tau_text", tau_summary(ts)}};
      std::string hash = emit_manifest(mout, config, payload);
      std::cout << "moment-tau: rank " << ts.rank() << " -> " << mout << " (" << hash << ")\n";
      return kExitPass;
    }

    if (hir->parsed()) {
      if (hin.empty()) throw CLI::ValidationError("hirota-check: --in is required");
      TauSequence ts = extract_tau(load_json(hin));
      SweepOutcome res = run_sweep(ts);
      Json config{{"command", "hirota-check"}, {"in", hin}};
      emit_manifest(hout, config, res.report);
      std::cout << "hirota-check: " << (res.pass ? "all residuals zero" : "NONZERO residuals")
                << " -> " << hout << "\n";
      return res.pass ? kExitPass : kExitVerifyFail;
    }

    if (lax->parsed()) {
      TauSequence ts = extract_tau(load_json(lin));
      LaxFromTau lx = lax_from_tau(ts, lsize);
      Json entries = Json::array();
      for (int i = 1; i <= lx.size; ++i)
        for (int j = 1; j <= lx.size; ++j) {
          const TauRatio& e = lx.left[i - 1][j - 1];
          if (e.num.is_zero()) continue;
          entries.push_back(Json{{"i", i},
                                 {"j", j},
                                 {"num", e.num.str()},
                                 {"den", e.den.str()}});
        }
      Json config{{"command", "lax-from-tau"}, {"in", lin}, {"size", lx.size}, {"at", lat}};
      Json payload{{"dual_agree", lx.dual_agree}, {"band_ok", lx.band_ok}, {"entries", entries}};
      if (!lcsv.empty()) {
        TimePoint pt;
        if (!lat.empty()) {
          std::stringstream ss(lat);
          std::string item;
          while (std::getline(ss, item, ';')) {
            auto eq = item.find('=');
            auto comma = item.find(',');
            if (eq == std::string::npos || comma == std::string::npos || comma > eq)
              throw CLI::ValidationError("bad --at syntax, want 'gamma,n=p/q;...'");
            TimeVar v{std::stoi(item.substr(0, comma)),
                      std::stoi(item.substr(comma + 1, eq - comma - 1))};
            pt[v] = Rat::from_string(item.substr(eq + 1));
          }
        }
        std::ostringstream csv;
        csv << "i,j,value\n";
        for (int i = 1; i <= lx.size; ++i)
          for (int j = 1; j <= lx.size; ++j) {
            const TauRatio& e = lx.left[i - 1][j - 1];
            Rat den = e.den.eval(pt);
            if (den.is_zero()) throw std::domain_error("lax-from-tau: tau vanishes at --at point");
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", (e.num.eval(pt) / den).to_double());
            csv << i << "," << j << "," << buf << "\n";
          }
        write_atomic(resolve_output(lcsv), csv.str());
        payload["csv"] = lcsv;
      }
      emit_manifest(lout, config, payload);
      bool ok = lx.dual_agree && lx.band_ok;
      std::cout << "lax-from-tau: dual_agree=" << lx.dual_agree << " band_ok=" << lx.band_ok
                << " -> " << lout << "\n";
      return ok ? kExitPass : kExitVerifyFail;
    }

    if (frac->parsed()) {
      BTHSignature sig(fN, fM);
      if (fdepth < 0) fdepth = fP - 1;
      auto L = random_lax(sig, fP, fseed, famp);
      auto R = nth_root_upper(L, sig, fdepth);
      auto EU = op_pow(R, fN) - L;
      double upper_res =
          offset_sup_norm(EU, [&](int d) { return d >= fN - 1 - fdepth; });
      auto S = mth_root_lower(L, sig, fdepth);
      auto EL = op_pow(S, fM) - L;
      double lower_res =
          offset_sup_norm(EL, [&](int d) { return d <= -fM + 1 + fdepth; });
      Json config{{"command", "frac-power"}, {"N", fN},       {"M", fM},
                  {"P", fP},                 {"depth", fdepth}, {"seed", fseed},
                  {"amp", famp}};
      Json payload{{"upper_window_offsets_geq", fN - 1 - fdepth},
                   {"upper_residual", upper_res},
                   {"lower_window_offsets_leq", -fM + 1 + fdepth},
                   {"lower_residual", lower_res},
                   {"upper_root", band_to_json(R)},
                   {"lower_root", band_to_json(S)}};
      emit_manifest(fout, config, payload);
      bool ok = upper_res < 1e-10 && lower_res < 1e-10;
      std::cout << "frac-power: upper " << upper_res << ", lower " << lower_res << " -> " << fout
                << "\n";
      return ok ? kExitPass : kExitVerifyFail;
    }

    if (evo->parsed()) {
      if (edepth < 0) edepth = eP - 1;
      EvolveSystem sys = make_system(esys, eP, eseed, eamp, egamma, enlevel, eN, eM, edepth);
      std::vector<Monitor> mons;
      double horizon = edt * esteps;
      for (int k = 1; k <= 3; ++k)
        mons.push_back({"tr_L" + std::to_string(k),
                        [&sys, k](const Vec& y) { return op_pow(sys.to_lax(y), k).trace(); },
                        etol * std::max(horizon, 1.0)});
      if (sys.aux_defect) mons.push_back({"aux_defect", sys.aux_defect, 1e-6});
      Json config{{"command", "evolve"}, {"system", esys},   {"P", eP},
                  {"dt", edt},           {"steps", esteps},  {"seed", eseed},
                  {"amp", eamp},         {"tol_trace", etol}, {"depth", edepth},
                  {"N", eN},             {"M", eM},          {"gamma", egamma},
                  {"n_level", enlevel}};
      Json payload;
      int exit_code = kExitPass;
      try {
        Trajectory tr = integrate_rk4(sys.rhs, sys.y0, edt, esteps, mons);
        std::ostringstream csv;
        csv << "time";
        for (int i = 0; i < sys.dim; ++i) csv << ",y" << i;
        for (auto& name : tr.monitor_names) csv << "," << name;
        csv << "\n";
        char buf[64];
        for (std::size_t k = 0; k < tr.times.size(); ++k) {
          std::snprintf(buf, sizeof buf, "%.17g", tr.times[k]);
          csv << buf;
          for (int i = 0; i < sys.dim; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", tr.states[k][i]);
            csv << "," << buf;
          }
          for (double v : tr.monitor_values[k]) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            csv << "," << buf;
          }
          csv << "\n";
        }
        write_atomic(resolve_output(ecsv), csv.str());
        Json drift = Json::object();
        for (std::size_t m = 0; m < tr.monitor_names.size(); ++m) {
          double d = 0;
          for (auto& row : tr.monitor_values)
            d = std::max(d, std::abs(row[m] - tr.monitor_values[0][m]));
          drift[tr.monitor_names[m]] = d;
        }
        payload["monitor_drift"] = drift;
        payload["csv"] = ecsv;
        payload["final_time"] = tr.times.back();
      } catch (const std::runtime_error& e) {
        payload["monitor_breach"] = e.what();
        exit_code = kExitVerifyFail;
      }
      if (erich) {
        double ratio = richardson_ratio(sys.rhs, sys.y0, edt * esteps, edt * 8);
        payload["richardson_ratio"] = ratio;
        payload["order_estimate"] = std::log2(ratio);
        if (ratio < 12.0 || ratio > 20.0) exit_code = std::max(exit_code, kExitVerifyFail);
      }
      emit_manifest(eout, config, payload);
      std::cout << "evolve: " << esys << (exit_code ? " FAILED" : " ok") << " -> " << eout
                << "\n";
      return exit_code;
    }

    if (com->parsed()) {
      BTHSignature sig(cN, cM);
      if (cdepth < 0) cdepth = cP - 3;
      auto L = random_lax(sig, cP, cseed, camp);
      std::vector<FlowSpec> primaries;
      for (int g = -cM + 1; g <= cN; ++g)
        if (g != 0) primaries.push_back(FlowSpec{g, 0});  // gamma=0 duplicates gamma=1
      Json rows = Json::array();
      double worst = 0;
      for (std::size_t i = 0; i < primaries.size(); ++i)
        for (std::size_t j = i + 1; j < primaries.size(); ++j) {
          double v = commutativity_check(L, primaries[i], primaries[j], sig, cdepth, ch);
          worst = std::max(worst, v);
          rows.push_back(Json{{"flow_a", primaries[i].gamma},
                              {"flow_b", primaries[j].gamma},
                              {"norm", v}});
        }
      Json config{{"command", "commute-check"}, {"N", cN},     {"M", cM},   {"P", cP},
                  {"h", ch},                    {"tol", ctol}, {"seed", cseed},
                  {"depth", cdepth},            {"amp", camp}};
      emit_manifest(cout_path, config, Json{{"pairs", rows}, {"worst", worst}});
      std::cout << "commute-check: worst " << worst << " -> " << cout_path << "\n";
      return worst < ctol ? kExitPass : kExitVerifyFail;
    }

    if (miu->parsed()) {
      Json runs = Json::array();
      double worst = 0;
      if (!ufields.empty()) {
        Json f = load_json(ufields);
        auto field = [&](const char* key) {
          FieldD v(f.at(key).size());
          for (int x = 0; x < v.size(); ++x) v[x] = f.at(key).at(x).get<double>();
          return v;
        };
        Bth12Fields s{field("u0"), field("um1"), field("um2")};
        MiuraReport r = equivalence_residual(s, uskip);
        worst = std::max(r.t10_residual, r.tm10_residual);
        runs.push_back(Json{{"t10", r.t10_residual}, {"tm10", r.tm10_residual}});
      } else {
        for (int k = 0; k < uruns; ++k) {
          MiuraReport r = equivalence_residual(uP, useed + k, uskip);
          worst = std::max({worst, r.t10_residual, r.tm10_residual});
          runs.push_back(Json{{"t10", r.t10_residual},
                              {"tm10", r.tm10_residual},
                              {"gauge_min", r.gauge_min},
                              {"gauge_max", r.gauge_max}});
        }
      }
      Json config{{"command", "miura-check"}, {"P", uP},        {"runs", uruns},
                  {"seed", useed},            {"tol", utol},    {"skip_dagger", uskip},
                  {"fields", ufields}};
      emit_manifest(uout, config, Json{{"runs", runs}, {"worst", worst}});
      std::cout << "miura-check: worst " << worst << " -> " << uout << "\n";
      return worst < utol ? kExitPass : kExitVerifyFail;
    }
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
