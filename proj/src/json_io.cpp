#include "bth/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace bth {

Json poly_to_json(const MultiPoly& p) {
  Json terms = Json::array();
  for (auto& [m, c] : p.terms()) {
    Json mono = Json::array();
    for (auto [v, e] : m.factors()) mono.push_back(Json::array({v.gamma, v.n, e}));
    terms.push_back(Json{{"c", c.str()}, {"m", mono}});
  }
  return Json{{"terms", terms}, {"text", p.str()}};
}

MultiPoly poly_from_json(const Json& j) {
  MultiPoly p;
  for (const auto& t : j.at("terms")) {
    Rat c = Rat::from_string(t.at("c").get<std::string>());
    std::vector<std::pair<TimeVar, int>> fac;
    for (const auto& f : t.at("m"))
      fac.emplace_back(TimeVar{f.at(0).get<int>(), f.at(1).get<int>()}, f.at(2).get<int>());
    p.add_term(Monomial::from_factors(std::move(fac)), c);
  }
  return p;
}

Json tau_to_json(const TauSequence& ts) {
  Json taus = Json::array();
  for (const auto& t : ts.taus) taus.push_back(poly_to_json(t));
  return Json{{"signature", {{"N", ts.sig.N}, {"M", ts.sig.M}}},
              {"terminal", ts.terminal},
              {"taus", taus}};
}

TauSequence tau_from_json(const Json& j) {
  BTHSignature sig(j.at("signature").at("N").get<int>(), j.at("signature").at("M").get<int>());
  std::vector<MultiPoly> taus;
  for (const auto& t : j.at("taus")) taus.push_back(poly_from_json(t));
  bool term = j.value("terminal", true);
  return TauSequence(sig, std::move(taus), term);
}

Json band_to_json(const BandOperator<double>& a) {
  Json diags = Json::object();
  for (auto& [d, c] : a.diagonals()) {
    Json vals = Json::array();
    for (int x = 0; x < a.sites(); ++x) vals.push_back(c[x]);
    diags[std::to_string(d)] = vals;
  }
  return Json{{"P", a.sites()}, {"eps", a.eps()}, {"diagonals", diags}};
}

BandOperator<double> band_from_json(const Json& j) {
  BandOperator<double> a(j.at("P").get<int>(), j.value("eps", 1.0));
  for (auto& [key, vals] : j.at("diagonals").items()) {
    Field<double> c(a.sites());
    if (static_cast<int>(vals.size()) != a.sites())
      throw std::invalid_argument("band_from_json: diagonal length mismatch");
    for (int x = 0; x < a.sites(); ++x) c[x] = vals.at(x).get<double>();
    a.set_coeff(std::stoi(key), c);
  }
  return a;
}

Json residual_report_to_json(const std::vector<ResidualReport>& reports) {
  Json arr = Json::array();
  for (const auto& r : reports) {
    Json item{{"equation", r.equation}, {"n", r.n}, {"pass", r.passes()}};
    if (r.equation == "K0") {
      item["r"] = r.r;
      item["m"] = r.m;
    } else {
      item["param"] = r.param;
    }
    if (!r.passes()) item["leading_monomial"] = r.residual.str().substr(0, 160);
    arr.push_back(item);
  }
  return arr;
}

std::string content_hash(const Json& j) {
  std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace bth
