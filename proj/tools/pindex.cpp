// pindex: period-index obstructions on products of elliptic curves.
//
// Exit codes: 0 success (whatever the mathematical verdict), 1 invalid input,
// 2 internal failure or a certificate that does not verify.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pindex/json_io.hpp"
#include "pindex/pindex.hpp"
#include "pindex/sweep.hpp"

using namespace pindex;
using nlohmann::json;

namespace {

struct Common {
  bool as_json = false;
  std::string out;
  std::string config;
};

struct Args {
  int g = 3;
  int t = -1;
  std::int64_t n = 2;
  std::int64_t e = 0;
  std::int64_t r = 0;
  std::uint64_t ell = 0;
  std::uint64_t p = 0;
  int dim = 3;
  std::string b;
  std::string variant = "threefold";
  bool witness = false;
  std::string input;
  std::string spec;
  unsigned width = 0;
  int h2tors = 1, h3tors = 1, denom_lcm = 1;
  std::vector<std::string> degrees;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
}

std::uint64_t positive(std::int64_t v, const char* what) {
  if (v < 1) throw InputError(std::string(what) + " must be positive, got " + std::to_string(v));
  return static_cast<std::uint64_t>(v);
}

Locality locality_of(std::uint64_t ell) { return ell == 0 ? Locality::global() : Locality::local_at(ell); }

BrauerScenario scenario_of(const Args& a) {
  ProductRing ring(a.g, locality_of(a.ell));
  std::uint64_t n = positive(a.n, "n");
  std::string b = a.b.empty() ? "standard(" + std::to_string(a.g - 1) + ")" : a.b;
  if (auto t = json_io::parse_standard(b)) return BrauerScenario::standard(ring, *t, n);
  json cls = b.front() == '{' ? json::parse(b) : read_json_file(b);
  return BrauerScenario(ring, json_io::class_from_json(ring, cls), n);
}

std::string summary_line(const json& v) {
  std::string s = v.at("status").get<std::string>();
  if (s == "obstructed") s += " (violation " + v.at("violation").get<std::string>() + ")";
  return s;
}

void emit(const Common& c, const json& doc, const std::string& text) {
  if (c.as_json)
    std::cout << doc.dump(2) << '\n';
  else
    std::cout << text;
  if (!c.out.empty()) {
    std::ofstream f(c.out, std::ios::trunc);
    if (!f) throw InputError("cannot write " + c.out);
    f << doc.dump(2) << '\n';
  }
}

/// Every embedded check must verify or the run counts as an internal failure.
void require_verified(const json& doc) {
  if (!doc.contains("checks")) return;
  for (const auto& ch : doc.at("checks"))
    if (!json_io::verify_check(ch)) throw InternalError("embedded certificate failed verification");
}

int cmd_obstruct(const Common& c, const Args& a) {
  BrauerScenario sc = scenario_of(a);
  std::uint64_t e = positive(a.e, "e");
  ObstructionSystem sys = build_p_system(sc, e);
  Verdict v = decide(sys);
  if (!verify_verdict(sys, v)) throw InternalError("verdict failed verification");
  json check = json_io::p_check(sc, e, sys, v);
  json doc = {{"command", "obstruct"}, {"status", v.status()}, {"checks", json::array({check})}};
  std::ostringstream os;
  os << "p-system g=" << sc.g() << " n=" << sc.n() << " e=" << e << ": " << sys.num_rows() << " rows, "
     << sys.num_unknowns() << " unknowns\n"
     << "verdict: " << summary_line(check.at("verdict")) << '\n';
  emit(c, doc, os.str());
  return 0;
}

int cmd_sharpness(const Common& c, const Args& a) {
  if (a.t < 0) throw InputError("--t is required");
  SharpnessReport rep = sharpness_certificate(a.g, a.t, positive(a.n, "n"), locality_of(a.ell));
  json doc = json_io::to_json(rep);
  doc["command"] = "sharpness";
  require_verified(doc);
  std::ostringstream os;
  os << "g=" << rep.g << " t=" << rep.t << " n=" << rep.n << "\n"
     << "e=" << rep.e_obstructed << ": " << rep.lower.status() << "\n"
     << "e=" << rep.upper_bound << ": " << rep.upper.status() << "\n"
     << "conclusion: " << to_string(rep.conclusion) << '\n';
  emit(c, doc, os.str());
  return 0;
}

int cmd_kresch(const Common& c, Args a) {
  a.n = 2;
  BrauerScenario sc = scenario_of(a);
  ObstructionSystem sys = kresch_system(sc);
  Verdict v = decide(sys);
  if (!verify_verdict(sys, v)) throw InternalError("verdict failed verification");
  ObstructionSystem p_sys = build_p_system(sc, 2);
  Verdict pv = decide(p_sys);
  json doc = {{"command", "kresch"},
              {"status", v.status()},
              {"agrees_with_p_system", pv.status() == std::string(v.status())},
              {"checks", json::array({json_io::named_check("kresch", sc, sys, v), json_io::p_check(sc, 2, p_sys, pv)})}};
  require_verified(doc);
  emit(c, doc, std::string("mod-4 congruence: ") + v.status() + "\np-system at e=2: " + pv.status() + "\n");
  return 0;
}

int cmd_threefold(const Common& c, Args a) {
  a.g = 3;
  BrauerScenario sc = scenario_of(a);
  if (a.variant != "threefold" && a.variant != "sharp-dim3")
    throw InputError("--variant must be threefold or sharp-dim3");
  ObstructionSystem sys = a.variant == "threefold" ? threefold_system(sc) : sharp_dim3_system(sc);
  Verdict v = decide(sys);
  if (!verify_verdict(sys, v)) throw InternalError("verdict failed verification");
  json doc = {{"command", "threefold"},
              {"variant", a.variant},
              {"status", v.status()},
              {"checks", json::array({json_io::named_check(a.variant, sc, sys, v)})}};
  emit(c, doc, a.variant + " congruence, n=" + std::to_string(sc.n()) + ": " + v.status() + "\n");
  return 0;
}

int cmd_vanishing(const Common& c, const Args& a) {
  std::uint64_t n = positive(a.n, "n");
  VanishingDegrees vd = vanishing_degree(a.dim, n);
  json doc = {{"command", "vanishing"}, {"dim", a.dim}, {"n", n}, {"lcm", vd.lcm_degree.get_str()}, {"obs", vd.obs_degree.get_str()}};
  std::ostringstream os;
  os << "lcm: " << vd.lcm_degree << "\nobs: " << vd.obs_degree << '\n';
  if (a.witness) {
    Args sa = a;
    sa.g = a.dim;
    BrauerScenario sc = scenario_of(sa);
    VanishingWitness vw = vanishing_witness(sc);
    bool alg = algebraicity_identity(sc, vw.e);
    doc["algebraicity_identity"] = alg;
    doc["checks"] = json::array({json_io::p_check(sc, vw.e, vw.system, vw.verdict)});
    require_verified(doc);
    os << "explicit witness at e=" << vw.e << ": verified\nalgebraicity identity: " << (alg ? "holds" : "fails") << '\n';
  }
  emit(c, doc, os.str());
  return 0;
}

std::string counterexample_text(const CounterexampleReport& rep) {
  std::ostringstream os;
  os << rep.kind << ": g=" << rep.g << " n=" << rep.n << " r=" << rep.r << " dim P=" << rep.dim_P << "\n"
     << "fibral degree of delta: " << rep.fibral << "\n"
     << "index wrt P: " << rep.index_wrt_P << "\n"
     << "p-system at e=" << rep.e_obstructed << ": " << rep.obstruction.status() << "\n"
     << rep.conclusion << '\n';
  return os.str();
}

int cmd_ihc(const Common& c, const Args& a) {
  CounterexampleReport rep = ihc_counterexample(a.g, positive(a.n, "n"));
  json doc = json_io::to_json(rep);
  doc["command"] = "ihc";
  require_verified(doc);
  emit(c, doc, counterexample_text(rep));
  return 0;
}

int cmd_itc(const Common& c, const Args& a) {
  if (a.ell == 0) throw InputError("--ell is required");
  std::uint64_t p = a.p;
  if (p == 0) p = a.ell == 2 ? 3 : 2;
  CounterexampleReport rep = itc_counterexample(a.ell, p);
  json doc = json_io::to_json(rep);
  doc["command"] = "itc";
  require_verified(doc);
  emit(c, doc, counterexample_text(rep));
  return 0;
}

int cmd_hodge_index(const Common& c, const Args& a) {
  Args ga = a;
  ga.ell = 0;
  BrauerScenario sc = scenario_of(ga);
  std::uint64_t r = positive(a.r, "r");
  Integer idx = a.ell == 0 ? hodge_index_wrt_P(sc, r) : tate_index_wrt_P(sc, r, a.ell);
  json doc = {{"command", "hodge-index"}, {"g", sc.g()}, {"n", sc.n()}, {"r", r}, {"index", idx.get_str()}};
  doc["locality"] = json_io::locality_json(locality_of(a.ell));
  emit(c, doc, (a.ell == 0 ? "Hodge" : "Tate") + std::string(" index wrt P: ") + idx.get_str() + "\n");
  return 0;
}

int cmd_upper_bound(const Common& c, const Args& a) {
  UpperBoundInputs in;
  if (!a.input.empty()) {
    in = json_io::upper_bound_from_json(read_json_file(a.input));
  } else {
    in.dim = a.dim;
    in.h2tors = a.h2tors;
    in.h3tors = a.h3tors;
    in.denom_lcm = a.denom_lcm;
    for (const auto& d : a.degrees) in.degrees.push_back(json_io::integer_from(json(d)));
  }
  CycleExponent ce = cycle_exponent_details(in);
  json doc = json_io::to_json(ce);
  doc["command"] = "upper-bound";
  std::ostringstream os;
  os << "m=" << ce.m << " p_max=" << ce.p_max << " N=" << ce.N << "\n"
     << "d has " << mpz_sizeinbase(ce.d.get_mpz_t(), 10) << " digits, C has " << mpz_sizeinbase(ce.C.get_mpz_t(), 10)
     << " digits\ne=" << ce.e << '\n';
  emit(c, doc, os.str());
  return 0;
}

int cmd_sweep(const Common& c, const Args& a) {
  if (a.spec.empty()) throw InputError("--spec is required");
  SweepSpec spec = sweep_spec_from_json(read_json_file(a.spec));
  if (!c.out.empty()) spec.out = c.out;
  if (a.width > 0) spec.width = a.width;
  if (spec.out.empty()) throw InputError("sweep needs an output store (--out or \"out\" in the spec)");
  ResultStore store(spec.out);
  store.load();
  SweepSummary sum = run_sweep(spec, store);
  store.flush();
  json counts = sum.counts;
  json doc = {{"command", "sweep"}, {"cells", sum.cells}, {"counts", counts}, {"store", spec.out}};
  std::ostringstream os;
  os << "cells: " << sum.cells << '\n';
  for (const char* k : {"obstructed", "solvable", "inconclusive", "skipped", "failed"}) {
    auto it = sum.counts.find(k);
    os << k << ": " << (it == sum.counts.end() ? 0 : it->second) << '\n';
  }
  if (c.as_json) std::cout << doc.dump(2) << '\n';
  else std::cout << os.str();
  return sum.all_completed() ? 0 : 2;
}

int cmd_verify(const Common& c, const Args& a) {
  if (a.input.empty()) throw InputError("--in is required");
  std::vector<json> docs;
  std::ifstream in(a.input);
  if (!in) throw InputError("cannot open " + a.input);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  try {
    docs.push_back(json::parse(text));
  } catch (const json::exception&) {
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line))
      if (!line.empty()) docs.push_back(json::parse(line));
  }
  std::size_t checked = 0, failed = 0;
  for (const auto& d : docs) {
    if (!d.contains("checks")) continue;
    for (const auto& ch : d.at("checks")) {
      ++checked;
      if (!json_io::verify_check(ch)) ++failed;
    }
  }
  json doc = {{"command", "verify"}, {"checked", checked}, {"failed", failed}};
  std::string text_out = "checked " + std::to_string(checked) + " certificates, " + std::to_string(failed) + " failed\n";
  if (c.as_json) std::cout << doc.dump(2) << '\n';
  else std::cout << text_out;
  return failed == 0 ? 0 : 2;
}

/// Appends "--key value" for config entries the command line did not set.
std::vector<std::string> merge_config(std::vector<std::string> args, const std::vector<std::string>& commands) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  json cfg = read_json_file(path);
  if (!cfg.is_object()) throw InputError("config must be a JSON object");
  bool has_command = std::any_of(args.begin(), args.end(), [&](const std::string& s) {
    return std::find(commands.begin(), commands.end(), s) != commands.end();
  });
  if (!has_command && cfg.contains("command")) args.insert(args.begin() + 1, cfg.at("command").get<std::string>());
  auto given = [&](const std::string& flag) {
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& s) { return s == flag || s.rfind(flag + "=", 0) == 0; });
  };
  for (const auto& [key, val] : cfg.items()) {
    if (key == "command" || key == "config") continue;
    std::string flag = "--" + key;
    if (given(flag)) continue;
    if (val.is_boolean()) {
      if (val.get<bool>()) args.push_back(flag);
      continue;
    }
    std::string s;
    if (val.is_array()) {
      for (const auto& x : val) s += (s.empty() ? "" : ",") + (x.is_string() ? x.get<std::string>() : x.dump());
    } else {
      s = val.is_string() ? val.get<std::string>() : val.dump();
    }
    args.push_back(flag);
    args.push_back(s);
  }
  return args;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Period-index obstructions for Brauer classes on products of elliptic curves"};
  app.require_subcommand(1);
  Common common;
  Args a;
  app.add_flag("--json", common.as_json, "Print JSON instead of text");
  app.add_option("--out", common.out, "Also write the JSON report (or the sweep store) to FILE");
  app.add_option("--config", common.config, "JSON file mirroring the command-line flags");
  app.fallthrough();

  auto scenario_opts = [&](CLI::App* s, bool with_g = true) {
    if (with_g) s->add_option("--g", a.g, "Number of elliptic factors");
    s->add_option("--b", a.b, "B-field: standard(t), inline class JSON, or a JSON file");
    s->add_option("--n", a.n, "Degree of the B-field");
    s->add_option("--ell", a.ell, "Work in Z_(ell) instead of Z");
  };

  std::vector<std::pair<CLI::App*, std::function<int()>>> cmds;
  CLI::App* s = app.add_subcommand("obstruct", "Decide the divisibility obstruction at degree e");
  scenario_opts(s);
  s->add_option("--e", a.e, "Degree to test")->required();
  cmds.push_back({s, [&] { return cmd_obstruct(common, a); }});

  s = app.add_subcommand("sharpness", "Run the sharpness certificate at e = n^(t-1) and n^t");
  s->add_option("--g", a.g)->required();
  s->add_option("--t", a.t)->required();
  s->add_option("--n", a.n)->required();
  s->add_option("--ell", a.ell);
  cmds.push_back({s, [&] { return cmd_sharpness(common, a); }});

  s = app.add_subcommand("kresch", "Mod-4 congruence for n = 2");
  s->add_option("--g", a.g);
  s->add_option("--b", a.b);
  cmds.push_back({s, [&] { return cmd_kresch(common, a); }});

  s = app.add_subcommand("threefold", "Threefold congruences (g = 3)");
  s->add_option("--b", a.b);
  s->add_option("--n", a.n);
  s->add_option("--variant", a.variant, "threefold or sharp-dim3");
  cmds.push_back({s, [&] { return cmd_threefold(common, a); }});

  s = app.add_subcommand("vanishing", "Degrees where the obstruction vanishes");
  s->add_option("--dim", a.dim)->required();
  s->add_option("--n", a.n)->required();
  s->add_option("--b", a.b);
  s->add_flag("--witness", a.witness, "Also build and verify the explicit witness");
  cmds.push_back({s, [&] { return cmd_vanishing(common, a); }});

  s = app.add_subcommand("ihc", "Integral Hodge counterexample on a Severi-Brauer variety");
  s->add_option("--g", a.g)->required();
  s->add_option("--n", a.n)->required();
  cmds.push_back({s, [&] { return cmd_ihc(common, a); }});

  s = app.add_subcommand("itc", "ell-adic integral Tate counterexample");
  s->add_option("--ell", a.ell)->required();
  s->add_option("--p", a.p, "Characteristic (default: smallest prime other than ell)");
  cmds.push_back({s, [&] { return cmd_itc(common, a); }});

  s = app.add_subcommand("hodge-index", "Hodge (or Tate, with --ell) index with respect to P");
  scenario_opts(s);
  s->add_option("--r", a.r, "Relative dimension of P")->required();
  cmds.push_back({s, [&] { return cmd_hodge_index(common, a); }});

  s = app.add_subcommand("upper-bound", "Conditional period-index exponent");
  s->add_option("--input", a.input, "UpperBoundInputs JSON file");
  s->add_option("--dim", a.dim);
  s->add_option("--h2tors", a.h2tors);
  s->add_option("--h3tors", a.h3tors);
  s->add_option("--denom-lcm", a.denom_lcm);
  s->add_option("--degrees", a.degrees)->delimiter(',');
  cmds.push_back({s, [&] { return cmd_upper_bound(common, a); }});

  s = app.add_subcommand("sweep", "Run a parameter grid into a result store");
  s->add_option("--spec", a.spec)->required();
  s->add_option("--width", a.width, "Worker threads");
  cmds.push_back({s, [&] { return cmd_sweep(common, a); }});

  s = app.add_subcommand("verify", "Re-check stored certificates without the solver");
  s->add_option("--in", a.input)->required();
  cmds.push_back({s, [&] { return cmd_verify(common, a); }});

  try {
    std::vector<std::string> names;
    for (auto& [sub, fn] : cmds) names.push_back(sub->get_name());
    std::vector<std::string> args(argv, argv + argc);
    args = merge_config(std::move(args), names);
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    app.parse(std::move(rev));
    for (auto& [sub, fn] : cmds)
      if (sub->parsed()) return fn();
    return 1;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
}
