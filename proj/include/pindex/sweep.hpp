#pragma once

// Parameter sweeps over (g, t, n, e, locality) with a JSON Lines result
// store keyed by a hash of the canonical cell description.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "pindex/errors.hpp"
#include "pindex/json_io.hpp"
#include "pindex/obstruction.hpp"

namespace pindex {

using nlohmann::json;

/// FNV-1a, 64 bit, as 16 hex digits.
inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Records keyed by hash; loading then flushing an unchanged store is a no-op.
class ResultStore {
public:
  explicit ResultStore(std::string path) : path_(std::move(path)) {}

  void load() {
    std::ifstream in(path_);
    if (!in) return;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json rec;
      try {
        rec = json::parse(line);
      } catch (const json::exception&) {
        throw InputError("result store " + path_ + " has a malformed line");
      }
      put(rec);
    }
  }

  static std::string key_of(const json& cell) { return fnv1a_hex(cell.dump()); }

  /// Inserts or replaces; `record` must carry "cell".
  void put(json record) {
    std::string key = key_of(record.at("cell"));
    record["key"] = key;
    records_[key] = std::move(record);
  }

  const std::map<std::string, json>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  void flush() const {
    std::ofstream out(path_, std::ios::trunc);
    if (!out) throw InputError("cannot write result store " + path_);
    for (const auto& [k, rec] : records_) out << rec.dump() << '\n';
  }

private:
  std::string path_;
  std::map<std::string, json> records_;
};

struct SweepSpec {
  std::vector<int> gs;
  std::vector<std::string> ts; // integers or "g-1"
  std::vector<std::uint64_t> ns;
  std::vector<std::uint64_t> es; // empty: run the sharpness pair e = n^(t-1), n^t
  std::vector<Locality> localities{Locality::global()};
  std::string out;
  unsigned width = 1;
};

inline SweepSpec sweep_spec_from_json(const json& j) {
  using json_io::field;
  SweepSpec s;
  s.gs = field<std::vector<int>>(j, "g");
  if (j.contains("t")) {
    for (const auto& t : j.at("t")) s.ts.push_back(t.is_string() ? t.get<std::string>() : std::to_string(t.get<int>()));
  } else {
    s.ts = {"g-1"};
  }
  s.ns = field<std::vector<std::uint64_t>>(j, "n");
  if (j.contains("e")) s.es = field<std::vector<std::uint64_t>>(j, "e");
  if (j.contains("locality")) {
    s.localities.clear();
    for (const auto& l : j.at("locality")) s.localities.push_back(json_io::locality_from(l));
  }
  if (j.contains("out")) s.out = field<std::string>(j, "out");
  if (j.contains("width")) s.width = std::max(1u, field<unsigned>(j, "width"));
  return s;
}

namespace detail {

struct Cell {
  int g;
  std::string t_spec;
  std::uint64_t n;
  std::optional<std::uint64_t> e;
  Locality loc;

  json describe() const {
    json c = {{"g", g}, {"t", t_spec}, {"n", n}, {"locality", json_io::locality_json(loc)}};
    c["e"] = e ? json(*e) : json(nullptr);
    return c;
  }
};

inline int resolve_t(const std::string& spec, int g) {
  if (spec == "g-1") return g - 1;
  if (spec == "g-2") return g - 2;
  if (spec.empty() || spec.find_first_not_of("0123456789") != std::string::npos)
    throw InputError("t must be an integer, \"g-1\" or \"g-2\", got '" + spec + "'");
  return std::stoi(spec);
}

inline json run_cell(const Cell& cell) {
  json rec = {{"cell", cell.describe()}};
  try {
    int t = resolve_t(cell.t_spec, cell.g);
    if (cell.e) {
      BrauerScenario sc = BrauerScenario::standard(ProductRing(cell.g, cell.loc), t, cell.n);
      ObstructionSystem sys = build_p_system(sc, *cell.e);
      Verdict v = decide(sys);
      if (!verify_verdict(sys, v)) throw InternalError("verdict failed verification");
      rec["status"] = v.status();
      rec["checks"] = json::array({json_io::p_check(sc, *cell.e, sys, v)});
    } else {
      SharpnessReport rep = sharpness_certificate(cell.g, t, cell.n, cell.loc);
      json r = json_io::to_json(rep);
      rec["status"] = rep.conclusion == SharpnessConclusion::Inconclusive ? "inconclusive" : rep.lower.status();
      rec["report"] = r;
      rec["checks"] = r.at("checks");
      rec["report"].erase("checks");
    }
  } catch (const InputError& err) {
    rec["status"] = "skipped";
    rec["reason"] = err.what();
  } catch (const InternalError& err) {
    rec["status"] = "failed";
    rec["reason"] = err.what();
  }
  return rec;
}

} // namespace detail

struct SweepSummary {
  std::map<std::string, std::size_t> counts; // status -> cells
  std::size_t cells = 0;
  bool all_completed() const { return !counts.count("failed"); }
};

/// Runs every cell; the store's content does not depend on `width`.
inline SweepSummary run_sweep(const SweepSpec& spec, ResultStore& store) {
  std::vector<detail::Cell> cells;
  for (int g : spec.gs)
    for (const auto& t : spec.ts)
      for (std::uint64_t n : spec.ns)
        for (const auto& loc : spec.localities) {
          if (spec.es.empty()) {
            cells.push_back({g, t, n, std::nullopt, loc});
          } else {
            for (std::uint64_t e : spec.es) cells.push_back({g, t, n, e, loc});
          }
        }
  std::vector<json> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) results[i] = detail::run_cell(cells[i]);
  };
  unsigned width = std::max(1u, std::min<unsigned>(spec.width, static_cast<unsigned>(std::max<std::size_t>(cells.size(), 1))));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < width; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  SweepSummary sum;
  sum.cells = cells.size();
  for (auto& rec : results) {
    ++sum.counts[rec.at("status").get<std::string>()];
    store.put(std::move(rec));
  }
  return sum;
}

} // namespace pindex
