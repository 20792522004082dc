// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"

using namespace pindex;

namespace {

// time limits in seconds
constexpr double kSharpSmallLimit = 1.0;
constexpr double kSharpLocalLimit = 30.0;
constexpr double kIhcLimit = 60.0;
constexpr double kItcLargeLimit = 600.0;

// randomized suite sizes
constexpr int kKreschTrials = 50;
constexpr int kVanishingSamples = 20;
constexpr int kSolverTrials = 500;
constexpr int kDualBound = 8;
constexpr std::size_t kDualMaxRows = 6;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Check {
  bool ok = true;
  std::ostringstream why;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) why << what;
    ok = ok && cond;
  }
};

int failures = 0;

void run(int id, const std::string& name, const std::function<void(Check&)>& body) {
  Check c;
  auto t0 = Clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  double dt = seconds_since(t0);
  std::printf("criterion %d %-24s %s (%.2fs)%s%s\n", id, name.c_str(), c.ok ? "PASS" : "FAIL", dt,
              c.ok ? "" : ": ", c.ok ? "" : c.why.str().c_str());
  std::fflush(stdout);
  failures += !c.ok;
}

bool zero_witness(const Verdict& v) {
  if (!v.solvable()) return false;
  for (const auto& x : v.as_solvable().witness)
    if (x != 0) return false;
  return true;
}

ExteriorClass random_b(std::mt19937_64& rng, int g) { return oracle::random_class(rng, g, 2, 3, 0.5); }

/// Random system with A·c0 + t integral for some rational c0 when `solvable`.
ObstructionSystem random_system(std::mt19937_64& rng, std::size_t n, std::size_t h, bool solvable) {
  std::uniform_int_distribution<int> small(-2, 2), zero(0, 2);
  ObstructionSystem sys;
  sys.locality = Locality::global();
  sys.A = RatMatrix(n, h);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < h; ++j)
      if (zero(rng) == 0) sys.A(i, j) = oracle::random_rational(rng, 3, 3);
  sys.t.assign(n, Rational(0));
  if (solvable) {
    RatVector c0(h);
    for (auto& x : c0) x = oracle::random_rational(rng, 3, 4);
    for (std::size_t i = 0; i < n; ++i) {
      Rational v(small(rng));
      for (std::size_t j = 0; j < h; ++j) v -= sys.A(i, j) * c0[j];
      sys.t[i] = v;
    }
  } else {
    for (auto& x : sys.t) x = oracle::random_rational(rng, 3, 6);
  }
  for (std::size_t i = 0; i < n; ++i) sys.rows.push_back(RowLabel{});
  for (std::size_t j = 0; j < h; ++j) sys.cols.push_back(ColumnLabel{0, j});
  return sys;
}

} // namespace

int main() {
  run(1, "sharpness", [](Check& c) {
    auto t0 = Clock::now();
    BrauerScenario sc = BrauerScenario::standard(ProductRing(3), 2, 2);
    ObstructionSystem s2 = build_p_system(sc, 2), s4 = build_p_system(sc, 4);
    Verdict v2 = decide(s2), v4 = decide(s4);
    c.require(v2.obstructed() && verify_verdict(s2, v2), "(3,2,2) e=2 not a verified obstruction; ");
    c.require(v2.obstructed() && obstruction_denominator(v2.as_obstructed().violation, s2.locality) == 2,
              "(3,2,2) violation denominator is not 2; ");
    c.require(zero_witness(v4) && verify_verdict(s4, v4), "(3,2,2) e=4 lacks the zero witness; ");
    c.require(seconds_since(t0) < kSharpSmallLimit, "(3,2,2) over time; ");

    t0 = Clock::now();
    BrauerScenario lc = BrauerScenario::standard(ProductRing(4, Locality::local_at(3)), 3, 3);
    ObstructionSystem s9 = build_p_system(lc, 9), s27 = build_p_system(lc, 27);
    Verdict v9 = decide(s9), v27 = decide(s27);
    c.require(v9.obstructed() && verify_verdict(s9, v9), "(4,3,3) e=9 not a verified obstruction; ");
    c.require(v27.solvable() && verify_verdict(s27, v27), "(4,3,3) e=27 not solvable; ");
    c.require(s9.num_rows() <= 500, "(4,3,3) system larger than expected; ");
    c.require(seconds_since(t0) < kSharpLocalLimit, "(4,3,3) over time; ");
  });

  run(2, "kresch", [](Check& c) {
    ProductRing R(3);
    c.require(kresch_check(BrauerScenario::standard(R, 2, 2)).obstructed(), "standard b passes mod 4; ");
    std::mt19937_64 rng(2024);
    for (int k = 0; k < kKreschTrials; ++k) {
      int g = 2 + k % 4;
      BrauerScenario sc(ProductRing(g), random_b(rng, g), 2);
      Verdict a = kresch_check(sc), b = divisibility_obstruction(sc, 2);
      c.require(a.obstructed() == b.obstructed(), "disagreement on trial " + std::to_string(k) + "; ");
    }
  });

  run(3, "vanishing", [](Check& c) {
    VanishingDegrees v32 = vanishing_degree(3, 2), v33 = vanishing_degree(3, 3);
    c.require(v32.lcm_degree == 8, "(3,2) lcm degree is not 8; ");
    c.require(v33.lcm_degree == 18 && v33.obs_degree == 9, "(3,3) degrees are not (18, 9); ");
    std::mt19937_64 rng(55);
    for (int dim = 2; dim <= 6; ++dim)
      for (std::uint64_t n = 2; n <= 5; ++n)
        for (int k = 0; k < kVanishingSamples; ++k) {
          BrauerScenario sc(ProductRing(dim), random_b(rng, dim), n);
          VanishingWitness w = vanishing_witness(sc);
          std::string tag = "(" + std::to_string(dim) + "," + std::to_string(n) + ") ";
          c.require(w.e == vanishing_degree(dim, n).lcm_degree, tag + "wrong degree; ");
          c.require(w.verdict.solvable() && verify_verdict(w.system, w.verdict), tag + "witness fails; ");
          c.require(algebraicity_identity(sc, w.e), tag + "identity fails; ");
        }
  });

  run(4, "ihc", [](Check& c) {
    auto t0 = Clock::now();
    CounterexampleReport a = ihc_counterexample(3, 2);
    c.require(seconds_since(t0) < kIhcLimit, "(3,2) over time; ");
    ProductRing R(3);
    SBClass expect(3, 3);
    expect.add(3, R.one() * Rational(2));
    expect.add(2, R.standard_b(2) * Rational(3));
    expect.add(1, ExteriorClass::monomial(3, oracle::mask({0, 2, 3, 5}), Rational(-3)));
    c.require(a.r == 3 && a.delta == expect && a.delta_integral, "(3,2) delta differs; ");
    c.require(a.fibral == 2 && a.obstruction.obstructed() && a.obstruction_verified, "(3,2) certificate; ");
    t0 = Clock::now();
    CounterexampleReport b = ihc_counterexample(4, 3);
    c.require(seconds_since(t0) < kIhcLimit, "(4,3) over time; ");
    c.require(b.r == 26 && b.fibral == 9 && b.e_obstructed == 9 && b.ok(), "(4,3) report; ");
  });

  run(5, "itc", [](Check& c) {
    CounterexampleReport a = itc_counterexample(2, 3);
    c.require(a.dim_P == 6 && a.ok(), "ell=2; ");
    CounterexampleReport b = itc_counterexample(3, 2);
    c.require(b.dim_P == 30 && b.r == 26 && b.ok(), "ell=3; ");
    auto t0 = Clock::now();
    CounterexampleReport d = itc_counterexample(5, 2);
    c.require(seconds_since(t0) < kItcLargeLimit, "ell=5 over time; ");
    c.require(d.g == 6 && d.r == 3124 && d.dim_P == 3130 && d.ok(), "ell=5; ");
    c.require(ProductRing(6).rank() == 4096, "ring rank; ");
  });

  run(6, "hodge-index-gap", [](Check& c) {
    BrauerScenario sc = BrauerScenario::standard(ProductRing(3), 2, 2);
    Integer idx = hodge_index_wrt_P(sc, 3);
    ObstructionSystem s2 = build_p_system(sc, 2);
    Verdict v = decide(s2);
    c.require(idx == 2, "index wrt P is not 2; ");
    c.require(v.obstructed() && verify_verdict(s2, v), "e=2 obstruction not verified; ");
    ObstructionSystem q = build_q_system(sc, 3, 2);
    Verdict qv = decide(q);
    c.require(qv.solvable() && verify_verdict(q, qv), "degree 2 not attained on P; ");
  });

  run(7, "upper-bound", [](Check& c) {
    c.require(matzri_exponent(3, 2) == 3, "matzri; ");
    UpperBoundInputs in;
    in.dim = 3;
    in.h2tors = 2;
    in.degrees = {Integer(2)};
    c.require(cycle_exponent(in) == 6, "cycle exponent; ");
    SurfaceBound sb = surface_bound({Integer(2), Integer(3)});
    c.require(sb.C == 720 && sb.N == 5, "surface bound; ");
  });

  run(8, "solver-soundness", [](Check& c) {
    std::mt19937_64 rng(8088);
    std::uniform_int_distribution<std::size_t> rows(1, 40), cols(0, 12), small_rows(1, kDualMaxRows), small_cols(0, 3);
    int dual_checked = 0;
    for (int k = 0; k < kSolverTrials; ++k) {
      bool small = k % 5 == 0;
      std::size_t n = small ? small_rows(rng) : rows(rng);
      std::size_t h = small ? std::min(small_cols(rng), n) : cols(rng);
      ObstructionSystem sys = random_system(rng, n, h, k % 2 == 0);
      Verdict v = decide(sys);
      c.require(verify_verdict(sys, v), "verdict fails on trial " + std::to_string(k) + "; ");
      if (k % 2 == 0) c.require(v.solvable(), "constructed-solvable system obstructed; ");
      if (small && v.solvable()) {
        ++dual_checked;
        c.require(!oracle::small_dual_obstruction_exists(sys, kDualBound),
                  "dual search contradicts trial " + std::to_string(k) + "; ");
      }
    }
    c.require(dual_checked > 0, "no dual checks ran; ");
  });

  run(9, "convention-independence", [](Check& c) {
    std::mt19937_64 rng(99);
    for (int g = 2; g <= 5; ++g)
      for (int t = 1; t <= g - 1; ++t)
        for (std::uint64_t n : {2, 3, 4, 5}) {
          if (divides(n, factorial(static_cast<std::uint64_t>(t - 1)))) continue;
          ProductRing base(g);
          ProductRing perm(g, Locality::global(), oracle::random_order(rng, g));
          BrauerScenario a = BrauerScenario::standard(base, t, n);
          BrauerScenario b = BrauerScenario::standard(perm, t, n);
          for (std::uint64_t e : {to_u64(power(n, static_cast<std::uint64_t>(t - 1))),
                                  to_u64(power(n, static_cast<std::uint64_t>(t)))}) {
            Verdict va = divisibility_obstruction(a, e), vb = divisibility_obstruction(b, e);
            std::string tag = "(" + std::to_string(g) + "," + std::to_string(t) + "," + std::to_string(n) + ") ";
            c.require(va.status() == vb.status(), tag + "variant changed; ");
            if (va.obstructed() && vb.obstructed())
              c.require(obstruction_denominator(va.as_obstructed().violation, a.locality()) ==
                            obstruction_denominator(vb.as_obstructed().violation, b.locality()),
                        tag + "denominator changed; ");
          }
        }
  });

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
