// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "charlab/charstats.hpp"
#include "charlab/characters.hpp"
#include "charlab/lfun.hpp"
#include "charlab/modarith.hpp"
#include "charlab/resonance.hpp"
#include "charlab/zeros.hpp"

#ifndef CHARLAB_CLI_PATH
#define CHARLAB_CLI_PATH "charlab"
#endif

using namespace charlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    pass = false;
    note(why);
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for_each_prime(lo, hi, [&](std::uint64_t p) { out.push_back(p); });
  return out;
}

Outcome criterion1() {
  Outcome o;
  const std::uint64_t terms = 1000000;
  double worst = 0.0, worst_chi0_direct = 0.0;
  for (auto q : primes_between(3, 101)) {
    const auto ctx = build_context(q);
    // the direct series grouped by residue class, summed smallest terms first
    std::vector<double> w(q, 0.0);
    for (std::uint64_t n = terms; n >= 1; --n) w[n % q] += 1.0 / (double(n) * double(n));
    const HurwitzRow row(ctx, cplx(2.0, 0.0));
    for (std::uint64_t e = 0; e < q - 1; ++e) {
      const Character chi(ctx, e);
      cplx direct = 0.0;
      for (std::uint64_t a = 1; a < q; ++a) direct += chi(a) * w[a];
      const double d = std::abs(l_oracle(chi, cplx(2.0, 0.0)).value - direct);
      if (e == 0) {
        worst_chi0_direct = std::max(worst_chi0_direct, d);
        continue;
      }
      worst = std::max(worst, d);
    }
    const double z = M_PI * M_PI / 6.0 * (1.0 - 1.0 / double(q * q));
    const double d0 = std::abs(l_oracle(Character(ctx, 0), cplx(2.0, 0.0)).value - z);
    if (d0 > 1e-10) o.fail("chi_0 at q=" + std::to_string(q) + " off by " + fmt("%.3g", d0));
  }
  if (worst > 1e-9) o.fail("non-principal max diff " + fmt("%.3g", worst));
  o.note("non-principal max |oracle - direct| = " + fmt("%.3g", worst));
  o.note("chi_0 checked against zeta(2)(1-q^-2); its 1e6-term truncation differs by the series tail " +
         fmt("%.3g", worst_chi0_direct));
  const auto c3 = build_context(3);
  const double d3 = std::abs(l_oracle(Character(c3, 1), cplx(1.0, 0.0)).value - M_PI / (3.0 * std::sqrt(3.0)));
  if (d3 > 1e-9) o.fail("L(1, chi mod 3) off by " + fmt("%.3g", d3));
  return o;
}

Outcome criterion2() {
  Outcome o;
  double worst = 0.0;
  for (std::uint64_t q : {13ull, 101ull, 499ull}) {
    const auto ctx = build_context(q);
    const HurwitzRow row(ctx, cplx(0.5, 0.0));
    const AfeEvaluator even(ctx, 0.0, 0), odd(ctx, 0.0, 1);
    for (std::uint64_t e = 1; e < q - 1; ++e) {
      const Character chi(ctx, e);
      const auto a = (e % 2 == 0 ? even : odd).evaluate(chi).value;
      worst = std::max(worst, std::abs(a - row.evaluate(chi).value));
    }
  }
  if (worst > 1e-6) o.fail("max diff above 1e-6");
  o.note("max |afe - oracle| = " + fmt("%.3g", worst));
  return o;
}

Outcome criterion3() {
  Outcome o;
  double worst = 0.0;
  std::uint64_t identities = 0;
  for (auto q : primes_between(3, 200)) {
    const auto ctx = build_context(q);
    const std::uint64_t n = q - 1;
    // row sums: sum_a chi(a) = (q-1) [chi = chi_0], which is orthogonality of any pair
    for (std::uint64_t e = 0; e < n; ++e) {
      cplx s = 0.0;
      for (std::uint64_t a = 1; a < q; ++a) s += Character(ctx, e)(a);
      worst = std::max(worst, std::abs(s - cplx(e == 0 ? double(n) : 0.0, 0.0)));
      ++identities;
    }
    for (auto H : ctx.divisors_of_order()) {
      const auto chars = subgroup(ctx, H).characters(ctx);
      const auto ker = kernel(ctx, H);
      for (std::uint64_t a = 1; a < q; ++a) {
        cplx s = 0.0;
        for (const auto& chi : chars) s += chi(a);
        const bool in_ker = std::binary_search(ker.begin(), ker.end(), a);
        worst = std::max(worst, std::abs(s - cplx(in_ker ? double(H) : 0.0, 0.0)));
        ++identities;
      }
    }
  }
  if (worst > 1e-9) o.fail("orthogonality residual " + fmt("%.3g", worst));
  o.note(std::to_string(identities) + " identities, max residual " + fmt("%.3g", worst));

  double worst_rel = 0.0;
  int configs = 0;
  const std::uint64_t qs[] = {101, 199, 499, 1009};
  const double Xs[] = {5, 7, 11, 13, 17};
  for (auto q : qs) {
    const auto ctx = build_context(q);
    const auto divs = ctx.divisors_of_order();
    for (std::size_t i = 0; i < 5; ++i) {
      const auto R = build_resonator(ResonatorMode::thm11, Xs[i], 100000);
      const auto H = divs[(divs.size() - 1) - (i * 3) % divs.size()];
      const double k = s2_kernel_form(ctx, H, R), c = s2_character_form(ctx, H, R);
      worst_rel = std::max(worst_rel, std::abs(k - c) / c);
      ++configs;
    }
  }
  if (worst_rel > 1e-8) o.fail("kernel form off by " + fmt("%.3g", worst_rel));
  o.note(std::to_string(configs) + " S2 configurations, max rel diff " + fmt("%.3g", worst_rel));
  return o;
}

Outcome criterion4() {
  Outcome o;
  int ok = 0, below_ok = 0;
  std::string below_bad;
  for (std::uint64_t q : {499ull, 1009ull}) {
    const auto ctx = build_context(q);
    const ResonanceConfig cfg;
    const double kappa = cfg.resolved().kappa;
    const EulerProductTable table(ctx, cfg.euler_cutoff, 1.0);
    for (auto H : ctx.divisors_of_order()) {
      if (H < 4) continue;
      const std::string tag = std::to_string(q) + ":" + std::to_string(H);
      const double X = kappa * log1_floor(double(H)) * log2_floor(double(H));
      if (X >= 3.0) {
        const auto rep = resonance_sigma1(ctx, H, cfg, &table);
        if (rep.verified)
          ++ok;
        else
          o.fail(tag + (rep.bound_ok ? "" : " bound") + (rep.max_ok ? "" : " max"));
        continue;
      }
      // below the X >= 3 length contract: run the chain at the computed X (for X < 2 the product is empty)
      ResonanceConfig forced = cfg;
      forced.length_override = std::max(X, 2.0);
      const auto rep = resonance_sigma1(ctx, H, forced, &table);
      if (rep.verified) {
        ++below_ok;
        continue;
      }
      o.pass = false;
      below_bad += (below_bad.empty() ? "" : ",") + tag + (rep.bound_ok ? "" : " bound") + (rep.max_ok ? "" : " max") +
                   " (ratio " + fmt("%.3f", rep.ratio) + ", max " + fmt("%.3f", rep.witness_value) + ")";
    }
  }
  o.note(std::to_string(ok) + " pairs with X >= 3 all verified");
  o.note(std::to_string(below_ok) + " pairs with X < 3 verified at their computed X");
  if (!below_bad.empty()) o.note("violations with X < 3, where the chi_0 term dominates S1: " + below_bad);
  return o;
}

Outcome criterion5() {
  Outcome o;
  int ok = 0, vacuous = 0;
  for (std::uint64_t q : {101ull, 499ull, 1009ull}) {
    const auto ctx = build_context(q);
    const HurwitzRow row(ctx, cplx(0.5, 0.0));
    for (auto H : ctx.divisors_of_order()) {
      if (H % 2 != 0) continue;
      if (H == 2) {  // H+ = {chi_0}: nothing to maximize over
        ++vacuous;
        continue;
      }
      const auto rep = resonance_half_line(ctx, H, 0, BlockParams{}, &row);
      if (rep.verified)
        ++ok;
      else
        o.fail("q=" + std::to_string(q) + " H=" + std::to_string(H));
    }
  }
  o.note(std::to_string(ok) + " even subgroups verified (max, S1 <= (q-1)h, mass = #M <= h); " +
         std::to_string(vacuous) + " with H+ = {chi_0} vacuous");
  return o;
}

Outcome criterion6() {
  Outcome o;
  const double x4 = lemma_q2_product(4.0).exact;
  const double ref = std::log(4.0 / 3.0) + std::log(16.0 / 15.0);
  if (std::abs(x4 - ref) > 1e-12) o.fail("X=4 value off");
  double prev = INFINITY;
  std::string devs;
  for (double X : {1e3, 1e4, 1e5, 1e6}) {
    const double d = lemma_q2_product(X).relative_deviation();
    if (d > prev) o.fail("deviation increased at X=" + fmt("%g", X));
    prev = d;
    devs += (devs.empty() ? "" : ",") + fmt("%.4f", d);
  }
  if (prev > 0.5) o.fail("deviation at 1e6 above 0.5");
  o.note("X=4: " + fmt("%.15f", x4) + "; rel deviations " + devs);
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto ctx = build_context(101);
  const Character chi(ctx, 10);
  const double L2 = std::norm(l_oracle(chi, cplx(0.5, 0.0)).value);
  const double m = w0_moment_half(chi);
  if (std::abs(m - L2) > 1e-4) o.fail("moment mismatch");
  o.note("|L|^2 = " + fmt("%.12f", L2) + ", series diff " + fmt("%.3g", std::abs(m - L2)));
  return o;
}

struct GridTriple {
  std::uint64_t q, H, N;
};

std::vector<GridTriple> random_grid() {
  std::mt19937_64 rng(20240611);
  const auto ps = primes_between(3, 2003);
  std::vector<GridTriple> out;
  while (out.size() < 200) {
    const auto q = ps[rng() % ps.size()];
    const auto ctx = build_context(q);
    const auto divs = ctx.divisors_of_order();
    const auto H = divs[rng() % divs.size()];
    const auto N = 1 + rng() % q;
    out.push_back({q, H, N});
  }
  return out;
}

std::vector<cplx> random_phases(std::uint64_t N, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
  std::vector<cplx> a(N);
  for (auto& x : a) x = std::polar(1.0, ph(rng));
  return a;
}

Outcome criterion8() {
  Outcome o;
  const auto c5 = build_context(5);
  const double m5 = mean_value_M(c5, CharacterSet::from_exponents(c5, {0, 2}), 3, std::vector<cplx>(3, 1.0)).M;
  if (m5 != 2.0) o.fail("q=5 example gave " + fmt("%.17g", m5));

  std::mt19937_64 rng(99);
  double worst_parseval = 0.0;
  for (auto q : primes_between(3, 199)) {
    const auto ctx = build_context(q);
    const std::uint64_t N = 1 + rng() % (q - 1);
    const auto alpha = random_phases(N, rng);
    const auto all = subgroup(ctx, q - 1);
    // sum_{r,s} |sum alpha chi_r conj chi_s|^2 = (q-1) sum_chi |sum alpha chi|^2 = (q-1)^2 sum |alpha|^2
    const auto hb = hb_double_sum(ctx, all.characters(ctx), N, alpha);
    const double expect = double(q - 1) * double(q - 1) * double(N);
    worst_parseval = std::max(worst_parseval, std::abs(hb.value - expect) / expect);
    // Cauchy-Schwarz ties the first moment to the same quantity
    const auto mv = mean_value_M(ctx, all, N, alpha);
    if (mv.M > std::sqrt(double(N)) * (1 + 1e-9)) o.fail("mean exceeds Parseval bound at q=" + std::to_string(q));
  }
  if (worst_parseval > 1e-6) o.fail("Parseval rel diff " + fmt("%.3g", worst_parseval));

  double worst_ratio = 0.0;
  std::mt19937_64 arng(5);
  for (const auto& t : random_grid()) {
    const auto ctx = build_context(t.q);
    const auto rep = mean_value_M(ctx, subgroup(ctx, t.H), t.N, random_phases(t.N, arng));
    worst_ratio = std::max(worst_ratio, rep.ratio);
  }
  if (worst_ratio > 100.0) o.fail("envelope ratio above 100");
  o.note("q=5 M=" + fmt("%g", m5) + "; Parseval max rel " + fmt("%.3g", worst_parseval) +
         "; max M/envelope over 200 triples " + fmt("%.4f", worst_ratio));
  return o;
}

Outcome criterion9() {
  Outcome o;
  double worst_ratio = 0.0;
  std::mt19937_64 arng(6);
  for (const auto& t : random_grid()) {
    const auto ctx = build_context(t.q);
    const auto rep = hb_double_sum(ctx, subgroup(ctx, t.H).characters(ctx), t.N, random_phases(t.N, arng));
    worst_ratio = std::max(worst_ratio, rep.value / rep.envelope);
  }
  if (worst_ratio > 100.0) o.fail("envelope ratio above 100");
  // R = 1: the inner sum is sum alpha_n, so the value is |sum alpha_n|^2
  const auto ctx = build_context(1009);
  std::mt19937_64 rng(8);
  double worst_r1 = 0.0;
  for (std::uint64_t N : {1ull, 10ull, 500ull, 1008ull}) {
    const auto alpha = random_phases(N, rng);
    cplx s = 0.0;
    for (const auto& a : alpha) s += a;
    const auto rep = hb_double_sum(ctx, {Character(ctx, 17)}, N, alpha);
    worst_r1 = std::max(worst_r1, std::abs(rep.value - std::norm(s)) / std::max(1.0, std::norm(s)));
    const auto ones = hb_double_sum(ctx, {Character(ctx, 17)}, N, std::vector<cplx>(N, 1.0));
    if (ones.value != double(N) * double(N)) o.fail("R=1 with unit coefficients is not N^2");
  }
  if (worst_r1 > 1e-12) o.fail("R=1 closed form off by " + fmt("%.3g", worst_r1));
  o.note("max value/envelope over 200 triples " + fmt("%.4f", worst_ratio) + "; R=1 rel diff " +
         fmt("%.3g", worst_r1));
  return o;
}

Outcome criterion10() {
  Outcome o;
  for (std::uint64_t q : {101ull, 199ull}) {
    const auto ctx = build_context(q);
    std::uint64_t H = 1;
    for (auto d : ctx.divisors_of_order())
      if (double(d) <= std::pow(double(q), 2.0 / 3.0)) H = d;
    const auto agg = zero_density_aggregate(ctx, subgroup(ctx, H), 0.6, 5.0);
    if (agg.total != 0) o.fail("q=" + std::to_string(q) + " total " + std::to_string(agg.total));
    o.note("q=" + std::to_string(q) + " H=" + std::to_string(H) + " total=" + std::to_string(agg.total));
  }
  int chars = 0, mismatches = 0;
  std::int64_t zeros = 0;
  for (auto q : primes_between(3, 50)) {
    const auto ctx = build_context(q);
    std::vector<Character> all;
    for (std::uint64_t e = 0; e < q - 1; ++e) all.emplace_back(ctx, e);
    const auto z = critical_line_sign_changes(ctx, all, 5.0);
    ZeroCounter zc(ctx);
    for (std::size_t i = 0; i < all.size(); ++i) {
      const auto rep = zc.count(all[i], 0.25, 5.0);
      ++chars;
      zeros += rep.count;
      if (rep.count != z[i]) {
        ++mismatches;
        o.fail("q=" + std::to_string(q) + " e=" + std::to_string(all[i].e) + ": " + std::to_string(rep.count) +
               " vs " + std::to_string(z[i]));
      }
    }
  }
  o.note(std::to_string(chars) + " characters with q <= 50, " + std::to_string(zeros) + " zeros, " +
         std::to_string(mismatches) + " mismatches");
  return o;
}

Outcome criterion11() {
  Outcome o;
  // sum_a f = H N on a set of triples
  int triples = 0;
  for (std::uint64_t q : {13ull, 101ull, 499ull, 1009ull}) {
    const auto ctx = build_context(q);
    for (std::uint64_t H : std::vector<std::uint64_t>{1, 3, 7, q / 2, q})
      for (std::uint64_t N : std::vector<std::uint64_t>{1, 5, q / 3, q - 1}) {
        std::uint64_t s = 0;
        for (auto f : window_counts(ctx, H, N)) s += f;
        if (s != H * N) o.fail("sum f at q=" + std::to_string(q));
        ++triples;
      }
  }
  const auto c13 = build_context(13);
  const double v13 = variance_V(c13, 4, 12).V;
  if (std::abs(v13 - (4.0 / 13.0) * (9.0 / 13.0)) > 1e-12) o.fail("V(4, 12) at q=13 off");

  const auto ctx = build_context(10007);
  const double qd = 10007.0;
  const auto N1 = static_cast<std::uint64_t>(std::ceil(std::pow(qd, 0.72)));
  const auto H1 = static_cast<std::uint64_t>(std::ceil(std::pow(qd, 0.45)));
  const auto vr = variance_V(ctx, H1, N1);
  const double ratio = vr.V / (double(H1) * double(N1));
  if (!(ratio >= 0.7 && ratio <= 1.3)) o.fail("V/(HN) = " + fmt("%.4g", ratio) + " outside [0.7, 1.3]");

  for (std::uint64_t N : {1ull, 100ull, 10006ull})
    if (pair_correlation_R2(ctx, N, 1, 0.0, 1.0).value != double(N - 1)) o.fail("full-window R2 != N-1");

  const auto N2 = static_cast<std::uint64_t>(std::ceil(std::pow(qd, 0.7)));
  std::string r2s;
  for (double g : {0.5, 1.0, 2.0}) {
    double acc = 0.0;
    for (int k = 0; k < 10; ++k) acc += pair_correlation_R2(ctx, N2, N2, 0.1 * k, g).value;
    const double mean = acc / 10.0;
    if (std::abs(mean - g) > 0.2 * g + 0.05) o.fail("R2 mean " + fmt("%.4f", mean) + " for gamma " + fmt("%g", g));
    r2s += (r2s.empty() ? "" : ",") + fmt("%.4f", mean);
  }
  o.note(std::to_string(triples) + " sum identities; V(4,12)=" + fmt("%.15f", v13) + "; q=10007 N=" +
         std::to_string(N1) + " H=" + std::to_string(H1) + " V/(HN)=" + fmt("%.4g", ratio) +
         " (q V/(HN)=" + fmt("%.4f", qd * ratio) + "); R2 means " + r2s);
  return o;
}

Outcome criterion12() {
  Outcome o;
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "charlab_acceptance";
  fs::create_directories(dir);
  const std::string cli = CHARLAB_CLI_PATH;
  std::vector<std::string> outs;
  for (int threads : {1, 3}) {
    const auto out = (dir / ("run_t" + std::to_string(threads) + ".jsonl")).string();
    const std::string cmd = "\"" + cli + "\" extreme-half --q 101,499 --threads " + std::to_string(threads) +
                            " --out \"" + out + "\" 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    if (rc != 0) o.fail("CLI exit status " + std::to_string(rc));
    outs.push_back(out);
  }
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  const auto a = slurp(outs[0]), b = slurp(outs[1]);
  if (a.empty()) o.fail("empty data file");
  if (a != b) o.fail("data files differ between 1 and 3 threads");
  o.note(std::to_string(a.size()) + " bytes compared");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3,  criterion4,
                                                          criterion5, criterion6, criterion7,  criterion8,
                                                          criterion9, criterion10, criterion11, criterion12};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i]();
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!out.pass) ++failures;
    std::printf("CRITERION %zu %s (%.1fs): %s\n", i + 1, out.pass ? "PASS" : "FAIL", secs, out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
