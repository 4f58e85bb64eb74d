#include "charlab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "charlab/charstats.hpp"
#include "charlab/characters.hpp"
#include "charlab/lfun.hpp"
#include "charlab/modarith.hpp"
#include "charlab/resonance.hpp"
#include "charlab/zeros.hpp"

#ifndef CHARLAB_VERSION
#define CHARLAB_VERSION "0.0.0"
#endif

namespace charlab {

Record& Record::set(std::string key, Value v) {
  for (auto& kv : fields_)
    if (kv.first == key) {
      kv.second = std::move(v);
      return *this;
    }
  fields_.emplace_back(std::move(key), std::move(v));
  return *this;
}

const Record::Value* Record::find(const std::string& key) const {
  for (const auto& kv : fields_)
    if (kv.first == key) return &kv.second;
  return nullptr;
}

std::vector<std::uint64_t> parse_q_spec(const std::string& spec) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(spec);
  std::string item;
  auto to_u64 = [&](const std::string& s) -> std::uint64_t {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad integer in q specification: '" + s + "'");
    }
    if (pos != s.size()) throw std::invalid_argument("bad integer in q specification: '" + s + "'");
    return v;
  };
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }), item.end());
    if (item.empty()) continue;
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(to_u64(item));
      continue;
    }
    const auto lo = to_u64(item.substr(0, dash)), hi = to_u64(item.substr(dash + 1));
    if (hi < lo) throw std::invalid_argument("empty q range: " + item);
    if (hi - lo > 10000000) throw std::invalid_argument("q range too long: " + item);
    for (auto v = lo; v <= hi; ++v) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace {

using u64 = std::uint64_t;

// Subgroup orders picked by the selector for one modulus.
std::vector<u64> select_orders(const ModulusContext& ctx, const std::string& sel, std::vector<std::string>& rejected) {
  const auto divs = ctx.divisors_of_order();
  if (sel == "all") return divs;
  std::vector<u64> out;
  if (sel == "even") {
    for (auto d : divs)
      if (d % 2 == 0) out.push_back(d);
    return out;
  }
  for (auto v : parse_q_spec(sel)) {
    if (v != 0 && ctx.order() % v == 0)
      out.push_back(v);
    else
      rejected.push_back(std::to_string(v));
  }
  return out;
}

std::vector<double> exponents_or(const std::vector<double>& given, std::vector<double> fallback) {
  return given.empty() ? fallback : given;
}

u64 ceil_pow(double q, double theta) {
  const double v = std::ceil(std::pow(q, theta) - 1e-9);
  return v < 1.0 ? 1 : static_cast<u64>(v);
}

// State shared by every work item of one modulus. Tables are read-only once built.
struct ModulusState {
  u64 q = 0;
  std::string error;
  std::unique_ptr<ModulusContext> ctx;
  std::vector<u64> orders;
  std::vector<std::string> rejected;
  std::unique_ptr<EulerProductTable> euler;
  std::unique_ptr<PrimeSumTable> primes;
  std::unique_ptr<HurwitzRow> row;
};

struct WorkItem {
  std::size_t state = 0;
  u64 H = 0;
  double theta = 0.0;  // N exponent where the subcommand uses one
  double gamma = 0.0;
};

struct Runner {
  const RunConfig& cfg;
  std::string id;

  double sigma_or(double fallback) const { return cfg.sigma > 0.0 ? cfg.sigma : fallback; }

  Record base(u64 q) const {
    Record r;
    r.set("run_id", id);
    r.set("subcommand", cfg.subcommand);
    r.set("q", q);
    return r;
  }

  void prepare(ModulusState& st) const {
    try {
      st.ctx = std::make_unique<ModulusContext>(build_context(st.q));
    } catch (const std::exception& e) {
      st.error = e.what();
      return;
    }
    const auto& ctx = *st.ctx;
    if (cfg.subcommand == "spacings" || cfg.subcommand == "paircorr") return;
    st.orders = select_orders(ctx, cfg.subgroups, st.rejected);
    if (cfg.subcommand == "extreme-s1" && !st.orders.empty()) {
      st.euler = std::make_unique<EulerProductTable>(ctx, cfg.cutoff_euler, 1.0);
    } else if (cfg.subcommand == "extreme-sigma" && !st.orders.empty()) {
      const double s = sigma_or(0.75);
      st.primes = std::make_unique<PrimeSumTable>(ctx, s, cfg.prime_cutoff);
      st.row = std::make_unique<HurwitzRow>(ctx, cplx(s, 0.0));
    } else if (cfg.subcommand == "extreme-half" && !st.orders.empty()) {
      st.row = std::make_unique<HurwitzRow>(ctx, cplx(0.5, 0.0));
    }
  }

  std::vector<WorkItem> items(const std::vector<ModulusState>& states) const {
    std::vector<WorkItem> out;
    for (std::size_t i = 0; i < states.size(); ++i) {
      const auto& st = states[i];
      if (!st.error.empty()) {
        out.push_back({i, 0, 0.0, 0.0});
        continue;
      }
      const auto& sc = cfg.subcommand;
      if (sc == "meanvalue" || sc == "hbsum") {
        for (auto H : st.orders)
          for (double th : exponents_or(cfg.n_exponents, {0.5, 0.75})) out.push_back({i, H, th, 0.0});
      } else if (sc == "spacings") {
        for (double th : exponents_or(cfg.n_exponents, {0.72})) out.push_back({i, 0, th, 0.0});
      } else if (sc == "paircorr") {
        for (double th : exponents_or(cfg.n_exponents, {0.7}))
          for (double g : cfg.gammas) out.push_back({i, 0, th, g});
      } else {
        for (auto H : st.orders) out.push_back({i, H, 0.0, 0.0});
      }
    }
    return out;
  }

  static void put_report(Record& r, const ResonanceReport& rep) {
    r.set("mode", std::string(to_string(rep.mode)));
    r.set("size", rep.size);
    r.set("param", rep.param);
    r.set("S1_re", rep.S1.real());
    r.set("S1_im", rep.S1.imag());
    r.set("S2", rep.S2);
    r.set("ratio", rep.ratio);
    r.set("lower_bound", rep.lower_bound);
    r.set("chi0_term", rep.chi0_term);
    r.set("witness_e", rep.witness_e);
    r.set("witness_value", rep.witness_value);
    r.set("truncation_error", rep.truncation_error);
    r.set("bound_ok", rep.bound_ok);
    r.set("max_ok", rep.max_ok);
    for (const auto& [k, v] : rep.extras) r.set(k, v);
    r.set("verified", rep.verified);
  }

  ResonanceConfig resonance_config() const {
    ResonanceConfig rc;
    rc.euler_cutoff = cfg.cutoff_euler;
    rc.resonator_cutoff = cfg.cutoff_resonator;
    rc.sigma = sigma_or(0.75);
    rc.prime_cutoff = cfg.prime_cutoff;
    rc.b_form = cfg.b_form;
    return rc;
  }

  void run_item(const ModulusState& st, const WorkItem& it, Record& r) const {
    const auto& ctx = *st.ctx;
    const auto& sc = cfg.subcommand;
    const double qd = static_cast<double>(ctx.q());
    if (sc == "extreme-s1") {
      r.set("cutoff_euler", cfg.cutoff_euler);
      r.set("cutoff_resonator", cfg.cutoff_resonator);
      put_report(r, resonance_sigma1(ctx, it.H, resonance_config(), st.euler.get()));
    } else if (sc == "extreme-sigma") {
      const auto rc = resonance_config();
      r.set("sigma", rc.sigma);
      r.set("prime_cutoff", rc.prime_cutoff);
      r.set("b_form", std::string(to_string(rc.b_form)));
      put_report(r, resonance_sigma_interior(ctx, it.H, rc, st.primes.get(), st.row.get()));
    } else if (sc == "extreme-half") {
      if (it.H % 2 != 0) throw SubgroupTooSmall("odd H has no even half subgroup");
      if (it.H == 2) throw SubgroupTooSmall("H = 2 leaves only the principal character");
      BlockParams bp;
      bp.gamma = cfg.block_gamma;
      bp.per_block = cfg.block_primes;
      r.set("block_gamma", bp.gamma);
      r.set("block_primes", bp.per_block);
      r.set("afe_A", static_cast<std::int64_t>(cfg.afe_A));
      const auto rep = resonance_half_line(ctx, it.H, cfg.h, bp, st.row.get());
      put_report(r, rep);
      // second opinion on the witness value from the smoothed functional equation
      AfeConfig ac;
      ac.A = cfg.afe_A;
      const auto afe = afe_eval_half(Character(ctx, rep.witness_e), 0.0, ac);
      r.set("witness_afe", std::norm(afe.value));
      r.set("witness_afe_diff", std::abs(std::norm(afe.value) - rep.witness_value));
    } else if (sc == "meanvalue" || sc == "hbsum") {
      const u64 N = std::min<u64>(ceil_pow(qd, it.theta), ctx.q());
      const std::vector<cplx> alpha(N, cplx(1.0, 0.0));
      r.set("n_exponent", it.theta);
      r.set("N", N);
      r.set("alpha", std::string("ones"));
      if (sc == "meanvalue") {
        const auto rep = mean_value_M(ctx, subgroup(ctx, it.H), N, alpha);
        r.set("A", rep.A);
        r.set("M", rep.M);
        r.set("K", rep.K);
        r.set("envelope", rep.envelope);
        r.set("ratio", rep.ratio);
        r.set("valid", std::isfinite(rep.ratio) && rep.ratio > 0.0 && rep.ratio <= 100.0);
      } else {
        const auto rep = hb_double_sum(ctx, subgroup(ctx, it.H).characters(ctx), N, alpha);
        r.set("R", rep.R);
        r.set("value", rep.value);
        r.set("envelope", rep.envelope);
        r.set("ratio", rep.value / rep.envelope);
        r.set("valid", std::isfinite(rep.value) && rep.value <= 100.0 * rep.envelope);
      }
    } else if (sc == "zerodensity") {
      const double sigma = sigma_or(0.6);
      const auto agg = zero_density_aggregate(ctx, subgroup(ctx, it.H), sigma, cfg.T);
      r.set("sigma", sigma);
      r.set("T", cfg.T);
      r.set("total", agg.total);
      r.set("envelope", agg.bound_envelope);
      r.set("below_envelope", static_cast<double>(agg.total) <= agg.bound_envelope);
      r.set("min_margin", agg.min_margin);
      r.set("valid", agg.min_margin > 0.0 &&
                         std::all_of(agg.per_char.begin(), agg.per_char.end(), [](std::int64_t c) { return c >= 0; }));
    } else if (sc == "spacings") {
      const u64 N = std::min<u64>(ceil_pow(qd, it.theta), ctx.order());
      const u64 Hlen = std::min<u64>(ceil_pow(qd, cfg.h_exponent), ctx.q());
      const auto rep = variance_V(ctx, Hlen, N);
      const double HN = static_cast<double>(Hlen) * static_cast<double>(N);
      r.set("g", rep.g);
      r.set("n_exponent", it.theta);
      r.set("h_exponent", cfg.h_exponent);
      r.set("N", N);
      r.set("H", Hlen);
      r.set("sum_f", rep.sum_f);
      r.set("sum_f2", rep.sum_f2);
      r.set("V", rep.V);
      r.set("V_over_HN", rep.V / HN);
      r.set("qV_over_HN", qd * rep.V / HN);
      r.set("band_ok", rep.V / HN >= 0.7 && rep.V / HN <= 1.3);
      r.set("valid", rep.sum_f == Hlen * N);
    } else if (sc == "paircorr") {
      const u64 N = std::min<u64>(ceil_pow(qd, it.theta), ctx.order());
      const u64 K = std::max<u64>(1, cfg.alpha_offsets);
      double total = 0.0;
      u64 degenerate = 0;
      for (u64 k = 0; k < K; ++k) {
        const auto rep = pair_correlation_R2(ctx, N, N, static_cast<double>(k) / static_cast<double>(K), it.gamma);
        total += rep.value;
        degenerate += rep.degenerate ? 1 : 0;
      }
      const double mean = total / static_cast<double>(K);
      const double tol = 0.2 * it.gamma + 0.05;
      r.set("g", ctx.g());
      r.set("n_exponent", it.theta);
      r.set("N", N);
      r.set("Hscale", N);
      r.set("gamma", it.gamma);
      r.set("offsets", K);
      r.set("degenerate_windows", degenerate);
      r.set("R2_mean", mean);
      r.set("deviation", std::abs(mean - it.gamma));
      r.set("tolerance", tol);
      r.set("band_ok", std::abs(mean - it.gamma) <= tol);
      r.set("valid", std::isfinite(mean) && mean >= 0.0);
    } else {
      throw std::invalid_argument("unknown subcommand: " + sc);
    }
  }
};

bool passed(const Record& r) {
  for (const char* key : {"verified", "valid"})
    if (const auto* v = r.find(key)) return std::holds_alternative<bool>(*v) && std::get<bool>(*v);
  return false;
}

std::string canonical_config(const RunConfig& c) {
  std::ostringstream os;
  os << "subcommand=" << c.subcommand << "\nq=" << c.q_spec << "\nsubgroups=" << c.subgroups
     << "\ncutoff_euler=" << format_double(c.cutoff_euler) << "\ncutoff_resonator=" << c.cutoff_resonator
     << "\nafe_A=" << c.afe_A << "\nb_sigma=" << to_string(c.b_form) << "\nsigma=" << format_double(c.sigma)
     << "\nT=" << format_double(c.T) << "\nprime_cutoff=" << format_double(c.prime_cutoff) << "\nh=" << c.h
     << "\nblock_gamma=" << format_double(c.block_gamma) << "\nblock_primes=" << c.block_primes
     << "\nh_exponent=" << format_double(c.h_exponent) << "\nalpha_offsets=" << c.alpha_offsets << "\nn_exponents=";
  for (double v : c.n_exponents) os << format_double(v) << ",";
  os << "\ngammas=";
  for (double v : c.gammas) os << format_double(v) << ",";
  os << "\n";
  return os.str();
}

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

std::string json_value(const Record::Value& v) {
  struct {
    std::string operator()(std::monostate) const { return "null"; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(std::uint64_t x) const { return std::to_string(x); }
    std::string operator()(double x) const { return std::isfinite(x) ? format_double(x) : "null"; }
    std::string operator()(const std::string& s) const { return json_string(s); }
  } vis;
  return std::visit(vis, v);
}

std::string csv_value(const Record::Value& v) {
  if (std::holds_alternative<std::monostate>(v)) return "";
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  if (const auto* s = std::get_if<std::string>(&v)) {
    if (s->find_first_of(",\"\n") == std::string::npos) return *s;
    std::string out = "\"";
    for (char c : *s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  }
  return json_value(v);
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string run_id(const RunConfig& cfg) {
  // FNV-1a over the settings that determine the data bytes
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical_config(cfg)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunResult run_experiment(const RunConfig& cfg) {
  const auto& names = subcommand_names();
  if (std::find(names.begin(), names.end(), cfg.subcommand) == names.end())
    throw std::invalid_argument("unknown subcommand: " + cfg.subcommand);
  if (!(cfg.cutoff_euler > 0.0) || cfg.cutoff_resonator == 0 || !(cfg.prime_cutoff > 0.0) || cfg.afe_A < 1)
    throw std::invalid_argument("cutoffs must be positive");

  const Runner runner{cfg, run_id(cfg)};
  const auto qs = parse_q_spec(cfg.q_spec);

  std::vector<ModulusState> states(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) states[i].q = qs[i];
  parallel_for(states.size(), cfg.threads, [&](std::size_t i) { runner.prepare(states[i]); });

  const auto work = runner.items(states);
  std::vector<Record> rows(work.size());
  std::vector<RecordStatus> status(work.size(), RecordStatus::ok);
  parallel_for(work.size(), cfg.threads, [&](std::size_t i) {
    const auto& it = work[i];
    const auto& st = states[it.state];
    Record r = runner.base(st.q);
    if (!st.error.empty()) {
      r.set("status", std::string("error"));
      r.set("error", st.error);
      status[i] = RecordStatus::error;
    } else {
      if (it.H != 0) r.set("H", it.H);
      try {
        runner.run_item(st, it, r);
        r.set("status", std::string("ok"));
      } catch (const SubgroupTooSmall& e) {
        r.set("status", std::string("skipped"));
        r.set("reason", std::string(e.what()));
        status[i] = RecordStatus::skipped;
      } catch (const std::exception& e) {
        r.set("status", std::string("error"));
        r.set("error", std::string(e.what()));
        status[i] = RecordStatus::error;
      }
    }
    rows[i] = std::move(r);
  });

  RunResult res;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (status[i] == RecordStatus::skipped) {
      ++res.skipped;
    } else if (status[i] == RecordStatus::error || !passed(rows[i])) {
      ++res.failed;
    } else {
      ++res.ok;
    }
  }
  // listed subgroup orders that do not divide q - 1 are reported as skipped rows
  for (const auto& st : states)
    for (const auto& bad : st.rejected) {
      Record r = runner.base(st.q);
      r.set("H", static_cast<u64>(std::stoull(bad)));
      r.set("status", std::string("skipped"));
      r.set("reason", std::string("H does not divide q - 1"));
      rows.push_back(std::move(r));
      ++res.skipped;
    }
  res.records = std::move(rows);
  return res;
}

void write_jsonl(std::ostream& os, const std::vector<Record>& records) {
  for (const auto& r : records) {
    os << '{';
    bool first = true;
    for (const auto& [k, v] : r.fields()) {
      if (!first) os << ',';
      first = false;
      os << json_string(k) << ':' << json_value(v);
    }
    os << "}\n";
  }
}

void write_csv(std::ostream& os, const std::vector<Record>& records) {
  std::vector<std::string> header;
  for (const auto& r : records)
    for (const auto& kv : r.fields())
      if (std::find(header.begin(), header.end(), kv.first) == header.end()) header.push_back(kv.first);
  if (header.empty()) return;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& r : records) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) os << ',';
      if (const auto* v = r.find(header[i])) os << csv_value(*v);
    }
    os << '\n';
  }
}

void emit(const RunConfig& cfg, const RunResult& result, double wall_seconds) {
  if (cfg.out.empty()) throw std::runtime_error("no output path given");
  {
    std::ofstream data(cfg.out, std::ios::binary | std::ios::trunc);
    if (!data) throw std::runtime_error("cannot open " + cfg.out + " for writing");
    if (cfg.format == "csv")
      write_csv(data, result.records);
    else if (cfg.format == "jsonl")
      write_jsonl(data, result.records);
    else
      throw std::runtime_error("unknown format: " + cfg.format);
    data.flush();
    if (!data) throw std::runtime_error("write failed for " + cfg.out);
  }

  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);

  nlohmann::ordered_json m;
  m["run_id"] = run_id(cfg);
  m["version"] = CHARLAB_VERSION;
  m["subcommand"] = cfg.subcommand;
  m["timestamp"] = stamp;
  m["wall_seconds"] = wall_seconds;
  m["threads"] = cfg.threads;
  m["format"] = cfg.format;
  m["data_file"] = cfg.out;
  m["config"] = cfg.config_echo.empty() ? canonical_config(cfg) : cfg.config_echo;
  m["totals"] = {{"records", result.records.size()},
                 {"ok", result.ok},
                 {"skipped", result.skipped},
                 {"failed", result.failed}};
  const std::string path = cfg.out + ".manifest.json";
  std::ofstream mf(path, std::ios::trunc);
  if (!mf) throw std::runtime_error("cannot open " + path + " for writing");
  mf << m.dump(2) << '\n';
  if (!mf) throw std::runtime_error("write failed for " + path);
}

}  // namespace charlab
