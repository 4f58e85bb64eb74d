#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "charlab/resonance.hpp"

namespace charlab {

/// One output row. Fields keep insertion order, which is the serialized key order.
class Record {
 public:
  using Value = std::variant<std::monostate, bool, std::int64_t, std::uint64_t, double, std::string>;

  Record& set(std::string key, Value v);
  const Value* find(const std::string& key) const;
  const std::vector<std::pair<std::string, Value>>& fields() const { return fields_; }

 private:
  std::vector<std::pair<std::string, Value>> fields_;
};

enum class RecordStatus { ok, skipped, error };

struct RunConfig {
  std::string subcommand;
  std::string q_spec;                 // "499", "100-200", "101,199"
  std::string subgroups = "all";      // all | even | comma list of divisors
  std::string out;
  std::string format = "jsonl";       // jsonl | csv
  double cutoff_euler = 1e6;
  std::uint64_t cutoff_resonator = 100000;
  int afe_A = 4;
  unsigned threads = 1;
  BSigmaForm b_form = BSigmaForm::theorem;

  double sigma = 0.0;          // 0 picks the subcommand default
  double T = 5.0;
  double prime_cutoff = 1e5;
  std::uint64_t h = 0;         // extreme-half; 0 picks max(1, floor(H / sqrt q))
  double block_gamma = 0.5;
  std::uint64_t block_primes = 2;
  std::vector<double> n_exponents;  // N = ceil(q^theta), clipped to the admissible range
  double h_exponent = 0.45;         // spacings window length ceil(q^theta)
  std::vector<double> gammas = {0.5, 1.0, 2.0};
  std::uint64_t alpha_offsets = 10;  // paircorr offsets 0, 1/k, ..., (k-1)/k

  /// Merged configuration text stored in the manifest.
  std::string config_echo;
};

inline const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {"extreme-s1", "extreme-sigma", "extreme-half", "meanvalue",
                                                 "hbsum",      "zerodensity",   "spacings",     "paircorr"};
  return names;
}

/// Expands "a", "a-b", "a,b,c" (and mixtures) into ascending distinct integers.
std::vector<std::uint64_t> parse_q_spec(const std::string& spec);

/// Runs a deterministic map over 0..count-1 on the given number of workers.
/// fn must not depend on which worker runs it.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

struct RunResult {
  std::vector<Record> records;
  std::uint64_t ok = 0, skipped = 0, failed = 0;
  bool success() const { return failed == 0; }
};

RunResult run_experiment(const RunConfig& cfg);

std::string format_double(double v);
void write_jsonl(std::ostream& os, const std::vector<Record>& records);
void write_csv(std::ostream& os, const std::vector<Record>& records);

/// Writes the data file at cfg.out and the manifest next to it
/// (<out>.manifest.json). Throws std::runtime_error on I/O failure.
void emit(const RunConfig& cfg, const RunResult& result, double wall_seconds);

/// Deterministic identifier derived from the merged configuration.
std::string run_id(const RunConfig& cfg);

}  // namespace charlab
