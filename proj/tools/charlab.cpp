#include <chrono>
#include <cstdio>
#include <exception>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "charlab/experiment.hpp"

int main(int argc, char** argv) {
  using charlab::RunConfig;
  CLI::App app{"charlab: experiments on Dirichlet L-functions over subgroups of characters"};
  app.set_config("--config", "", "INI/TOML file with option values; command-line flags take precedence");
  app.require_subcommand(1);

  RunConfig cfg;
  const unsigned hw = std::thread::hardware_concurrency();
  cfg.threads = hw == 0 ? 1 : hw;
  std::string b_form = "theorem";

  app.add_option("--q", cfg.q_spec, "modulus: N, A-B or a comma list")->required();
  app.add_option("--subgroups", cfg.subgroups, "all | even | comma list of orders H dividing q-1")
      ->capture_default_str();
  app.add_option("--out", cfg.out, "data file path")->required();
  app.add_option("--format", cfg.format, "jsonl | csv")
      ->check(CLI::IsMember({"jsonl", "csv"}))
      ->capture_default_str();
  app.add_option("--cutoff-euler", cfg.cutoff_euler, "Euler product cutoff X_2")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--cutoff-resonator", cfg.cutoff_resonator, "resonator coefficient cutoff")
      ->check(CLI::Range(std::uint64_t{1}, charlab::kMaxResonatorCutoff))
      ->capture_default_str();
  app.add_option("--afe-A", cfg.afe_A, "exponent A of the AFE weight")->check(CLI::Range(1, 64))->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads")
      ->envname("CHARLAB_THREADS")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
  app.add_option("--b-sigma", b_form, "form of b(sigma): theorem | proof")
      ->check(CLI::IsMember({"theorem", "proof"}))
      ->capture_default_str();
  app.add_option("--sigma", cfg.sigma, "real part (0: 0.75 for extreme-sigma, 0.6 for zerodensity)")
      ->capture_default_str();
  app.add_option("--T", cfg.T, "height for zero counting")->capture_default_str();
  app.add_option("--prime-cutoff", cfg.prime_cutoff, "cutoff X of the prime sums at 1/2 < sigma < 1")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--set-size", cfg.h, "size bound of the resonator set at s = 1/2 (0: floor(H / sqrt q))")
      ->capture_default_str();
  app.add_option("--block-gamma", cfg.block_gamma, "exponent of the prime-block envelope")->capture_default_str();
  app.add_option("--block-primes", cfg.block_primes, "primes taken per dyadic block")->capture_default_str();
  app.add_option("--n-exponent", cfg.n_exponents, "N = ceil(q^theta); repeatable or comma separated")
      ->delimiter(',');
  app.add_option("--h-exponent", cfg.h_exponent, "window length ceil(q^theta) for spacings")->capture_default_str();
  app.add_option("--gamma", cfg.gammas, "window widths for paircorr")->delimiter(',')->capture_default_str();
  app.add_option("--alpha-offsets", cfg.alpha_offsets, "window offsets k/K, k < K, averaged in paircorr")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  const std::vector<std::pair<std::string, std::string>> subcommands = {
      {"extreme-s1", "resonance chain at s = 1 for each subgroup"},
      {"extreme-sigma", "resonance chain at 1/2 < sigma < 1 for each subgroup"},
      {"extreme-half", "resonance chain at s = 1/2 over the even half of each subgroup"},
      {"meanvalue", "first moment of character sums over a subgroup against its envelope"},
      {"hbsum", "double sum of twisted character sums over a subgroup"},
      {"zerodensity", "zeros right of sigma up to height T, summed over a subgroup"},
      {"spacings", "variance of window counts of primitive-root powers"},
      {"paircorr", "pair correlation of primitive-root powers"}};
  for (const auto& [name, help] : subcommands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  cfg.b_form = b_form == "proof" ? charlab::BSigmaForm::proof : charlab::BSigmaForm::theorem;
  cfg.config_echo = "subcommand=" + cfg.subcommand + "\n" + app.config_to_str(true, false);

  try {
    const auto t0 = std::chrono::steady_clock::now();
    const auto result = charlab::run_experiment(cfg);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    charlab::emit(cfg, result, wall);
    std::fprintf(stderr, "%s: %zu records (%llu ok, %llu skipped, %llu failed) in %.2fs\n", cfg.subcommand.c_str(),
                 result.records.size(), static_cast<unsigned long long>(result.ok),
                 static_cast<unsigned long long>(result.skipped), static_cast<unsigned long long>(result.failed), wall);
    return result.success() ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
