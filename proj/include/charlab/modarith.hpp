#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace charlab {

/// Raised when a modulus that must be prime is not.
class CompositeModulusError : public std::invalid_argument {
 public:
  explicit CompositeModulusError(std::uint64_t q);
  std::uint64_t modulus() const { return q_; }

 private:
  std::uint64_t q_;
};

struct PrimeTable {
  std::uint64_t limit = 0;
  std::vector<std::uint64_t> primes;  // ascending, all primes <= limit
};

/// Segmented sieve of Eratosthenes. limit 0 or 1 gives an empty table.
PrimeTable sieve_primes(std::uint64_t limit);

/// Calls fn(p) for every prime p in [lo, hi] in ascending order without
/// materializing the whole range.
void for_each_prime(std::uint64_t lo, std::uint64_t hi,
                    const std::function<void(std::uint64_t)>& fn);

using Factorization = std::vector<std::pair<std::uint64_t, int>>;

/// Trial-division factorization, primes ascending. factorize(1) is empty.
Factorization factorize(std::uint64_t n);

/// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(std::uint64_t n);

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);
std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

/// Smallest g >= 2 of order q-1 modulo q (g = 1 for q = 2).
std::uint64_t find_primitive_root(std::uint64_t q);

/// Substrate for character evaluation modulo an odd prime q: the smallest
/// primitive root, the factorization of q-1, a full discrete-log table and
/// the cached (q-1)-th roots of unity. Immutable after construction.
class ModulusContext {
 public:
  std::uint64_t q() const { return q_; }
  std::uint64_t g() const { return g_; }
  /// Order of the unit group, q - 1.
  std::uint64_t order() const { return q_ - 1; }
  const Factorization& factor_qm1() const { return factor_qm1_; }

  /// ind(n) for n coprime to q (n is reduced mod q first).
  std::uint64_t ind(std::uint64_t n) const { return ind_[n % q_]; }
  /// g^k mod q.
  std::uint64_t power(std::uint64_t k) const { return pow_[k % (q_ - 1)]; }
  /// exp(2 pi i k / (q-1)).
  const std::complex<double>& root(std::uint64_t k) const { return roots_[k % (q_ - 1)]; }

  std::vector<std::uint64_t> divisors_of_order() const;

 private:
  friend ModulusContext build_context(std::uint64_t q);
  ModulusContext() = default;

  std::uint64_t q_ = 0;
  std::uint64_t g_ = 0;
  Factorization factor_qm1_;
  std::vector<std::uint32_t> ind_;
  std::vector<std::uint32_t> pow_;
  std::vector<std::complex<double>> roots_;
};

/// Builds the context for an odd prime q. Throws CompositeModulusError for
/// composite q and std::invalid_argument for q < 3.
ModulusContext build_context(std::uint64_t q);

int mobius(std::uint64_t n);

/// Mobius values for 0..n (entry 0 is unused and zero).
std::vector<int> mobius_table(std::uint64_t n);

/// Lambda(n) = log p when n = p^k.
struct PrimePower {
  std::uint64_t p = 0;
  int k = 0;
  double log_p() const;
};

std::optional<PrimePower> von_mangoldt(std::uint64_t n);

/// Convenience: the numeric value of Lambda(n).
double von_mangoldt_value(std::uint64_t n);

}  // namespace charlab
