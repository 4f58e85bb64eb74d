#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "charlab/modarith.hpp"

namespace charlab {

/// Dirichlet character chi_e modulo a prime q, chi_e(g^k) = exp(2 pi i e k/(q-1)).
/// Holds a non-owning pointer; the context must outlive the character.
struct Character {
  const ModulusContext* ctx = nullptr;
  std::uint64_t e = 0;

  Character() = default;
  Character(const ModulusContext& c, std::uint64_t exponent) : ctx(&c), e(exponent % c.order()) {}

  std::complex<double> operator()(std::uint64_t n) const;
  Character conj() const { return Character(*ctx, (ctx->order() - e) % ctx->order()); }
  bool is_principal() const { return e == 0; }
  /// chi(-1) = (-1)^e since ind(-1) = (q-1)/2.
  bool is_even() const { return e % 2 == 0; }
  int parity() const { return is_even() ? 0 : 1; }
  std::uint64_t order() const;
};

std::complex<double> char_eval(const Character& chi, std::uint64_t n);

/// A finite set of characters stored by exponent.
struct CharacterSet {
  std::uint64_t modulus_order = 0;  // q - 1
  std::vector<std::uint64_t> exponents;  // sorted, distinct
  bool is_subgroup = false;

  std::size_t size() const { return exponents.size(); }
  bool empty() const { return exponents.empty(); }
  bool contains(std::uint64_t e) const;
  std::vector<Character> characters(const ModulusContext& ctx) const;

  static CharacterSet from_exponents(const ModulusContext& ctx, std::vector<std::uint64_t> exps);
};

/// The unique subgroup of order H: all e divisible by (q-1)/H.
CharacterSet subgroup(const ModulusContext& ctx, std::uint64_t H);

/// Ker H = {g^{kH}}, sorted ascending.
std::vector<std::uint64_t> kernel(const ModulusContext& ctx, std::uint64_t H);

/// The H/2 even characters of the subgroup of order H (H even).
CharacterSet even_subgroup_plus(const ModulusContext& ctx, std::uint64_t H);

/// {chi_base^a : a = 1..A}. Throws if the powers are not distinct.
CharacterSet interval(const ModulusContext& ctx, std::uint64_t base_exponent, std::uint64_t A);

struct DoublingReport {
  std::uint64_t A = 0;
  std::uint64_t product_size = 0;
  double K = 1.0;  // product_size / A
};

DoublingReport product_set(const CharacterSet& A);

/// Representation counts of chi = chi1 * conj(chi2) * eta, chi1, chi2 in A, eta in U.
struct CoverReport {
  std::vector<std::uint64_t> counts;  // aligned with A.exponents
  bool all_at_least_half = false;     // every count >= A/2
};

CoverReport verify_cover(const CharacterSet& A, const CharacterSet& U);

struct GreedyCoverResult {
  CharacterSet U;
  bool success = false;
  double lemma_bound = 1.0;  // 2K - 1
  bool within_bound = false;
};

/// Heuristic witness search for the covering set; picks the quotient class
/// that covers the most still-deficient characters, smallest exponent first.
GreedyCoverResult greedy_cover(const CharacterSet& A);

}  // namespace charlab
