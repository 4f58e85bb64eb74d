#include "charlab/characters.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace charlab {

std::complex<double> Character::operator()(std::uint64_t n) const {
  const std::uint64_t q = ctx->q();
  n %= q;
  if (n == 0) return {0.0, 0.0};
  return ctx->root(e * ctx->ind(n));
}

std::uint64_t Character::order() const {
  const std::uint64_t n = ctx->order();
  return n / gcd_u64(e, n);
}

std::complex<double> char_eval(const Character& chi, std::uint64_t n) { return chi(n); }

bool CharacterSet::contains(std::uint64_t e) const {
  return std::binary_search(exponents.begin(), exponents.end(), e);
}

std::vector<Character> CharacterSet::characters(const ModulusContext& ctx) const {
  std::vector<Character> out;
  out.reserve(exponents.size());
  for (auto e : exponents) out.emplace_back(ctx, e);
  return out;
}

CharacterSet CharacterSet::from_exponents(const ModulusContext& ctx, std::vector<std::uint64_t> exps) {
  CharacterSet s;
  s.modulus_order = ctx.order();
  for (auto& e : exps) e %= ctx.order();
  std::sort(exps.begin(), exps.end());
  exps.erase(std::unique(exps.begin(), exps.end()), exps.end());
  s.exponents = std::move(exps);
  return s;
}

namespace {
void require_divisor(const ModulusContext& ctx, std::uint64_t H) {
  if (H == 0 || ctx.order() % H != 0)
    throw std::invalid_argument(std::to_string(H) + " does not divide q-1 = " + std::to_string(ctx.order()));
}
}  // namespace

CharacterSet subgroup(const ModulusContext& ctx, std::uint64_t H) {
  require_divisor(ctx, H);
  CharacterSet s;
  s.modulus_order = ctx.order();
  s.is_subgroup = true;
  const std::uint64_t d = ctx.order() / H;
  s.exponents.reserve(H);
  for (std::uint64_t j = 0; j < H; ++j) s.exponents.push_back(j * d);
  return s;
}

std::vector<std::uint64_t> kernel(const ModulusContext& ctx, std::uint64_t H) {
  require_divisor(ctx, H);
  std::vector<std::uint64_t> ker;
  for (std::uint64_t k = 0; k < ctx.order(); k += H) ker.push_back(ctx.power(k));
  std::sort(ker.begin(), ker.end());
  return ker;
}

CharacterSet even_subgroup_plus(const ModulusContext& ctx, std::uint64_t H) {
  require_divisor(ctx, H);
  if (H % 2 != 0) throw std::invalid_argument("even_subgroup_plus needs an even H");
  return subgroup(ctx, H / 2);
}

CharacterSet interval(const ModulusContext& ctx, std::uint64_t base_exponent, std::uint64_t A) {
  std::vector<std::uint64_t> exps;
  for (std::uint64_t a = 1; a <= A; ++a) exps.push_back(base_exponent * a % ctx.order());
  auto s = CharacterSet::from_exponents(ctx, exps);
  if (s.size() != A) throw std::invalid_argument("interval powers are not distinct");
  return s;
}

DoublingReport product_set(const CharacterSet& A) {
  if (A.empty()) throw std::invalid_argument("product_set of an empty set");
  const std::uint64_t n = A.modulus_order;
  std::vector<char> hit(n, 0);
  std::uint64_t count = 0;
  for (auto a : A.exponents)
    for (auto b : A.exponents) {
      const auto s = (a + b) % n;
      if (!hit[s]) {
        hit[s] = 1;
        ++count;
      }
    }
  DoublingReport r;
  r.A = A.size();
  r.product_size = count;
  r.K = static_cast<double>(count) / static_cast<double>(A.size());
  return r;
}

namespace {
// D[x] = #{(e1, e2) in A^2 : e1 - e2 = x mod n}
std::vector<std::uint64_t> difference_counts(const CharacterSet& A) {
  const std::uint64_t n = A.modulus_order;
  std::vector<std::uint64_t> D(n, 0);
  for (auto a : A.exponents)
    for (auto b : A.exponents) ++D[(a + n - b) % n];
  return D;
}
}  // namespace

CoverReport verify_cover(const CharacterSet& A, const CharacterSet& U) {
  const std::uint64_t n = A.modulus_order;
  const auto D = difference_counts(A);
  CoverReport rep;
  rep.counts.reserve(A.size());
  bool ok = !A.empty();
  for (auto e : A.exponents) {
    std::uint64_t c = 0;
    for (auto eta : U.exponents) c += D[(e + n - eta % n) % n];
    rep.counts.push_back(c);
    if (2 * c < A.size()) ok = false;
  }
  rep.all_at_least_half = ok;
  return rep;
}

GreedyCoverResult greedy_cover(const CharacterSet& A) {
  if (A.empty()) throw std::invalid_argument("greedy_cover of an empty set");
  const std::uint64_t n = A.modulus_order;
  const auto D = difference_counts(A);
  const std::uint64_t need = (A.size() + 1) / 2;  // 2c >= A

  std::vector<std::uint64_t> have(A.size(), 0);
  std::vector<char> used(n, 0);
  std::vector<std::uint64_t> chosen;
  for (;;) {
    std::vector<std::size_t> deficient;
    for (std::size_t i = 0; i < A.size(); ++i)
      if (have[i] < need) deficient.push_back(i);
    if (deficient.empty()) break;

    std::uint64_t best_eta = 0, best_gain = 0;
    for (std::uint64_t eta = 0; eta < n; ++eta) {
      if (used[eta]) continue;
      std::uint64_t gain = 0;
      for (auto i : deficient) gain += std::min(D[(A.exponents[i] + n - eta) % n], need - have[i]);
      if (gain > best_gain) {
        best_gain = gain;
        best_eta = eta;
      }
    }
    if (best_gain == 0) break;
    used[best_eta] = 1;
    chosen.push_back(best_eta);
    for (std::size_t i = 0; i < A.size(); ++i) have[i] += D[(A.exponents[i] + n - best_eta) % n];
  }

  GreedyCoverResult res;
  res.U.modulus_order = n;
  res.U.exponents = chosen;
  std::sort(res.U.exponents.begin(), res.U.exponents.end());
  res.success = verify_cover(A, res.U).all_at_least_half;
  res.lemma_bound = 2.0 * product_set(A).K - 1.0;
  res.within_bound = static_cast<double>(res.U.size()) <= res.lemma_bound + 1e-12;
  return res;
}

}  // namespace charlab
