#include "charlab/modarith.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace charlab {

CompositeModulusError::CompositeModulusError(std::uint64_t q)
    : std::invalid_argument("modulus " + std::to_string(q) + " is not prime"), q_(q) {}

namespace {

constexpr std::uint64_t kSegment = 1u << 18;

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<std::uint64_t> small_primes(std::uint64_t limit) {
  std::vector<char> comp(limit + 1, 0);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) comp[j] = 1;
  }
  return out;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

}  // namespace

void for_each_prime(std::uint64_t lo, std::uint64_t hi,
                    const std::function<void(std::uint64_t)>& fn) {
  if (hi < 2 || lo > hi) return;
  lo = std::max<std::uint64_t>(lo, 2);
  const auto base = small_primes(isqrt(hi));
  std::vector<char> seg(kSegment);
  for (std::uint64_t low = lo; low <= hi; low += kSegment) {
    const std::uint64_t high = std::min(hi, low + kSegment - 1);
    std::fill(seg.begin(), seg.end(), 1);
    for (std::uint64_t p : base) {
      if (p * p > high) break;
      std::uint64_t start = std::max(p * p, (low + p - 1) / p * p);
      for (std::uint64_t j = start; j <= high; j += p) seg[j - low] = 0;
    }
    for (std::uint64_t n = low; n <= high; ++n)
      if (seg[n - low]) fn(n);
    if (high == hi) break;
  }
}

PrimeTable sieve_primes(std::uint64_t limit) {
  PrimeTable t;
  t.limit = limit;
  if (limit < 2) return t;
  // pi(x) < 1.26 x / log x
  t.primes.reserve(static_cast<std::size_t>(1.3 * limit / std::log(static_cast<double>(limit))) + 8);
  for_each_prime(2, limit, [&](std::uint64_t p) { t.primes.push_back(p); });
  return t;
}

Factorization factorize(std::uint64_t n) {
  Factorization f;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.emplace_back(p, e);
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  std::uint64_t r = 1 % mod;
  base %= mod;
  while (exp) {
    if (exp & 1) r = mulmod(r, base, mod);
    base = mulmod(base, base, mod);
    exp >>= 1;
  }
  return r;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t find_primitive_root(std::uint64_t q) {
  if (!is_prime(q)) throw CompositeModulusError(q);
  if (q == 2) return 1;
  const auto f = factorize(q - 1);
  for (std::uint64_t g = 2; g < q; ++g) {
    bool ok = true;
    for (const auto& [l, e] : f) {
      if (powmod(g, (q - 1) / l, q) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw std::logic_error("no primitive root found");
}

ModulusContext build_context(std::uint64_t q) {
  if (q < 3) throw std::invalid_argument("modulus must be an odd prime >= 3");
  if (!is_prime(q)) throw CompositeModulusError(q);
  if (q > (std::uint64_t{1} << 32)) throw std::invalid_argument("modulus too large for index table");

  ModulusContext ctx;
  ctx.q_ = q;
  ctx.g_ = find_primitive_root(q);
  ctx.factor_qm1_ = factorize(q - 1);
  ctx.ind_.assign(q, 0);
  ctx.pow_.assign(q - 1, 0);
  std::uint64_t x = 1;
  for (std::uint64_t k = 0; k < q - 1; ++k) {
    ctx.pow_[k] = static_cast<std::uint32_t>(x);
    ctx.ind_[x] = static_cast<std::uint32_t>(k);
    x = x * ctx.g_ % q;
  }
  ctx.roots_.resize(q - 1);
  const double n = static_cast<double>(q - 1);
  for (std::uint64_t k = 0; k < q - 1; ++k) {
    // reduce to [-n/2, n/2] so the angle stays small
    const double kk = (2 * k <= q - 1) ? static_cast<double>(k) : static_cast<double>(k) - n;
    const double ang = 2.0 * std::numbers::pi * kk / n;
    ctx.roots_[k] = {std::cos(ang), std::sin(ang)};
  }
  return ctx;
}

std::vector<std::uint64_t> ModulusContext::divisors_of_order() const {
  std::vector<std::uint64_t> divs{1};
  for (const auto& [p, e] : factor_qm1_) {
    const std::size_t n = divs.size();
    std::uint64_t pk = 1;
    for (int i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < n; ++j) divs.push_back(divs[j] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

int mobius(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("mobius(0)");
  int mu = 1;
  for (const auto& [p, e] : factorize(n)) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

std::vector<int> mobius_table(std::uint64_t n) {
  std::vector<int> mu(n + 1, 1);
  std::vector<char> comp(n + 1, 0);
  mu[0] = 0;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (comp[i]) continue;
    for (std::uint64_t j = i; j <= n; j += i) {
      if (j > i) comp[j] = 1;
      mu[j] = -mu[j];
    }
    if (i <= n / i)
      for (std::uint64_t j = i * i; j <= n; j += i * i) mu[j] = 0;
  }
  return mu;
}

double PrimePower::log_p() const { return std::log(static_cast<double>(p)); }

std::optional<PrimePower> von_mangoldt(std::uint64_t n) {
  if (n < 2) return std::nullopt;
  const auto f = factorize(n);
  if (f.size() != 1) return std::nullopt;
  return PrimePower{f[0].first, f[0].second};
}

double von_mangoldt_value(std::uint64_t n) {
  const auto pp = von_mangoldt(n);
  return pp ? pp->log_p() : 0.0;
}

}  // namespace charlab
