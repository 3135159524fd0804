#pragma once

// Exact integer primitives: signed modular exponentiation with tiered
// arithmetic, deterministic primality for 64-bit inputs, factorization of
// moderate integers, the Moebius function and p-adic valuation of integers.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace divpow {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

/// Thrown when factorization gives up before the configured effort bound is
/// reached. Carries the part of the input that could not be split.
class factorization_error : public std::runtime_error {
 public:
  explicit factorization_error(mpz_class cofactor)
      : std::runtime_error("factorization effort exceeded; unfactored cofactor " + cofactor.get_str()),
        cofactor_(std::move(cofactor)) {}

  const mpz_class& cofactor() const noexcept { return cofactor_; }

 private:
  mpz_class cofactor_;
};

/// Limits for the randomized splitting step of factorize().
struct Effort {
  u64 rho_iterations = u64{1} << 20;  // per attempt
  unsigned rho_attempts = 12;
};

namespace detail {

inline mpz_class to_mpz(u64 v) {
  mpz_class r;
  mpz_import(r.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return r;
}

inline mpz_class to_mpz(i64 v) {
  mpz_class r = to_mpz(v < 0 ? u64(0) - u64(v) : u64(v));
  return v < 0 ? mpz_class(-r) : r;
}

inline mpz_class to_mpz(u128 v) {
  mpz_class r;
  const u64 words[2] = {u64(v), u64(v >> 64)};
  mpz_import(r.get_mpz_t(), 2, -1, sizeof(u64), 0, 0, words);
  return r;
}

inline bool fits_u64(const mpz_class& v) {
  return sgn(v) >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64;
}

inline u64 to_u64(const mpz_class& v) {
  u64 out = 0;
  std::size_t count = 0;
  mpz_export(&out, &count, -1, sizeof(out), 0, 0, v.get_mpz_t());
  return out;
}

inline u64 abs_u64(i64 v) { return v < 0 ? u64(0) - u64(v) : u64(v); }

inline u64 mulmod(u64 x, u64 y, u64 m) { return u64(u128(x) * y % m); }

// Single-word path: modulus below 2^32, products fit in 64 bits.
inline u64 powmod_narrow(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = result * base % m;
    base = base * base % m;
    exp >>= 1;
  }
  return result;
}

// Double-word path: 64-bit modulus, 128-bit products.
inline u64 powmod_wide(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

inline u64 powmod_u64(u64 base, u64 exp, u64 m) {
  return m <= (u64{1} << 32) ? powmod_narrow(base, exp, m) : powmod_wide(base, exp, m);
}

inline u64 reduce_signed(i64 base, u64 m) {
  const u64 r = abs_u64(base) % m;
  return (base < 0 && r != 0) ? m - r : r;
}

inline unsigned ctz128(u128 v) {
  const u64 lo = u64(v);
  return lo != 0 ? unsigned(std::countr_zero(lo)) : 64u + unsigned(std::countr_zero(u64(v >> 64)));
}

inline u128 abs128(i128 v) { return v < 0 ? u128(0) - u128(v) : u128(v); }

// 2-adic valuation of a nonzero 128-bit integer.
inline unsigned v2(i128 v) { return ctz128(abs128(v)); }

inline constexpr unsigned kSmallPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
                                            53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

}  // namespace detail

/// base^exp reduced into [0, modulus). Negative bases are handled; the
/// modulus picks the single-word or double-word path.
inline u64 modpow_signed(i64 base, u64 exp, u64 modulus) {
  if (modulus == 0) throw std::invalid_argument("modpow_signed: modulus must be >= 1");
  if (modulus == 1) return 0;
  return detail::powmod_u64(detail::reduce_signed(base, modulus), exp, modulus);
}

/// Arbitrary-precision overload. Falls back to GMP when the modulus does not
/// fit in a machine word.
inline mpz_class modpow_signed(const mpz_class& base, const mpz_class& exp, const mpz_class& modulus) {
  if (sgn(modulus) <= 0) throw std::invalid_argument("modpow_signed: modulus must be >= 1");
  if (sgn(exp) < 0) throw std::invalid_argument("modpow_signed: exponent must be >= 0");
  if (detail::fits_u64(modulus) && detail::fits_u64(exp) && base.fits_slong_p()) {
    return detail::to_mpz(modpow_signed(i64(base.get_si()), detail::to_u64(exp), detail::to_u64(modulus)));
  }
  mpz_class r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

/// Deterministic Miller-Rabin; exact for every 64-bit input.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (unsigned p : detail::kSmallPrimes) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  if (n < 101 * 101) return true;
  u64 d = n - 1;
  const unsigned s = unsigned(std::countr_zero(d));
  d >>= s;
  // This witness set is sufficient below 3.3 * 10^24.
  for (u64 w : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = detail::powmod_wide(w, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Probabilistic above 64 bits (GMP's BPSW plus Miller-Rabin rounds).
inline bool is_prime(const mpz_class& n) {
  if (sgn(n) <= 0) return false;
  if (detail::fits_u64(n)) return is_prime(detail::to_u64(n));
  return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0;
}

struct PrimePower {
  u64 prime;
  unsigned exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Canonical factorization: primes strictly ascending, exponents >= 1.
class PrimeFactorization {
 public:
  PrimeFactorization() = default;

  /// Validates ordering, primality and exponents, then checks that the
  /// factors multiply back to `value`.
  PrimeFactorization(std::vector<PrimePower> factors, u64 value) : factors_(std::move(factors)) {
    u128 product = 1;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      const auto& f = factors_[i];
      if (f.exponent == 0 || !is_prime(f.prime)) throw std::invalid_argument("PrimeFactorization: bad factor");
      if (i > 0 && factors_[i - 1].prime >= f.prime) throw std::invalid_argument("PrimeFactorization: unordered");
      for (unsigned e = 0; e < f.exponent; ++e) {
        product *= f.prime;
        if (product > std::numeric_limits<u64>::max()) throw std::invalid_argument("PrimeFactorization: overflow");
      }
    }
    if (product != value) throw std::invalid_argument("PrimeFactorization: product mismatch");
  }

  const std::vector<PrimePower>& factors() const noexcept { return factors_; }
  auto begin() const noexcept { return factors_.begin(); }
  auto end() const noexcept { return factors_.end(); }
  std::size_t size() const noexcept { return factors_.size(); }
  bool empty() const noexcept { return factors_.empty(); }

  u64 value() const {
    u64 v = 1;
    for (const auto& f : factors_)
      for (unsigned e = 0; e < f.exponent; ++e) v *= f.prime;
    return v;
  }

  unsigned exponent_of(u64 p) const noexcept {
    for (const auto& f : factors_)
      if (f.prime == p) return f.exponent;
    return 0;
  }

  /// Largest prime factor, or 1 for the empty factorization.
  u64 largest_prime() const noexcept { return factors_.empty() ? 1 : factors_.back().prime; }

  friend bool operator==(const PrimeFactorization&, const PrimeFactorization&) = default;

 private:
  std::vector<PrimePower> factors_;
};

namespace detail {

// Brent's variant of Pollard rho. Returns a nontrivial factor or 0 on failure.
inline u64 rho_split(u64 n, u64 c, u64 x0, u64 max_iterations) {
  if (n % 2 == 0) return 2;
  const auto f = [&](u64 x) { return u64((u128(x) * x + c) % n); };
  u64 y = x0, x = x0, ys = x0, q = 1, g = 1;
  u64 r = 1, iterations = 0;
  constexpr u64 batch = 128;
  while (g == 1) {
    x = y;
    for (u64 i = 0; i < r; ++i) y = f(y);
    u64 k = 0;
    while (k < r && g == 1) {
      ys = y;
      const u64 steps = std::min(batch, r - k);
      for (u64 i = 0; i < steps; ++i) {
        y = f(y);
        q = mulmod(q, x > y ? x - y : y - x, n);
      }
      g = std::gcd(q, n);
      k += steps;
      iterations += steps;
      if (iterations > max_iterations) return 0;
    }
    r <<= 1;
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = std::gcd(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g == n ? 0 : g;
}

inline void split_into(u64 n, const Effort& effort, std::vector<u64>& primes) {
  if (n == 1) return;
  if (is_prime(n)) {
    primes.push_back(n);
    return;
  }
  std::mt19937_64 rng(n);
  for (unsigned attempt = 0; attempt < effort.rho_attempts; ++attempt) {
    const u64 c = rng() % (n - 1) + 1;
    const u64 x0 = rng() % n;
    const u64 d = rho_split(n, c, x0, effort.rho_iterations);
    if (d != 0) {
      split_into(d, effort, primes);
      split_into(n / d, effort, primes);
      return;
    }
  }
  throw factorization_error(to_mpz(n));
}

inline PrimeFactorization collect(std::vector<u64> primes, u64 value) {
  std::sort(primes.begin(), primes.end());
  std::vector<PrimePower> out;
  for (u64 p : primes) {
    if (!out.empty() && out.back().prime == p)
      ++out.back().exponent;
    else
      out.push_back({p, 1});
  }
  return PrimeFactorization(std::move(out), value);
}

}  // namespace detail

/// Trial division by small primes, then Pollard-Brent rho with deterministic
/// reseeding. Throws factorization_error once `effort` is exhausted.
inline PrimeFactorization factorize(u64 n, const Effort& effort = {}) {
  if (n == 0) throw std::invalid_argument("factorize: n must be >= 1");
  std::vector<u64> primes;
  u64 rest = n;
  for (u64 p = 2; p < 1000 && p * p <= rest; p += (p == 2 ? 1 : 2)) {
    while (rest % p == 0) {
      primes.push_back(p);
      rest /= p;
    }
  }
  if (rest > 1) {
    if (rest < 1000 * 1000)
      primes.push_back(rest);
    else
      detail::split_into(rest, effort, primes);
  }
  return detail::collect(std::move(primes), n);
}

struct BigPrimePower {
  mpz_class prime;
  unsigned exponent;
};

/// Factorization of arbitrary-precision integers of moderate size. Factors
/// are returned ascending. Throws factorization_error when rho gives up.
inline std::vector<BigPrimePower> factorize_big(const mpz_class& n, const Effort& effort = {}) {
  if (sgn(n) <= 0) throw std::invalid_argument("factorize_big: n must be >= 1");
  std::vector<mpz_class> primes;
  mpz_class rest = n;
  for (unsigned long p = 2; p < 100000; p += (p == 2 ? 1 : 2)) {
    if (rest == 1 || mpz_class(p) * p > rest) break;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      primes.emplace_back(p);
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
    }
  }
  std::vector<mpz_class> pending;
  if (rest > 1) pending.push_back(rest);
  while (!pending.empty()) {
    mpz_class m = pending.back();
    pending.pop_back();
    if (detail::fits_u64(m)) {
      for (const auto& f : factorize(detail::to_u64(m), effort))
        for (unsigned e = 0; e < f.exponent; ++e) primes.push_back(detail::to_mpz(f.prime));
      continue;
    }
    if (is_prime(m)) {
      primes.push_back(m);
      continue;
    }
    if (mpz_perfect_power_p(m.get_mpz_t())) {
      mpz_class root;
      for (unsigned long k = mpz_sizeinbase(m.get_mpz_t(), 2); k >= 2; --k) {
        if (mpz_root(root.get_mpz_t(), m.get_mpz_t(), k) != 0) {
          for (unsigned long i = 0; i < k; ++i) pending.push_back(root);
          break;
        }
      }
      continue;
    }
    bool split = false;
    for (unsigned attempt = 0; attempt < effort.rho_attempts && !split; ++attempt) {
      const mpz_class c = attempt + 1;
      mpz_class x = 2 + attempt, y = x, ys, q = 1, g = 1;
      u64 r = 1, iterations = 0;
      const auto step = [&](mpz_class& v) {
        v = v * v + c;
        mpz_mod(v.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
      };
      while (g == 1 && iterations <= effort.rho_iterations) {
        x = y;
        for (u64 i = 0; i < r; ++i) step(y);
        for (u64 k = 0; k < r && g == 1; k += 64) {
          ys = y;
          for (u64 i = 0; i < std::min<u64>(64, r - k); ++i) {
            step(y);
            q = q * abs(mpz_class(x - y)) % m;
          }
          mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), m.get_mpz_t());
          iterations += 64;
        }
        r <<= 1;
      }
      if (g == m) {
        do {
          step(ys);
          const mpz_class diff = abs(mpz_class(x - ys));
          mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), m.get_mpz_t());
        } while (g == 1);
      }
      if (g != 1 && g != m) {
        pending.push_back(g);
        pending.push_back(m / g);
        split = true;
      }
    }
    if (!split) throw factorization_error(m);
  }
  std::sort(primes.begin(), primes.end());
  std::vector<BigPrimePower> out;
  for (auto& p : primes) {
    if (!out.empty() && out.back().prime == p)
      ++out.back().exponent;
    else
      out.push_back({p, 1});
  }
  return out;
}

/// 0 when n has a squared prime factor, otherwise (-1)^(number of primes).
inline int mobius(u64 n, const Effort& effort = {}) {
  if (n == 0) throw std::invalid_argument("mobius: n must be >= 1");
  int sign = 1;
  for (const auto& f : factorize(n, effort)) {
    if (f.exponent > 1) return 0;
    sign = -sign;
  }
  return sign;
}

/// Largest e with p^e | n. n must be nonzero.
inline unsigned v_int(i64 n, u64 p) {
  if (n == 0) throw std::domain_error("v_int: valuation of zero is infinite");
  if (p < 2) throw std::invalid_argument("v_int: p must be prime");
  u64 m = detail::abs_u64(n);
  unsigned e = 0;
  while (m % p == 0) {
    m /= p;
    ++e;
  }
  return e;
}

inline unsigned v_int(const mpz_class& n, u64 p) {
  if (sgn(n) == 0) throw std::domain_error("v_int: valuation of zero is infinite");
  if (p < 2) throw std::invalid_argument("v_int: p must be prime");
  const mpz_class prime = detail::to_mpz(p);
  mpz_class rest;
  return unsigned(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t()));
}

/// Sorted list of all positive divisors.
inline std::vector<u64> divisors(const PrimeFactorization& f) {
  std::vector<u64> out{1};
  for (const auto& [p, k] : f) {
    const std::size_t base = out.size();
    u64 pk = 1;
    for (unsigned e = 1; e <= k; ++e) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Primes up to a limit, by the sieve of Eratosthenes.
class PrimeTable {
 public:
  explicit PrimeTable(u64 limit) : limit_(limit) {
    if (limit < 2) return;
    std::vector<bool> composite(limit + 1, false);
    for (u64 i = 2; i <= limit; ++i) {
      if (composite[i]) continue;
      primes_.push_back(i);
      for (u64 k = i * i; k <= limit; k += i) composite[k] = true;
    }
  }

  u64 limit() const noexcept { return limit_; }
  const std::vector<u64>& primes() const noexcept { return primes_; }

  /// Primes p <= bound (bound clipped to the table limit).
  std::pair<std::vector<u64>::const_iterator, std::vector<u64>::const_iterator> up_to(u64 bound) const {
    return {primes_.begin(), std::upper_bound(primes_.begin(), primes_.end(), bound)};
  }

 private:
  u64 limit_;
  std::vector<u64> primes_;
};

/// gcd of two signed values as a nonnegative integer.
inline u64 gcd_signed(i64 a, i64 b) { return std::gcd(detail::abs_u64(a), detail::abs_u64(b)); }

/// n^e, or nullopt if it does not fit in 64 bits.
inline std::optional<u64> checked_pow(u64 n, unsigned e) {
  u128 r = 1;
  for (unsigned i = 0; i < e; ++i) {
    r *= n;
    if (r > std::numeric_limits<u64>::max()) return std::nullopt;
  }
  return u64(r);
}

inline std::optional<u64> checked_mul(u64 x, u64 y) {
  const u128 r = u128(x) * y;
  if (r > std::numeric_limits<u64>::max()) return std::nullopt;
  return u64(r);
}

}  // namespace divpow
