#pragma once

// Multiplicative order of a/b modulo p and exact p-adic valuations of
// a^n - b^n, obtained by lifting from the order instead of evaluating the
// power difference.

#include <cmath>
#include <optional>
#include <stdexcept>

#include "divpow/arith.hpp"

namespace divpow {

/// Order data for the ratio a/b at a prime p not dividing ab.
///   order: least d >= 1 with a^d == b^d (mod p)
///   lift:  t with p^t exactly dividing a^d - b^d; for p = 2 it is taken
///          from lcm(a - b, a + b)
struct RatioOrder {
  u64 prime;
  u64 order;
  unsigned lift;

  friend bool operator==(const RatioOrder&, const RatioOrder&) = default;
};

namespace detail {

inline void require_coprime_distinct(i64 a, i64 b, const char* what) {
  if (gcd_signed(a, b) != 1) throw std::invalid_argument(std::string(what) + ": requires gcd(a, b) = 1");
  if (a == b || i128(a) == -i128(b)) throw std::invalid_argument(std::string(what) + ": requires a != +-b");
}

// a^e == b^e (mod m) for a modulus given as a prime power p^s.
inline bool powers_agree(i64 a, i64 b, u64 e, u64 p, unsigned s) {
  if (const auto m = checked_pow(p, s)) return modpow_signed(a, e, *m) == modpow_signed(b, e, *m);
  mpz_class m;
  mpz_ui_pow_ui(m.get_mpz_t(), p, s);
  const mpz_class exp = to_mpz(e);
  return modpow_signed(to_mpz(a), exp, m) == modpow_signed(to_mpz(b), exp, m);
}

inline unsigned lift_cap(i64 a, i64 b, u64 d, u64 p) {
  const double top = double(std::max(abs_u64(a), abs_u64(b)));
  const double bits = double(d) * std::log2(std::max(top, 2.0)) + 1.0;
  return unsigned(bits / std::log2(double(p))) + 2;
}

}  // namespace detail

/// Order of a * b^-1 modulo p together with its lifting exponent. Returns
/// nullopt when p divides ab (no such order exists).
inline std::optional<RatioOrder> ratio_order(i64 a, i64 b, u64 p, const Effort& effort = {}) {
  detail::require_coprime_distinct(a, b, "ratio_order");
  if (!is_prime(p)) throw std::invalid_argument("ratio_order: p must be prime");
  if (modpow_signed(a, 1, p) == 0 || modpow_signed(b, 1, p) == 0) return std::nullopt;

  if (p == 2) {
    const i128 diff = i128(a) - b, sum = i128(a) + b;
    return RatioOrder{2, 1, detail::v2(diff) + detail::v2(sum) - 1};
  }

  const u64 b_inv = modpow_signed(b, p - 2, p);
  const u64 ratio = detail::mulmod(modpow_signed(a, 1, p), b_inv, p);
  u64 order = p - 1;
  for (const auto& [q, k] : factorize(p - 1, effort)) {
    for (unsigned i = 0; i < k && order % q == 0; ++i) {
      if (detail::powmod_u64(ratio, order / q, p) != 1) break;
      order /= q;
    }
  }

  unsigned lift = 1;
  const unsigned cap = detail::lift_cap(a, b, order, p);
  while (detail::powers_agree(a, b, order, p, lift + 1)) {
    if (++lift > cap) throw std::logic_error("ratio_order: lifting did not terminate");
  }
  return RatioOrder{p, order, lift};
}

/// Exact v_p(a^n - b^n) for coprime a != +-b.
///   odd p: 0 unless ord_p(a/b) | n, then t + v_p(n)
///   p = 2: v2(a - b) for odd n, v2(a - b) + v2(a + b) - 1 + v2(n) for even n
inline unsigned power_diff_valuation(i64 a, i64 b, u64 n, u64 p, const Effort& effort = {}) {
  detail::require_coprime_distinct(a, b, "power_diff_valuation");
  if (n == 0) throw std::invalid_argument("power_diff_valuation: n must be >= 1");
  if (p == 2) {
    const i128 diff = i128(a) - b, sum = i128(a) + b;
    if (diff % 2 != 0) return 0;
    if (n % 2 != 0) return detail::v2(diff);
    return detail::v2(diff) + detail::v2(sum) - 1 + unsigned(std::countr_zero(n));
  }
  const auto ro = ratio_order(a, b, p, effort);
  if (!ro || n % ro->order != 0) return 0;
  unsigned vn = 0;
  for (u64 m = n; m % p == 0; m /= p) ++vn;
  return ro->lift + vn;
}

/// 2-adic valuation of lcm(a^n - b^n, a^n + b^n). Never equal to 1.
inline unsigned e2_lcm(i64 a, i64 b, u64 n) {
  detail::require_coprime_distinct(a, b, "e2_lcm");
  if (n == 0) throw std::invalid_argument("e2_lcm: n must be >= 1");
  const i128 diff = i128(a) - b, sum = i128(a) + b;
  if (diff % 2 != 0) return 0;
  if (n % 2 != 0) return std::max(detail::v2(diff), detail::v2(sum));
  return power_diff_valuation(a, b, n, 2);
}

}  // namespace divpow
