#pragma once

// Lifting the coprime core to arbitrary pairs: b = 0, gcd(a, b) > 1 through
// the split n = G * n1, and the sets for a^n + b^n.

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "divpow/arith.hpp"
#include "divpow/classify.hpp"
#include "divpow/divset.hpp"
#include "divpow/valuation.hpp"

namespace divpow {

/// True iff every prime factor of n divides a (F_a membership).
inline bool in_Fa(u64 n, u64 a) {
  if (n == 0) throw std::invalid_argument("in_Fa: n must be >= 1");
  if (a < 2) throw std::invalid_argument("in_Fa: a must be >= 2");
  while (n > 1) {
    const u64 g = std::gcd(n, a);
    if (g == 1) return false;
    while (n % g == 0) n /= g;
  }
  return true;
}

/// Elements of F_a up to bound, ascending.
inline std::vector<u64> smooth_over(u64 a, u64 bound) {
  if (a < 2) throw std::invalid_argument("smooth_over: a must be >= 2");
  const auto f = factorize(a);
  std::vector<u64> out;
  std::function<void(std::size_t, u64)> walk = [&](std::size_t i, u64 v) {
    if (i == f.size()) {
      out.push_back(v);
      return;
    }
    const u64 p = f.factors()[i].prime;
    for (u64 w = v;;) {
      walk(i + 1, w);
      if (w > bound / p) break;
      w *= p;
    }
  };
  if (bound >= 1) walk(0, 1);
  std::sort(out.begin(), out.end());
  return out;
}

/// Least K >= 1 with K * p1^-K <= min_i(a_i) / j, where a = prod p_i^a_i and
/// p1 is the smallest prime of a. Compared exactly as K * j <= m * p1^K.
inline unsigned K_constant(u64 a, unsigned j) {
  if (a < 2) throw std::invalid_argument("K_constant: a must be >= 2");
  if (j == 0) throw std::invalid_argument("K_constant: j must be >= 1");
  const auto f = factorize(a);
  unsigned m = ~0u;
  for (const auto& pk : f) m = std::min(m, pk.exponent);
  const u64 p1 = f.factors().front().prime;
  u128 power = 1;
  for (unsigned K = 1;; ++K) {
    power = std::min<u128>(power * p1, u128(1) << 100);
    if (u128(K) * j <= u128(m) * power) return K;
  }
}

/// Elements of F_a violating k_i <= (a_i / j) * n for some i. Only tuples
/// with sum k_i < K_constant(a, j) can fail, so the search is finite.
inline std::vector<u64> a0_exceptions(u64 a, unsigned j) {
  if (j <= 2) return {};
  const auto f = factorize(a);
  const unsigned K = K_constant(a, j);
  std::vector<u64> out;
  std::vector<unsigned> k(f.size(), 0);
  std::function<void(std::size_t, unsigned, u128)> walk = [&](std::size_t i, unsigned used, u128 n) {
    if (i == f.size()) {
      for (std::size_t t = 0; t < f.size(); ++t) {
        if (u128(j) * k[t] > u128(f.factors()[t].exponent) * n) {
          out.push_back(u64(n));
          return;
        }
      }
      return;
    }
    for (unsigned e = 0; used + e < K; ++e) {
      k[i] = e;
      walk(i + 1, used + e, n);
      n *= f.factors()[i].prime;
      if (n > std::numeric_limits<u64>::max()) break;
    }
    k[i] = 0;
  };
  walk(0, 0, 1);
  std::sort(out.begin(), out.end());
  return out;
}

/// R(a, 0, j) up to bound: all of F_a for j <= 2, F_a minus the finite
/// exception set for j >= 3.
inline std::vector<u64> enumerate_a0(u64 a, unsigned j, u64 bound) {
  if (j == 0) throw std::invalid_argument("enumerate_a0: j must be >= 1");
  auto all = smooth_over(a, bound);
  const auto skip = a0_exceptions(a, j);
  std::erase_if(all, [&](u64 n) { return std::binary_search(skip.begin(), skip.end(), n); });
  return all;
}

/// n^j | a^n - b^n for any pair. Per prime q^k || n the test is
/// j*k <= n*v_q(g) + v_q(a1^n - b1^n) with g = gcd(a, b), a = g*a1, b = g*b1.
inline bool member_general(i64 a, i64 b, unsigned j, u64 n, const Effort& effort = {}) {
  if (n == 0) throw std::invalid_argument("member_general: n must be >= 1");
  if (j == 0) throw std::invalid_argument("member_general: j must be >= 1");
  if (a == b) return true;
  const u64 g = gcd_signed(a, b);
  const i64 a1 = a / i64(g), b1 = b / i64(g);
  const bool opposite = i128(a1) == -i128(b1);
  for (const auto& [q, k] : factorize(n, effort)) {
    unsigned vg = 0;
    for (u64 m = g; m % q == 0; m /= q) ++vg;
    u128 have = u128(n) * vg;
    if (opposite) {
      if (n % 2 == 0) continue;  // a1^n - b1^n = 0
      have += (q == 2);          // a1^n - b1^n = +-2
    } else {
      have += power_diff_valuation(a1, b1, n, q, effort);
    }
    if (u128(j) * k > have) return false;
  }
  return true;
}

/// Members up to bound for any pair with a != b. Coprime pairs go straight
/// to enumerate(). Otherwise for each G in F_g the members n1 of
/// R(a1^G, b1^G, j) coprime to g are enumerated with exponents scaled by G,
/// and every candidate G * n1 is confirmed by member_general (this removes
/// the finite exceptional set).
inline EnumResult enumerate_general(i64 a, i64 b, unsigned j, u64 bound, const EnumOptions& options = {}) {
  if (a == b) throw std::invalid_argument("enumerate: a = b makes every n a member (infinite, trivial)");
  if (bound == 0) throw std::invalid_argument("enumerate: bound must be >= 1");
  const u64 g = gcd_signed(a, b);
  if (g == 1) return enumerate(Instance{a, b, j}, bound, options);

  EnumResult result;
  const i64 a1 = a / i64(g), b1 = b / i64(g);
  if (i128(a1) == -i128(b1)) {
    for (u64 n = 1; n <= bound; ++n)
      if (member_general(a, b, j, n, options.effort)) result.members.push_back(n);
    result.note = "a = -b: direct scan";
  } else {
    EnumOptions inner = options;
    inner.coprime_to = g;
    inner.build_tree = false;
    for (u64 G : smooth_over(g, bound)) {
      const auto part = enumerate(Instance{a1, b1, j, G}, bound / G, inner);
      if (!part.complete) {
        result.complete = false;
        result.note = part.note;
      }
      for (u64 n1 : part.members)
        if (member_general(a, b, j, G * n1, options.effort)) result.members.push_back(G * n1);
    }
    std::sort(result.members.begin(), result.members.end());
  }
  if (options.build_tree) result.tree = build_tree(result.members, options.effort);
  return result;
}

/// n^j | a^n + b^n by residues modulo n^j.
inline bool plus_member_direct(i64 a, i64 b, unsigned j, u64 n) {
  if (n == 0) throw std::invalid_argument("plus_member: n must be >= 1");
  if (n == 1) return true;
  if (const auto m = checked_pow(n, j)) {
    const u128 sum = u128(modpow_signed(a, n, *m)) + modpow_signed(b, n, *m);
    return sum % *m == 0;
  }
  mpz_class m;
  mpz_ui_pow_ui(m.get_mpz_t(), n, j);
  const mpz_class e = detail::to_mpz(n);
  const mpz_class s = modpow_signed(detail::to_mpz(a), e, m) + modpow_signed(detail::to_mpz(b), e, m);
  return mpz_divisible_p(s.get_mpz_t(), m.get_mpz_t()) != 0;
}

struct PlusResult {
  std::vector<u64> members;
  bool complete = true;
  std::optional<Classification> classification;  // j = 1 and j = 2 only
  std::string note;
};

namespace detail {

inline bool power_of_two_or_one(i128 v) { return v > 0 && (v & (v - 1)) == 0; }

inline Classification classify_plus(i64 a, i64 b, unsigned j) {
  Classification c;
  const i128 sum = i128(a) + b;
  if (j == 1) {
    if (a == 1 && b == 1) {
      c.kind = SetKind::FiniteExplicit;
      c.members = {1, 2};
      c.reason = "a = b = 1";
    } else if (sum == 1) {
      // a^n + b^n is odd for every n, and n | a^n - (-b)^n forces n = 1.
      c.kind = SetKind::SingletonOne;
      c.members = {1};
      c.reason = "a + b = 1";
    } else {
      c.kind = SetKind::Infinite;
      c.reason = "a + b > 1: an odd prime of a + b or of a^2 + b^2 seeds infinitely many members";
    }
  } else {
    if (a == 2 && b == 1) {
      c.kind = SetKind::FiniteExplicit;
      c.members = {1, 3};
      c.reason = "(a, b) = (2, 1)";
    } else if (power_of_two_or_one(sum)) {
      c.kind = SetKind::SingletonOne;
      c.members = {1};
      c.reason = "a + b is 1 or a power of 2";
    } else {
      c.kind = SetKind::Infinite;
      c.reason = "R(a, -b, 2) has infinitely many odd members";
    }
  }
  return c;
}

}  // namespace detail

/// { n <= bound : n^j | a^n + b^n }. For coprime pairs, after normalizing to
/// a > 0, a >= |b|: j >= 2 gives the odd members of R(a, -b, j); j = 1 adds
/// 2*n1 for odd n1 in R(a^2, -b^2, 1). Every element is re-verified directly.
/// Pairs with gcd > 1 or a = +-b are scanned directly.
inline PlusResult plus_set(i64 a, i64 b, unsigned j, u64 bound, const EnumOptions& options = {}) {
  if (j == 0) throw std::invalid_argument("plus_set: j must be >= 1");
  if (bound == 0) throw std::invalid_argument("plus_set: bound must be >= 1");
  if (a == 0 && b == 0) throw std::invalid_argument("plus_set: a = b = 0 makes every n a member");
  PlusResult out;
  const u64 g = gcd_signed(a, b);
  const auto direct_scan = [&] {
    for (u64 n = 1; n <= bound; ++n)
      if (plus_member_direct(a, b, j, n)) out.members.push_back(n);
  };

  if (g > 1) {
    direct_scan();
    out.note = "gcd(a, b) > 1: direct scan";
    if (j <= 2) {
      Classification c;
      c.kind = SetKind::Infinite;
      c.reason = "contains R(g, 0, j) = F_g";
      out.classification = c;
    }
    return out;
  }

  const auto [na, nb] = normalize(a, b);
  if (j <= 2) out.classification = detail::classify_plus(na, nb, j);
  if (na == nb || i128(na) == -i128(nb)) {
    direct_scan();
    out.note = "a = +-b: direct scan";
    return out;
  }

  EnumOptions opts = options;
  opts.build_tree = false;
  std::vector<u64> candidates;
  auto base = enumerate(Instance{na, -nb, j}, bound, opts);
  out.complete = base.complete;
  for (u64 n : base.members)
    if (n % 2 == 1) candidates.push_back(n);
  if (j == 1 && bound >= 2) {
    const auto sq = [](i64 v) {
      const auto r = checked_mul(detail::abs_u64(v), detail::abs_u64(v));
      if (!r || *r > u64(std::numeric_limits<i64>::max())) throw std::overflow_error("plus_set: a^2 overflows");
      return i64(*r);
    };
    auto doubled = enumerate(Instance{sq(na), -sq(nb), 1}, bound / 2, opts);
    out.complete = out.complete && doubled.complete;
    for (u64 n1 : doubled.members)
      if (n1 % 2 == 1) candidates.push_back(2 * n1);
  }
  std::sort(candidates.begin(), candidates.end());
  std::size_t dropped = 0;
  for (u64 n : candidates) {
    if (plus_member_direct(a, b, j, n))
      out.members.push_back(n);
    else
      ++dropped;
  }
  if (dropped != 0) out.note = std::to_string(dropped) + " candidate(s) failed direct verification";
  return out;
}

}  // namespace divpow
