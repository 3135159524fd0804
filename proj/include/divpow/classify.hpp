#pragma once

// Finiteness of R(a, b, 1) and R(a, b, 2), plus the primitive prime divisor
// machinery behind it: homogeneous cyclotomic values and a least-primitive-
// divisor search.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "divpow/arith.hpp"
#include "divpow/divset.hpp"

namespace divpow {

enum class SetKind { SingletonOne, FiniteExplicit, Infinite, ConjecturallyFinite };

inline const char* to_string(SetKind kind) {
  switch (kind) {
    case SetKind::SingletonOne: return "SingletonOne";
    case SetKind::FiniteExplicit: return "FiniteExplicit";
    case SetKind::Infinite: return "Infinite";
    case SetKind::ConjecturallyFinite: return "ConjecturallyFinite";
  }
  return "?";
}

struct Classification {
  SetKind kind = SetKind::Infinite;
  // The exact set for SingletonOne / FiniteExplicit; the members found up to
  // `bound` for ConjecturallyFinite.
  std::vector<u64> members;
  std::string reason;
  // For j = 2: primes dividing some member when that set is finite,
  // nullopt when it is infinite or not determined.
  std::optional<std::vector<u64>> prime_support;
  u64 bound = 0;
  bool complete = true;
};

/// Swap and/or negate so that a > 0 and a > b (and a >= |b|). Both moves
/// preserve every set handled here.
inline std::pair<i64, i64> normalize(i64 a, i64 b) {
  if (a < b) std::swap(a, b);
  if (i128(a) + b < 0) {
    const i64 na = -b, nb = -a;
    a = na;
    b = nb;
  }
  return {a, b};
}

namespace detail {

inline std::vector<u64> primes_of(u64 v) {
  std::vector<u64> out;
  for (const auto& f : factorize(v)) out.push_back(f.prime);
  return out;
}

}  // namespace detail

/// Verdict on finiteness. j = 1 and j = 2 are decided exactly; for j >= 3 a
/// gcd above 1 still forces an infinite set and the cases where R(a, b, 2)
/// is finite pin down R(a, b, j) by nesting. Otherwise the result is
/// ConjecturallyFinite with the members up to `bound`.
inline Classification classify(const Instance& inst, u64 bound = 10000, const EnumOptions& options = {}) {
  if (inst.j == 0) throw std::invalid_argument("classify: j must be >= 1");
  if (inst.a == inst.b || i128(inst.a) == -i128(inst.b)) throw std::invalid_argument("classify: requires a != +-b");
  const auto [a, b] = normalize(inst.a, inst.b);
  const u64 g = gcd_signed(a, b);
  const i128 diff = i128(a) - b;
  const bool consecutive = diff == 1;
  const bool minus_two = i128(a) * b == -2;

  Classification c;
  if (inst.j == 1) {
    if (consecutive) {
      c.kind = SetKind::SingletonOne;
      c.members = {1};
      c.reason = "a - b = +-1";
    } else {
      c.kind = SetKind::Infinite;
      c.reason = "every power of a prime dividing a - b is a member";
    }
    return c;
  }

  if (inst.j == 2) {
    if (consecutive) {
      c.kind = SetKind::SingletonOne;
      c.members = {1};
      c.reason = "a and b are consecutive integers";
      c.prime_support = std::vector<u64>{};
    } else if (minus_two) {
      c.kind = SetKind::FiniteExplicit;
      c.members = {1, 3};
      c.reason = "ab = -2";
      c.prime_support = std::vector<u64>{3};
    } else {
      c.kind = SetKind::Infinite;
      c.reason = g > 1 ? "contains F_g for g = gcd(a, b) > 1"
                       : "not consecutive and ab != -2: a member >= 4 exists and primitive divisors extend it";
      const i64 a1 = a / i64(g), b1 = b / i64(g);
      if (g > 1 && i128(a1) - b1 == 1) {
        c.prime_support = detail::primes_of(g);
      } else if (g > 1 && i128(a1) * b1 == -2) {
        c.prime_support = detail::primes_of(3 * g);
      }
    }
    return c;
  }

  if (g > 1) {
    c.kind = SetKind::Infinite;
    c.reason = "contains R(g, 0, j), all but finitely many of F_g";
    return c;
  }
  if (consecutive) {
    c.kind = SetKind::SingletonOne;
    c.members = {1};
    c.reason = "nested in R(a, b, 1) = {1}";
    return c;
  }
  if (minus_two) {
    c.members = {1};
    if (member(Instance{a, b, inst.j}, 3)) c.members.push_back(3);
    c.kind = c.members.size() == 1 ? SetKind::SingletonOne : SetKind::FiniteExplicit;
    c.reason = "nested in R(a, b, 2) = {1, 3}";
    return c;
  }
  EnumOptions opts = options;
  opts.build_tree = false;
  auto result = enumerate(Instance{a, b, inst.j}, bound, opts);
  c.kind = SetKind::ConjecturallyFinite;
  c.members = std::move(result.members);
  c.reason = "j >= 3: bounded enumeration only, no finiteness verdict";
  c.bound = bound;
  c.complete = result.complete;
  return c;
}

/// Phi_n(a, b) = prod_{d | n} (a^d - b^d)^mu(n/d), exactly.
inline mpz_class cyclotomic_value(u64 n, i64 a, i64 b) {
  if (n == 0) throw std::invalid_argument("cyclotomic_value: n must be >= 1");
  mpz_class num = 1, den = 1;
  const mpz_class A = detail::to_mpz(a), B = detail::to_mpz(b);
  for (u64 d : divisors(factorize(n))) {
    const int mu = mobius(n / d);
    if (mu == 0) continue;
    mpz_class ad, bd;
    mpz_pow_ui(ad.get_mpz_t(), A.get_mpz_t(), d);
    mpz_pow_ui(bd.get_mpz_t(), B.get_mpz_t(), d);
    const mpz_class term = ad - bd;
    if (term == 0) throw std::invalid_argument("cyclotomic_value: a^d = b^d for a divisor d of n");
    (mu > 0 ? num : den) *= term;
  }
  mpz_class out;
  mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return out;
}

struct PrimitiveDivisor {
  enum class Status { Found, None, Unknown };

  Status status = Status::None;
  mpz_class prime;  // valid when status == Found
  std::string note;
};

/// Least prime dividing a^n - b^n but no a^k - b^k with k < n.
/// Requires gcd(a, b) = 1, a > b and a + b > 0. Candidates are taken from
/// Phi_n(a, b) with the largest prime of n stripped; primes = 1 (mod n)
/// are tried first by trial division. Status::Unknown when factoring the
/// remaining cofactor exceeds the effort bound.
inline PrimitiveDivisor primitive_divisor(i64 a, i64 b, u64 n, const Effort& effort = {},
                                          u64 trial_limit = u64{1} << 20) {
  if (n == 0) throw std::invalid_argument("primitive_divisor: n must be >= 1");
  if (gcd_signed(a, b) != 1) throw std::invalid_argument("primitive_divisor: requires gcd(a, b) = 1");
  if (!(a > b) || !(i128(a) + b > 0)) throw std::invalid_argument("primitive_divisor: requires a > b and a + b > 0");

  const auto proper_divisors = [&] {
    auto d = divisors(factorize(n));
    d.pop_back();
    return d;
  }();
  const mpz_class A = detail::to_mpz(a), B = detail::to_mpz(b);
  const auto is_primitive = [&](const mpz_class& q) {
    const auto divides = [&](u64 k) {
      const mpz_class e = detail::to_mpz(k);
      return modpow_signed(A, e, q) == modpow_signed(B, e, q);
    };
    if (!divides(n)) return false;
    for (u64 k : proper_divisors)
      if (divides(k)) return false;
    return true;
  };

  mpz_class c = n == 1 ? mpz_class(A - B) : cyclotomic_value(n, a, b);
  c = abs(c);
  if (n > 1) {
    const mpz_class intrinsic = detail::to_mpz(factorize(n).largest_prime());
    while (mpz_divisible_p(c.get_mpz_t(), intrinsic.get_mpz_t())) c /= intrinsic;
  }

  PrimitiveDivisor out;
  if (c == 1) return out;

  for (u64 q = n + 1; q <= trial_limit; q += n) {
    const mpz_class qz = detail::to_mpz(q);
    if (qz * qz > c) break;
    if (!mpz_divisible_ui_p(c.get_mpz_t(), q) || !is_prime(q)) continue;
    if (is_primitive(qz)) {
      out.status = PrimitiveDivisor::Status::Found;
      out.prime = qz;
      return out;
    }
    while (mpz_divisible_ui_p(c.get_mpz_t(), q)) c /= qz;
  }
  if (c == 1) return out;

  try {
    for (const auto& f : factorize_big(c, effort)) {
      if (is_primitive(f.prime)) {
        out.status = PrimitiveDivisor::Status::Found;
        out.prime = f.prime;
        return out;
      }
    }
  } catch (const factorization_error& e) {
    out.status = PrimitiveDivisor::Status::Unknown;
    out.note = e.what();
  }
  return out;
}

}  // namespace divpow
