#pragma once

// The set R(a, b, j) = { n >= 1 : n^j | a^n - b^n } for coprime a, b:
// membership, extension sets, parent reduction, chain certificates and
// bounded enumeration with the labelled member graph.

#include <algorithm>
#include <cassert>
#include <deque>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "divpow/arith.hpp"
#include "divpow/valuation.hpp"

namespace divpow {

/// A query triple. `stride` lets the same machinery work on the pair
/// (a^stride, b^stride) without forming those powers: every exponent is
/// scaled by it. Plain instances leave it at 1.
struct Instance {
  i64 a = 0;
  i64 b = 0;
  unsigned j = 1;
  u64 stride = 1;

  friend bool operator==(const Instance&, const Instance&) = default;
};

namespace detail {

inline void validate(const Instance& inst) {
  if (inst.j == 0) throw std::invalid_argument("instance: j must be >= 1");
  if (inst.stride == 0) throw std::invalid_argument("instance: stride must be >= 1");
}

// a^s == b^s: every n is a member.
inline bool all_members(const Instance& inst) {
  return inst.a == inst.b || (i128(inst.a) == -i128(inst.b) && inst.stride % 2 == 0);
}

// a^s == -b^s: the order machinery does not apply, the direct test does.
inline bool opposite_pair(const Instance& inst) {
  return i128(inst.a) == -i128(inst.b) && inst.a != inst.b && inst.stride % 2 == 1;
}

inline u64 scaled_exponent(const Instance& inst, u64 n) {
  const auto e = checked_mul(inst.stride, n);
  if (!e) throw std::overflow_error("exponent stride * n exceeds 64 bits");
  return *e;
}

inline void require_coprime(const Instance& inst, const char* what) {
  if (gcd_signed(inst.a, inst.b) != 1)
    throw std::invalid_argument(std::string(what) + ": gcd(a, b) != 1, use member_general/enumerate_general");
}

}  // namespace detail

/// n^j | A^n - B^n with A = a^stride, B = b^stride, checked by modular
/// exponentiation modulo n^j. Valid for any pair, including a = +-b.
inline bool member_direct(const Instance& inst, u64 n) {
  detail::validate(inst);
  if (n == 0) throw std::invalid_argument("member: n must be >= 1");
  if (n == 1) return true;
  const auto exp = checked_mul(inst.stride, n);
  const auto mod = checked_pow(n, inst.j);
  if (exp && mod) return modpow_signed(inst.a, *exp, *mod) == modpow_signed(inst.b, *exp, *mod);
  mpz_class m;
  mpz_ui_pow_ui(m.get_mpz_t(), n, inst.j);
  const mpz_class e = detail::to_mpz(inst.stride) * detail::to_mpz(n);
  return modpow_signed(detail::to_mpz(inst.a), e, m) == modpow_signed(detail::to_mpz(inst.b), e, m);
}

/// Membership through valuations: for every p^k || n, j*k <= v_p(A^n - B^n).
/// Needs gcd(a, b) = 1 and a != +-b.
inline bool member_by_order(const Instance& inst, u64 n, const Effort& effort = {}) {
  detail::validate(inst);
  detail::require_coprime(inst, "member_by_order");
  if (n == 0) throw std::invalid_argument("member: n must be >= 1");
  const u64 exp = detail::scaled_exponent(inst, n);
  for (const auto& [p, k] : factorize(n, effort)) {
    const unsigned e = power_diff_valuation(inst.a, inst.b, exp, p, effort);
    if (u64(inst.j) * k > e) return false;
  }
  return true;
}

/// Public membership test for coprime pairs. Uses the valuation route and,
/// in debug builds, cross-checks it against the direct residue.
inline bool member(const Instance& inst, u64 n, const Effort& effort = {}) {
  detail::validate(inst);
  if (n == 0) throw std::invalid_argument("member: n must be >= 1");
  detail::require_coprime(inst, "member");
  if (detail::all_members(inst) || detail::opposite_pair(inst)) return member_direct(inst, n);
  const bool result = member_by_order(inst, n, effort);
  assert(result == member_direct(inst, n));
  return result;
}

/// n / (largest prime factor of n); nullopt for n = 1, the root.
inline std::optional<u64> parent(u64 n, const Effort& effort = {}) {
  if (n == 0) throw std::invalid_argument("parent: n must be >= 1");
  if (n == 1) return std::nullopt;
  return n / factorize(n, effort).largest_prime();
}

struct ExtensionEntry {
  static constexpr unsigned kUnbounded = ~0u;

  u64 prime;
  unsigned valuation;  // e_p of A^n - B^n (lcm-based e_2 for p = 2)
  unsigned max_power;  // largest admissible k, kUnbounded when j = 1

  bool unbounded() const noexcept { return max_power == kUnbounded; }
  friend bool operator==(const ExtensionEntry&, const ExtensionEntry&) = default;
};

/// Prime powers p^k with n * p^k still a member, restricted to p <= bound.
struct ExtensionSet {
  u64 n = 1;
  std::vector<ExtensionEntry> entries;
};

namespace detail {

template <typename PrimeIt>
std::vector<ExtensionEntry> scan_extensions(const Instance& inst, u64 n, PrimeIt first, PrimeIt last,
                                            u64 coprime_to, const Effort& effort) {
  std::vector<ExtensionEntry> out;
  const u64 exp = scaled_exponent(inst, n);
  for (auto it = first; it != last; ++it) {
    const u64 p = *it;
    if (coprime_to != 0 && coprime_to % p == 0) continue;
    unsigned e = 0;
    if (p == 2) {
      e = e2_lcm(inst.a, inst.b, exp);
    } else {
      const u64 ar = reduce_signed(inst.a, p), br = reduce_signed(inst.b, p);
      if (ar == 0 || br == 0) continue;
      const u64 reduced = exp % (p - 1);
      if (powmod_u64(ar, reduced, p) != powmod_u64(br, reduced, p)) continue;
      e = power_diff_valuation(inst.a, inst.b, exp, p, effort);
    }
    if (e == 0) continue;
    unsigned kp = 0;
    for (u64 m = n; m % p == 0; m /= p) ++kp;
    if (inst.j == 1) {
      out.push_back({p, e, ExtensionEntry::kUnbounded});
      continue;
    }
    const u64 used = u64(inst.j) * kp;
    if (e < used + inst.j - 1) continue;
    out.push_back({p, e, unsigned((e - used) / (inst.j - 1))});
  }
  return out;
}

}  // namespace detail

/// Extension set of a member n over primes p <= prime_bound. Candidate
/// primes are tested directly (a^n == b^n mod p), so a^n - b^n is never
/// factored.
inline ExtensionSet extensions(const Instance& inst, u64 n, u64 prime_bound, const Effort& effort = {}) {
  detail::validate(inst);
  detail::require_coprime(inst, "extensions");
  if (detail::all_members(inst) || detail::opposite_pair(inst))
    throw std::invalid_argument("extensions: requires a != +-b");
  if (!member(inst, n, effort)) throw std::invalid_argument("extensions: n is not a member");
  const PrimeTable table(prime_bound);
  const auto [first, last] = table.up_to(prime_bound);
  return {n, detail::scan_extensions(inst, n, first, last, 0, effort)};
}

struct CertificateStep {
  u64 prime;
  unsigned exponent;
  u64 base;               // n_i, product of the earlier prime powers
  unsigned required;      // needed valuation at `prime`
  unsigned witnessed;     // valuation actually present

  friend bool operator==(const CertificateStep&, const CertificateStep&) = default;
};

/// Chain n_1 = 1, n_{i+1} = n_i * p_i^{k_i} over the ascending factorization
/// of n, each step witnessing p_i^{required} | a^{n_i} - b^{n_i}.
struct Certificate {
  Instance instance;
  u64 n = 1;
  std::vector<CertificateStep> chain;
};

/// The first step of the chain that fails.
struct NonMembership {
  u64 n;
  CertificateStep failing;
};

namespace detail {

inline unsigned required_valuation(unsigned j, unsigned k) { return j == 1 ? 1u : (j - 1) * k; }

inline unsigned witnessed_valuation(const Instance& inst, u64 p, u64 base, const Effort& effort) {
  const u64 exp = scaled_exponent(inst, base);
  if (p == 2 && inst.j >= 2) return e2_lcm(inst.a, inst.b, exp);
  return power_diff_valuation(inst.a, inst.b, exp, p, effort);
}

}  // namespace detail

inline std::variant<Certificate, NonMembership> certify(const Instance& inst, u64 n, const Effort& effort = {}) {
  detail::validate(inst);
  detail::require_coprime(inst, "certify");
  if (n == 0) throw std::invalid_argument("certify: n must be >= 1");
  if (detail::all_members(inst) || detail::opposite_pair(inst))
    throw std::invalid_argument("certify: requires a != +-b");
  Certificate cert{inst, n, {}};
  u64 base = 1;
  for (const auto& [p, k] : factorize(n, effort)) {
    CertificateStep step{p, k, base, detail::required_valuation(inst.j, k),
                         detail::witnessed_valuation(inst, p, base, effort)};
    if (step.witnessed < step.required) return NonMembership{n, step};
    cert.chain.push_back(step);
    for (unsigned i = 0; i < k; ++i) base *= p;
  }
  return cert;
}

/// Re-checks a certificate without the valuation engine: chain shape, then
/// each divisibility by residues modulo p^required.
inline bool verify(const Certificate& cert) {
  const Instance& inst = cert.instance;
  if (inst.j == 0 || inst.stride == 0 || cert.n == 0) return false;
  if (gcd_signed(inst.a, inst.b) != 1) return false;
  u64 base = 1, last_prime = 0;
  for (const auto& s : cert.chain) {
    if (s.base != base || s.prime <= last_prime || !is_prime(s.prime) || s.exponent == 0) return false;
    if (s.required != detail::required_valuation(inst.j, s.exponent) || s.witnessed < s.required) return false;
    const auto exp = checked_mul(inst.stride, s.base);
    if (!exp) return false;
    mpz_class m;
    mpz_ui_pow_ui(m.get_mpz_t(), s.prime, s.required);
    const mpz_class e = detail::to_mpz(*exp);
    const mpz_class pa = modpow_signed(detail::to_mpz(inst.a), e, m);
    const mpz_class pb = modpow_signed(detail::to_mpz(inst.b), e, m);
    bool ok = pa == pb;
    // The leading power of two may be carried by a + b instead.
    if (!ok && s.prime == 2 && inst.j >= 2) ok = mpz_class((pa + pb) % m) == 0;
    if (!ok) return false;
    for (unsigned i = 0; i < s.exponent; ++i) {
      const auto next = checked_mul(base, s.prime);
      if (!next) return false;
      base = *next;
    }
    last_prime = s.prime;
  }
  return base == cert.n;
}

/// Edge n ->_p n * p^power of the member graph. `spanning` marks the edges
/// kept by the largest-prime rule (power 1 and p the largest prime of `to`).
struct EnumEdge {
  u64 from;
  u64 prime;
  unsigned power;
  u64 to;
  bool spanning;

  friend bool operator==(const EnumEdge&, const EnumEdge&) = default;
};

struct EnumTree {
  std::vector<u64> nodes;
  std::vector<EnumEdge> edges;
};

struct EnumOptions {
  u64 max_nodes = 0;    // 0 means unlimited
  u64 coprime_to = 0;   // skip primes dividing this value (0: none)
  bool build_tree = true;
  Effort effort{};
};

struct EnumResult {
  std::vector<u64> members;
  EnumTree tree;
  bool complete = true;
  std::string note;
};

/// Member graph over a sorted member list: every edge c / p^e -> c between
/// listed members.
inline EnumTree build_tree(const std::vector<u64>& members, const Effort& effort = {}) {
  EnumTree tree{members, {}};
  const auto contains = [&](u64 v) { return std::binary_search(members.begin(), members.end(), v); };
  for (u64 c : members) {
    if (c == 1) continue;
    const auto f = factorize(c, effort);
    for (const auto& [p, k] : f) {
      u64 pe = 1;
      for (unsigned e = 1; e <= k; ++e) {
        pe *= p;
        if (contains(c / pe)) tree.edges.push_back({c / pe, p, e, c, e == 1 && p == f.largest_prime()});
      }
    }
  }
  std::sort(tree.edges.begin(), tree.edges.end(), [](const EnumEdge& x, const EnumEdge& y) {
    return x.from != y.from ? x.from < y.from : x.to < y.to;
  });
  return tree;
}

/// Every n <= bound with the direct residue test. Oracle for enumerate().
inline std::vector<u64> brute_enumerate(const Instance& inst, u64 bound) {
  std::vector<u64> out;
  for (u64 n = 1; n <= bound; ++n)
    if (member_direct(inst, n)) out.push_back(n);
  return out;
}

/// Members up to `bound` by a worklist search from 1. Each node n scans the
/// primes up to bound / n for extensions; a visited set keeps every member
/// expanded once. a = b is refused (every n is a member); a = -b falls back
/// to the direct scan.
inline EnumResult enumerate(const Instance& inst, u64 bound, const EnumOptions& options = {}) {
  detail::validate(inst);
  if (bound == 0) throw std::invalid_argument("enumerate: bound must be >= 1");
  if (detail::all_members(inst))
    throw std::invalid_argument("enumerate: a^n = b^n for all n, so every n is a member (infinite, trivial)");
  EnumResult result;
  if (detail::opposite_pair(inst)) {
    for (u64 n : brute_enumerate(inst, bound))
      if (options.coprime_to == 0 || std::gcd(n, options.coprime_to) == 1) result.members.push_back(n);
    result.note = "a = -b: direct scan";
  } else {
    detail::require_coprime(inst, "enumerate");
    const PrimeTable table(bound);
    std::unordered_set<u64> visited{1};
    std::deque<u64> work{1};
    try {
      while (!work.empty()) {
        const u64 n = work.front();
        work.pop_front();
        const auto [first, last] = table.up_to(bound / n);
        for (const auto& ext : detail::scan_extensions(inst, n, first, last, options.coprime_to, options.effort)) {
          u64 child = n;
          for (unsigned k = 1; k <= ext.max_power; ++k) {
            if (child > bound / ext.prime) break;
            child *= ext.prime;
            if (visited.insert(child).second) work.push_back(child);
          }
        }
        if (options.max_nodes != 0 && visited.size() >= options.max_nodes && !work.empty()) {
          result.complete = false;
          result.note = "node budget exhausted";
          break;
        }
      }
    } catch (const factorization_error& e) {
      result.complete = false;
      result.note = e.what();
    }
    result.members.assign(visited.begin(), visited.end());
    std::sort(result.members.begin(), result.members.end());
  }
  if (options.build_tree) result.tree = build_tree(result.members, options.effort);
  return result;
}

/// Graphviz rendering: spanning edges solid, the rest dashed, each edge
/// labelled by its prime.
inline void write_dot(std::ostream& out, const EnumTree& tree, const std::string& name = "R") {
  out << "digraph \"" << name << "\" {\n";
  out << "  rankdir=TB;\n  node [shape=plaintext];\n";
  for (u64 v : tree.nodes) out << "  n" << v << " [label=\"" << v << "\"];\n";
  for (const auto& e : tree.edges) {
    out << "  n" << e.from << " -> n" << e.to << " [label=\"" << e.prime << "\", style="
        << (e.spanning ? "solid" : "dashed") << "];\n";
  }
  out << "}\n";
}

inline std::string to_dot(const EnumTree& tree, const std::string& name = "R") {
  std::ostringstream os;
  write_dot(os, tree, name);
  return os.str();
}

}  // namespace divpow
