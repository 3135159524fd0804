#pragma once

// Command-line front end. run() is the whole program; tools/divpow.cpp only
// forwards main() to it so the tests can drive it in-process.

#include <chrono>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "divpow/classify.hpp"
#include "divpow/divset.hpp"
#include "divpow/general.hpp"

namespace divpow::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIncomplete = 2 };

struct Args {
  i64 a = 0;
  i64 b = 0;
  unsigned j = 1;
  std::optional<u64> n;
  std::optional<u64> bound;
  std::optional<u64> prime_bound;
  std::optional<std::string> format;
  u64 effort = Effort{}.rho_iterations;
  u64 max_nodes = 0;
};

namespace detail {

using nlohmann::json;

class usage_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void add_common(CLI::App* cmd, Args& args) {
  cmd->add_option("--a", args.a, "first base (signed)")->required();
  cmd->add_option("--b", args.b, "second base (signed)")->required();
  cmd->add_option("--j", args.j, "exponent on n")->check(CLI::PositiveNumber);
  cmd->add_option("--n", args.n, "candidate member")->check(CLI::PositiveNumber);
  cmd->add_option("--bound", args.bound, "upper bound for enumeration")->check(CLI::PositiveNumber);
  cmd->add_option("--prime-bound", args.prime_bound, "largest prime scanned for extensions (default bound/n)")
      ->check(CLI::Range(u64{2}, std::numeric_limits<u64>::max()));
  cmd->add_option("--format", args.format, "text | json | bfile | dot")
      ->check(CLI::IsMember({"text", "json", "bfile", "dot"}));
  cmd->add_option("--effort", args.effort, "rho iterations per factorization attempt")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-nodes", args.max_nodes, "stop enumerating after this many members (0: no limit)");
}

inline u64 need(const std::optional<u64>& v, const char* flag) {
  if (!v) throw usage_error(std::string("missing required flag ") + flag);
  return *v;
}

inline std::string join(const std::vector<u64>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(v[i]);
  }
  return out;
}

inline std::string describe(const Classification& c) {
  std::string out = to_string(c.kind);
  if (c.kind != SetKind::Infinite) out += " {" + join(c.members, ",") + "}";
  if (c.kind == SetKind::ConjecturallyFinite)
    out += " (bounded to " + std::to_string(c.bound) + ": " + c.reason + ")";
  else
    out += " (Theorem: " + c.reason + ")";
  return out;
}

inline json to_json(const Classification& c) {
  json out{{"kind", to_string(c.kind)}, {"reason", c.reason}, {"complete", c.complete}};
  if (c.kind != SetKind::Infinite) out["members"] = c.members;
  if (c.kind == SetKind::ConjecturallyFinite) out["bound"] = c.bound;
  if (c.prime_support) out["prime_support"] = *c.prime_support;
  return out;
}

inline json to_json(const CertificateStep& s) {
  return {{"prime", s.prime}, {"exponent", s.exponent}, {"base", s.base}, {"required", s.required},
          {"witnessed", s.witnessed}};
}

inline void print_members(std::ostream& out, const std::string& format, json& record,
                          const std::vector<u64>& members, const EnumTree* tree) {
  if (format == "json") {
    record["members"] = members;
    out << record.dump(2) << "\n";
  } else if (format == "bfile") {
    for (std::size_t i = 0; i < members.size(); ++i) out << i + 1 << " " << members[i] << "\n";
  } else if (format == "dot") {
    if (!tree) throw usage_error("--format dot is only available for enumerate and tree");
    write_dot(out, *tree);
  } else {
    out << join(members, " ") << "\n";
  }
}

}  // namespace detail

/// Runs one CLI invocation. Exit codes: 0 success, 1 usage error,
/// 2 incomplete result (effort or node budget exceeded).
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  using detail::json;
  using detail::need;
  CLI::App app{"Enumerate, certify and classify { n : n^j | a^n - b^n }"};
  app.require_subcommand(1);
  Args args;
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"member", "is n a member of R(a, b, j)"},
      {"certify", "prime-chain certificate for n"},
      {"extensions", "prime powers p^k with n * p^k still a member"},
      {"enumerate", "all members up to --bound"},
      {"tree", "member graph up to --bound as DOT"},
      {"classify", "finiteness verdict"},
      {"plus", "members of { n : n^j | a^n + b^n } up to --bound"},
      {"a0", "R(a, 0, j) up to --bound"},
      {"oracle", "brute-force scan up to --bound"},
  };
  for (const auto& [name, help] : commands) detail::add_common(app.add_subcommand(name, help), args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const std::string format = args.format.value_or(command == "tree" ? "dot" : "text");
  Effort effort;
  effort.rho_iterations = args.effort;
  EnumOptions options;
  options.effort = effort;
  options.max_nodes = args.max_nodes;
  options.build_tree = format == "dot";

  json record;
  record["query"] = {{"command", command}, {"a", args.a}, {"b", args.b}, {"j", args.j}};
  if (args.n) record["query"]["n"] = *args.n;
  if (args.bound) record["query"]["bound"] = *args.bound;
  bool complete = true;
  const auto started = std::chrono::steady_clock::now();
  const auto stamp = [&] {
    record["complete"] = complete;
    record["elapsed_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  };

  try {
    if (command == "member") {
      const u64 n = need(args.n, "--n");
      const bool yes = member_general(args.a, args.b, args.j, n, effort);
      if (format == "json") {
        stamp();
        record["member"] = yes;
        out << record.dump(2) << "\n";
      } else {
        out << (yes ? "true" : "false") << "\n";
      }
    } else if (command == "certify") {
      const u64 n = need(args.n, "--n");
      const auto result = certify(Instance{args.a, args.b, args.j}, n, effort);
      stamp();
      if (const auto* cert = std::get_if<Certificate>(&result)) {
        record["member"] = true;
        record["verified"] = verify(*cert);
        record["certificate"] = json::array();
        for (const auto& s : cert->chain) record["certificate"].push_back(detail::to_json(s));
        if (format == "json") {
          out << record.dump(2) << "\n";
        } else {
          out << "member" << (verify(*cert) ? " (certificate verified)" : " (certificate FAILED verification)")
              << "\n";
          for (const auto& s : cert->chain)
            out << "  " << s.prime << "^" << s.exponent << " from n=" << s.base << ": need v_" << s.prime
                << " >= " << s.required << ", have " << s.witnessed << "\n";
        }
      } else {
        const auto& bad = std::get<NonMembership>(result).failing;
        record["member"] = false;
        record["witness"] = detail::to_json(bad);
        if (format == "json") {
          out << record.dump(2) << "\n";
        } else {
          out << "non-member: step " << bad.prime << "^" << bad.exponent << " from n=" << bad.base << " needs v_"
              << bad.prime << " >= " << bad.required << ", have " << bad.witnessed << "\n";
        }
      }
    } else if (command == "extensions") {
      const u64 n = need(args.n, "--n");
      u64 prime_bound = 0;
      if (args.prime_bound)
        prime_bound = *args.prime_bound;
      else if (args.bound)
        prime_bound = *args.bound / n;
      else
        throw detail::usage_error("extensions needs --prime-bound or --bound");
      const auto ext = extensions(Instance{args.a, args.b, args.j}, n, prime_bound, effort);
      if (format == "json") {
        stamp();
        record["extensions"] = json::array();
        for (const auto& e : ext.entries) {
          json entry{{"prime", e.prime}, {"valuation", e.valuation}};
          if (e.unbounded())
            entry["k_max"] = "unbounded";
          else
            entry["k_max"] = e.max_power;
          record["extensions"].push_back(entry);
        }
        out << record.dump(2) << "\n";
      } else {
        for (const auto& e : ext.entries)
          out << e.prime << " e=" << e.valuation
              << " k_max=" << (e.unbounded() ? std::string("unbounded") : std::to_string(e.max_power)) << "\n";
      }
    } else if (command == "enumerate" || command == "tree") {
      const u64 bound = need(args.bound, "--bound");
      if (command == "tree" && format != "dot" && format != "json")
        throw detail::usage_error("tree emits --format dot or json");
      options.build_tree = command == "tree" || format == "dot";
      const auto result = enumerate_general(args.a, args.b, args.j, bound, options);
      complete = result.complete;
      stamp();
      if (!result.note.empty()) record["note"] = result.note;
      if (command == "tree" && format == "json") {
        record["members"] = result.members;
        record["edges"] = json::array();
        for (const auto& e : result.tree.edges)
          record["edges"].push_back(
              {{"from", e.from}, {"prime", e.prime}, {"power", e.power}, {"to", e.to}, {"spanning", e.spanning}});
        out << record.dump(2) << "\n";
      } else {
        detail::print_members(out, format, record, result.members, &result.tree);
      }
    } else if (command == "classify") {
      const auto c = classify(Instance{args.a, args.b, args.j}, args.bound.value_or(10000), options);
      complete = c.complete;
      if (format == "json") {
        stamp();
        record["classification"] = detail::to_json(c);
        out << record.dump(2) << "\n";
      } else {
        out << detail::describe(c) << "\n";
      }
    } else if (command == "plus") {
      const u64 bound = need(args.bound, "--bound");
      const auto result = plus_set(args.a, args.b, args.j, bound, options);
      complete = result.complete;
      stamp();
      if (result.classification) record["classification"] = detail::to_json(*result.classification);
      if (!result.note.empty()) record["note"] = result.note;
      if (format == "dot") throw detail::usage_error("--format dot is only available for enumerate and tree");
      detail::print_members(out, format, record, result.members, nullptr);
      if (format == "text" && result.classification) out << detail::describe(*result.classification) << "\n";
    } else if (command == "a0") {
      const u64 bound = need(args.bound, "--bound");
      if (args.a < 2) throw detail::usage_error("a0 needs --a >= 2");
      const auto members = enumerate_a0(u64(args.a), args.j, bound);
      stamp();
      detail::print_members(out, format, record, members, nullptr);
    } else if (command == "oracle") {
      const u64 bound = need(args.bound, "--bound");
      const auto members = brute_enumerate(Instance{args.a, args.b, args.j}, bound);
      stamp();
      detail::print_members(out, format, record, members, nullptr);
    }
  } catch (const detail::usage_error& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const factorization_error& e) {
    err << "error: " << e.what() << "\n";
    return kIncomplete;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::overflow_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  if (!complete) {
    err << "warning: result is incomplete (effort or node budget exceeded)\n";
    return kIncomplete;
  }
  return kOk;
}

}  // namespace divpow::cli
