#pragma once

// Command-line front end. JSON (or text) goes to `out`, diagnostics to `err`.
// Exit status: 0 success, 1 usage error, 2 hypothesis/validation failure,
// 3 internal inconsistency (oracle disagreement, failed audit), 4 budget
// exceeded.

#include <cstddef>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nilmult/abelian.hpp"
#include "nilmult/errors.hpp"
#include "nilmult/fng.hpp"
#include "nilmult/hall.hpp"
#include "nilmult/multipliers.hpp"
#include "nilmult/oracle.hpp"
#include "nilmult/serialize.hpp"
#include "nilmult/witt.hpp"

namespace nilmult::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kValidation = 2,
  kInconsistent = 3,
  kBudget = 4,
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(' ');
    auto e = item.find_last_not_of(' ');
    if (b == std::string::npos) throw DomainError("empty entry in list '" + text + "'");
    items.push_back(item.substr(b, e - b + 1));
  }
  return items;
}

inline std::vector<BigInt> parse_orders(const std::string& text) {
  std::vector<BigInt> out;
  if (text.empty()) return out;
  for (const auto& s : split_list(text)) out.push_back(parse_bigint(s));
  return out;
}

inline std::vector<unsigned> parse_classes(const std::string& text) {
  std::vector<unsigned> out;
  for (const auto& s : split_list(text)) {
    BigInt v = parse_bigint(s);
    if (v < 0 || v > 1000) throw DomainError("class " + s + " out of range");
    out.push_back(static_cast<unsigned>(v.get_ui()));
  }
  return out;
}

struct Options {
  std::string format = "json";
  std::size_t basis_cap = kDefaultBasisCap;
  std::size_t word_cap = kDefaultWordCap;
  bool json() const { return format == "json"; }
};

inline void emit(std::ostream& out, const Json& j) { out << j.dump() << '\n'; }

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nilpotent and polynilpotent multipliers of nilpotent products of cyclic groups"};
  app.require_subcommand(1);
  app.fallthrough();
  detail::Options opt;
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--basis-cap", opt.basis_cap, "Maximum number of Hall basis elements")->envname("NILMULT_BASIS_CAP");
  app.add_option("--word-cap", opt.word_cap, "Maximum collection stack length")->envname("NILMULT_WORD_CAP");

  // chi
  auto* chi = app.add_subcommand("chi", "Witt formula: number of basic commutators of weight n on d letters");
  unsigned chi_weight = 0;
  std::string chi_letters;
  chi->add_option("--weight", chi_weight, "Weight n >= 1")->required()->check(CLI::PositiveNumber);
  chi->add_option("--letters", chi_letters, "Number of letters d >= 0")->required();

  // basis
  auto* basis_cmd = app.add_subcommand("basis", "Hall basis: basic commutators in weight-then-lexicographic order");
  unsigned basis_letters = 0, basis_weight = 0;
  basis_cmd->add_option("--letters", basis_letters, "Number of letters")->required()->check(CLI::PositiveNumber);
  basis_cmd->add_option("--max-weight", basis_weight, "Largest weight")->required()->check(CLI::PositiveNumber);

  // collect
  auto* collect = app.add_subcommand(
      "collect", "Collection process in the free nilpotent group: normal forms of products, powers, commutators");
  unsigned col_letters = 0, col_class = 0;
  std::string col_op = "multiply", col_left = "1", col_right = "1", col_exponent = "1";
  collect->add_option("--letters", col_letters, "Number of letters")->required()->check(CLI::PositiveNumber);
  collect->add_option("--class", col_class, "Nilpotency class K")->required()->check(CLI::PositiveNumber);
  collect->add_option("--op", col_op, "Operation")
      ->check(CLI::IsMember({"multiply", "commutator", "power", "inverse", "normalize"}));
  collect->add_option("--left", col_left, "Left word, e.g. \"x1^2 x2 [x2,x1]^-1\"");
  collect->add_option("--right", col_right, "Right word");
  collect->add_option("--exponent", col_exponent, "Exponent for --op power");

  // shared group flags
  unsigned free_rank = 0, product_class = 1, nil_class = 1;
  std::string orders_text, row_text, two_row_text, oracle_mode = "both";
  auto add_group_flags = [&](CLI::App* sub) {
    sub->add_option("--free-rank", free_rank, "Number m of infinite cyclic factors");
    sub->add_option("--orders", orders_text, "Torsion orders, comma separated, e.g. 9,3");
    sub->add_option("--product-class", product_class, "Class n of the nilpotent product")
        ->required()
        ->check(CLI::PositiveNumber);
  };

  auto* nilmult = app.add_subcommand(
      "nilmult",
      "c-nilpotent multiplier of the nth nilpotent product of cyclic groups "
      "(closed form Z^(d_m) + sum Z_(r_j)^(d_(m+j) - d_(m+j-1)), d_k = sum_i chi_(c+i)(k))");
  add_group_flags(nilmult);
  nilmult->add_option("--class", nil_class, "Class c >= n")->required()->check(CLI::PositiveNumber);

  auto* polymult = app.add_subcommand(
      "polymult",
      "Polynilpotent multiplier with class row (c_1, ..., c_s) of the nth nilpotent product of cyclic groups "
      "(iterated Witt counts)");
  add_group_flags(polymult);
  polymult->add_option("--class-row", row_text, "Class row c1,c2,...")->required();

  auto* three = app.add_subcommand(
      "threefactor",
      "Multiplier of Z_s1 *n Z_s2 *n Z_s3 with arbitrary orders (gcd formula); --two-row evaluates the "
      "printed two-class expression in e_1..e_6 and always prints its audit");
  std::string three_orders;
  unsigned three_n = 1, three_c = 0;
  three->add_option("--orders", three_orders, "s1,s2,s3")->required();
  three->add_option("--product-class", three_n, "Class n of the nilpotent product")
      ->required()
      ->check(CLI::PositiveNumber);
  auto* three_class = three->add_option("--class", three_c, "Class c >= n")->check(CLI::PositiveNumber);
  auto* two_row = three->add_option("--two-row", two_row_text, "Class row c1,c2");
  three_class->excludes(two_row);

  auto* verify = app.add_subcommand(
      "verify",
      "Checks the c-nilpotent multiplier closed form against the quotient gamma_(c+1)(F) / "
      "rho_(c+1)(S) gamma_(c+n+1)(F) computed by Smith normal form");
  add_group_flags(verify);
  unsigned verify_threads = 0;
  bool omit_timing = false;
  verify->add_option("--class", nil_class, "Class c >= n")->required()->check(CLI::PositiveNumber);
  verify->add_option("--oracle", oracle_mode, "Relation lattice construction")
      ->check(CLI::IsMember({"basis", "collected", "both"}));
  verify->add_option("--threads", verify_threads, "Worker threads for collected mode (0: all cores)");
  verify->add_flag("--omit-timing", omit_timing, "Report runtime_ms as 0 for byte-stable output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*chi) {
      BigInt d = parse_bigint(chi_letters);
      BigInt v = witt_chi(chi_weight, d);
      if (opt.json())
        detail::emit(out, Json{{"weight", chi_weight}, {"letters", to_decimal(d)}, {"chi", to_decimal(v)}});
      else
        out << to_decimal(v) << '\n';
    } else if (*basis_cmd) {
      HallBasis b = generate_basis(basis_letters, basis_weight, opt.basis_cap);
      if (opt.json()) {
        Json elems = Json::array();
        for (std::size_t i = 0; i < b.size(); ++i)
          elems.push_back({{"index", i + 1},
                           {"weight", b.weight(i)},
                           {"commutator", b[i].to_string()},
                           {"brackets", to_json(b[i])}});
        detail::emit(out, Json{{"letters", basis_letters}, {"max_weight", basis_weight}, {"elements", elems}});
      } else {
        for (std::size_t i = 0; i < b.size(); ++i) out << i + 1 << '\t' << b.weight(i) << '\t' << b[i].to_string() << '\n';
      }
    } else if (*collect) {
      NilpotentContext ctx(col_letters, col_class, opt.basis_cap, opt.word_cap);
      NormalWord u = parse_word(col_left, ctx);
      NormalWord result;
      if (col_op == "multiply")
        result = multiply(u, parse_word(col_right, ctx), ctx);
      else if (col_op == "commutator")
        result = commutator(u, parse_word(col_right, ctx), ctx);
      else if (col_op == "power")
        result = power(u, parse_bigint(col_exponent), ctx);
      else if (col_op == "inverse")
        result = inverse(u, ctx);
      else
        result = u;
      if (opt.json())
        detail::emit(out, to_json(result, ctx));
      else
        out << render(result, ctx) << '\n';
    } else if (*nilmult || *polymult) {
      GroupSpec spec{free_rank, detail::parse_orders(orders_text), product_class};
      AbelianInvariants g = *nilmult ? nilpotent_multiplier(spec, nil_class)
                                     : polynilpotent_multiplier(spec, ClassRow{detail::parse_classes(row_text)});
      if (opt.json())
        detail::emit(out, to_json(g));
      else
        out << g.to_string() << '\n';
    } else if (*three) {
      auto s = detail::parse_orders(three_orders);
      if (s.size() != 3) throw DomainError("--orders needs exactly three entries");
      ThreeFactorSpec spec{{s[0], s[1], s[2]}, three_n};
      if (!two_row_text.empty()) {
        auto row = detail::parse_classes(two_row_text);
        if (row.size() != 2) throw DomainError("--two-row needs exactly two classes");
        TwoRowResult r = three_factor_two_row(spec, row[0], row[1]);
        if (opt.json()) {
          detail::emit(out, to_json(r));
        } else {
          out << (r.group ? r.group->to_string() : std::string("(withheld)")) << '\n';
          for (std::size_t i = 0; i < 6; ++i) out << "e_" << i + 1 << " = " << to_decimal(r.audit.e[i]) << '\n';
          out << "printed total = " << to_decimal(r.audit.printed_total)
              << ", iterated-chi total = " << to_decimal(r.audit.iterated_total) << '\n';
        }
        for (const auto& f : r.audit.findings) err << "audit: " << f << '\n';
        return r.audit.passed() ? kSuccess : kInconsistent;
      }
      if (three_c == 0) throw DomainError("threefactor needs --class or --two-row");
      AbelianInvariants g = three_factor_multiplier(spec, three_c);
      if (opt.json())
        detail::emit(out, to_json(g));
      else
        out << g.to_string() << '\n';
    } else if (*verify) {
      GroupSpec spec{free_rank, detail::parse_orders(orders_text), product_class};
      OracleOptions oo{opt.basis_cap, opt.word_cap, verify_threads};
      VerificationReport report;
      bool is_chain = validate_spec(spec, ClassRow{{nil_class}}).ok();
      if (!is_chain && spec.free_rank == 0 && spec.orders.size() == 3 &&
          validate_spec(spec, ClassRow{{nil_class}}, OrderMode::arbitrary).ok()) {
        if (oracle_mode == "basis") throw DomainError("basis mode needs a divisibility chain of orders");
        report = verify_three_factor(ThreeFactorSpec{{spec.orders[0], spec.orders[1], spec.orders[2]}, product_class},
                                     nil_class, oo);
      } else {
        OracleMode mode = oracle_mode == "basis"       ? OracleMode::basis
                          : oracle_mode == "collected" ? OracleMode::collected
                                                       : OracleMode::both;
        report = verify_formula(spec, nil_class, mode, oo);
      }
      if (opt.json()) {
        detail::emit(out, to_json(report, !omit_timing));
      } else {
        out << "formula:          " << report.formula.to_string() << '\n';
        if (report.oracle_basis) out << "oracle (basis):     " << report.oracle_basis->to_string() << '\n';
        if (report.oracle_collected) out << "oracle (collected): " << report.oracle_collected->to_string() << '\n';
        out << (report.equal ? "equal" : "NOT EQUAL") << '\n';
      }
      if (!report.equal) {
        err << "verify: oracle disagrees with the closed form\n";
        return kInconsistent;
      }
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const InconsistencyError& e) {
    err << "inconsistency: " << e.what() << '\n';
    return kInconsistent;
  }
  return kSuccess;
}

}  // namespace nilmult::cli
