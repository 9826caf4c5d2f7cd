#include "run_cli.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fencenat/block_stream.hpp"
#include "fencenat/dsl.hpp"
#include "fencenat/errors.hpp"
#include "fencenat/factorization.hpp"
#include "fencenat/fence_map.hpp"
#include "fencenat/generators.hpp"
#include "fencenat/invariants.hpp"
#include "fencenat/oracle.hpp"

namespace fencenat::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kFalse = 1;
constexpr int kUsage = 2;
constexpr int kInternal = 3;

struct Context {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  bool stdin_used = false;

  std::string slurp_stdin() {
    if (stdin_used) {
      throw precondition_error("stdin (\"-\") may be used for only one operand");
    }
    stdin_used = true;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  FenceMap map_operand(const std::string& s) {
    return parse_map(s == "-" ? slurp_stdin() : s);
  }
};

std::string bool_text(bool b) { return b ? "true" : "false"; }

std::string ext_text(const ExtNat& v) {
  return v.is_aleph0() ? "aleph0" : std::to_string(v.value());
}

std::string k_class_text(const KClass& k) {
  switch (k.kind) {
    case KClass::Kind::not_in_p:
      return "not in P";
    case KClass::Kind::k_finite:
      return "K(" + std::to_string(k.l) + ")";
    case KClass::Kind::k_aleph0:
      return "K_aleph0";
  }
  throw internal_error("unhandled K-class kind");
}

ordered_json k_class_json(const KClass& k) {
  switch (k.kind) {
    case KClass::Kind::not_in_p:
      return {{"kind", "not_in_p"}};
    case KClass::Kind::k_finite:
      return {{"kind", "k_finite"}, {"l", k.l}};
    case KClass::Kind::k_aleph0:
      return {{"kind", "k_aleph0"}};
  }
  throw internal_error("unhandled K-class kind");
}

// Structural blocks vs the brute-force scan over [1, horizon].  The last
// brute block is truncated by the window, so only its start/value and a
// length lower bound are comparable.
bool blocks_agree(const FenceMap& m, Nat horizon) {
  oracle::BruteBlocks brute = oracle::brute_blocks(m, horizon);
  BlockStream bs = block_stream(m);
  for (std::size_t i = 0; i < brute.blocks.size(); ++i) {
    BlockStream::Ref ref = bs.block(i);
    const oracle::BruteBlock& b = brute.blocks[i];
    if (ref.start != b.start || ref.value != b.value) return false;
    const bool last = i + 1 == brute.blocks.size();
    if (!last) {
      if (ref.length != ExtNat::finite(b.length)) return false;
    } else if (ref.length.is_finite() && ref.length.value() < b.length) {
      return false;
    }
  }
  return !brute.blocks.empty();
}

int oracle_disagreement(Context& ctx, const std::string& what) {
  ctx.err << "oracle disagreement: " << what << "\n";
  return kInternal;
}

Nat parse_position(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw precondition_error("positions must be positive integers, got \"" +
                             s + "\"");
  }
  try {
    return static_cast<Nat>(std::stoull(s));
  } catch (const std::out_of_range&) {
    throw precondition_error("position out of range: \"" + s + "\"");
  }
}

// --- verb implementations ---------------------------------------------------

int do_check(Context& ctx, const FenceMap& m, bool use_oracle, Nat horizon,
             bool json_out) {
  const bool ok = is_fence_preserving(m);
  Nat h = 0;
  if (use_oracle) {
    h = oracle::effective_horizon(horizon, {&m});
    if (oracle::brute_preserving(m, h) != ok) {
      return oracle_disagreement(
          ctx, "is_fence_preserving contradicts brute_preserving at horizon " +
                   std::to_string(h));
    }
  }
  if (json_out) {
    ordered_json j{{"schema_version", kSchemaVersion},
                   {"fence_preserving", ok}};
    if (use_oracle) {
      j["oracle_checked"] = true;
      j["horizon"] = h;
    }
    ctx.out << j.dump() << "\n";
  } else {
    ctx.out << "fence-preserving: " << (ok ? "yes" : "no") << "\n";
    if (use_oracle) {
      ctx.out << "oracle: agrees (horizon " << h << ")\n";
    }
  }
  return ok ? kOk : kFalse;
}

int do_eval(Context& ctx, const FenceMap& m,
            const std::vector<std::string>& position_args, bool json_out) {
  std::vector<std::pair<Nat, Nat>> results;
  for (const std::string& s : position_args) {
    const Nat x = parse_position(s);
    results.emplace_back(x, m.evaluate(x));
  }
  if (json_out) {
    ordered_json arr = ordered_json::array();
    for (const auto& [x, v] : results) {
      arr.push_back({{"x", x}, {"value", v}});
    }
    ctx.out << ordered_json{{"schema_version", kSchemaVersion},
                            {"results", arr}}
                   .dump()
            << "\n";
  } else {
    for (const auto& [x, v] : results) {
      ctx.out << x << " -> " << v << "\n";
    }
  }
  return kOk;
}

int do_compose(Context& ctx, const std::vector<FenceMap>& maps,
               bool use_oracle, Nat horizon, bool json_out) {
  FenceMap result = maps.front().normalized();
  for (std::size_t i = 1; i < maps.size(); ++i) {
    result = compose(result, maps[i]);
  }
  if (use_oracle) {
    std::vector<const FenceMap*> ops{&result};
    for (const FenceMap& m : maps) ops.push_back(&m);
    const Nat h = oracle::effective_horizon(horizon, ops);
    for (Nat x = 1; x <= h; ++x) {
      Nat v = x;
      for (const FenceMap& m : maps) v = m.evaluate(v);
      if (v != result.evaluate(x)) {
        return oracle_disagreement(
            ctx, "composition mismatch at x=" + std::to_string(x));
      }
    }
  }
  ctx.out << (json_out ? map_to_json(result) : render_map(result)) << "\n";
  return kOk;
}

int do_classify(Context& ctx, const FenceMap& m, Nat n, bool use_oracle,
                Nat horizon, bool json_out) {
  ClassReport rep = classify(m, n);
  if (use_oracle) {
    const Nat h = oracle::effective_horizon(horizon, {&m});
    if (!blocks_agree(m, h)) {
      return oracle_disagreement(ctx, "block decomposition at horizon " +
                                          std::to_string(h));
    }
  }
  if (json_out) {
    ctx.out << class_report_to_json(rep) << "\n";
    return kOk;
  }
  ctx.out << "in_theta: " << bool_text(rep.in_theta) << "\n"
          << "in_lambda: " << bool_text(rep.in_lambda) << "\n"
          << "in_gamma: " << bool_text(rep.in_gamma) << "\n"
          << "in_delta: " << bool_text(rep.in_delta) << "\n"
          << "in_B: " << bool_text(rep.in_B) << "\n"
          << "in_P: " << bool_text(rep.in_P) << "\n"
          << "rank: " << ext_text(rep.rank) << "\n"
          << "nb_size: " << ext_text(rep.nb_size) << "\n"
          << "c_value: " << ext_text(rep.c_value) << "\n"
          << "k_class: " << k_class_text(rep.k_class) << "\n"
          << "n: " << rep.n << "\n"
          << "in_omega_n: " << bool_text(rep.in_omega_n) << "\n"
          << "in_lambda_n: " << bool_text(rep.in_lambda_n) << "\n"
          << "in_theta_n: " << bool_text(rep.in_theta_n) << "\n"
          << "in_delta_n: " << bool_text(rep.in_delta_n) << "\n"
          << "in_H_n: " << bool_text(rep.in_H_n) << "\n"
          << "in_G_n: " << bool_text(rep.in_G_n) << "\n";
  return kOk;
}

int do_blocks(Context& ctx, const FenceMap& m, bool use_oracle, Nat horizon,
              bool json_out) {
  BlockStream bs = block_stream(m);
  if (use_oracle) {
    const Nat h = oracle::effective_horizon(horizon, {&m});
    if (!blocks_agree(m, h)) {
      return oracle_disagreement(ctx, "block decomposition at horizon " +
                                          std::to_string(h));
    }
  }
  if (json_out) {
    ctx.out << block_stream_to_json(bs) << "\n";
    return kOk;
  }
  ctx.out << "head:";
  if (bs.head().empty()) {
    ctx.out << " (none)";
  }
  for (const Block& b : bs.head()) {
    ctx.out << " (start=" << b.start << ", length=" << b.length
            << ", value=" << b.value << ")";
  }
  ctx.out << "\n";
  switch (bs.tail_kind()) {
    case TailKind::none:
      ctx.out << "tail: none\n";
      break;
    case TailKind::infinite_block:
      ctx.out << "tail: infinite_block(start=" << bs.tail_start()
              << ", value=" << bs.tail_value() << ")\n";
      break;
    case TailKind::periodic: {
      ctx.out << "tail: periodic(start=" << bs.tail_start()
              << ", spatial_period=" << bs.spatial_period()
              << ", value_drift=" << bs.value_drift() << ", shapes=[";
      bool first = true;
      for (const Shape& s : bs.shapes()) {
        if (!first) ctx.out << ", ";
        first = false;
        ctx.out << "(offset=" << s.offset << ", length=" << s.length
                << ", base_value=" << s.base_value << ")";
      }
      ctx.out << "])\n";
      break;
    }
  }
  return kOk;
}

// delta_gen(k) in canonical form: a constant head of length exactly k at the
// parity-matched anchor, then the ascending tail.
std::optional<Nat> match_delta_gen(const FenceMap& m) {
  FenceMap c = m.normalized();
  if (c.tail_period() != 1 || c.tail_drift() != 1) return std::nullopt;
  const Nat k = c.tail_start();
  const Nat anchor = (k % 2 == 1) ? 1 : 2;
  if (c.tail_base()[0] != anchor) return std::nullopt;
  for (Nat v : c.prefix()) {
    if (v != anchor) return std::nullopt;
  }
  return k;
}

int emit_verified_word(Context& ctx, const GeneratorWord& word,
                       const FenceMap& target, bool json_out) {
  VerificationReport rep = verify_word(word, target);
  if (!rep.all_ok()) {
    ctx.err << "internal error: constructed word failed verification\n"
            << verification_to_json(rep) << "\n";
    return kInternal;
  }
  ctx.out << (json_out ? word_to_json(word) : render_word(word)) << "\n";
  return kOk;
}

int do_factor(Context& ctx, const FenceMap& m, const std::string& scheme,
              Nat n, bool json_out) {
  if (scheme == "ksplit") {
    auto [g1, g2] = k_split(m);
    const KClass k1 = classify(g1, 1).k_class;
    const KClass k2 = classify(g2, 1).k_class;
    if (json_out) {
      ordered_json j;
      j["schema_version"] = kSchemaVersion;
      j["scheme"] = "ksplit";
      j["gamma1"] = ordered_json::parse(map_to_json(g1));
      j["gamma2"] = ordered_json::parse(map_to_json(g2));
      j["gamma1_k_class"] = k_class_json(k1);
      j["gamma2_k_class"] = k_class_json(k2);
      ctx.out << j.dump() << "\n";
    } else {
      ctx.out << "gamma1: " << render_map(g1) << "\n"
              << "gamma2: " << render_map(g2) << "\n"
              << "gamma1 k_class: " << k_class_text(k1) << "\n"
              << "gamma2 k_class: " << k_class_text(k2) << "\n";
    }
    return kOk;
  }
  if (scheme == "theta-lambda") {
    auto [g1, g2] = theta_lambda_factor(m, n);
    GeneratorWord word;
    word.target_class = TargetClass{TargetClass::Kind::theta_lambda, n};
    word.factors.push_back(GeneratorSymbol::make_explicit(
        g1, CertifiedClass{CertifiedClass::Tag::theta, n}));
    word.factors.push_back(GeneratorSymbol::make_explicit(
        g2, CertifiedClass{CertifiedClass::Tag::lambda_n, n}));
    return emit_verified_word(ctx, word, m, json_out);
  }
  if (scheme == "delta") {
    std::optional<Nat> idx = match_delta_gen(m);
    if (!idx) {
      throw precondition_error(
          "scheme \"delta\" factors the constant-head delta family only");
    }
    return emit_verified_word(ctx, delta_word(*idx, n), m, json_out);
  }
  if (scheme == "h") {
    return emit_verified_word(ctx, h_word(m, n), m, json_out);
  }
  if (scheme == "g") {
    return emit_verified_word(ctx, g_word(m, n), m, json_out);
  }
  throw precondition_error("unknown factorization scheme \"" + scheme + "\"");
}

int do_verify(Context& ctx, const std::string& word_operand,
              const FenceMap& target, bool json_out) {
  std::string text;
  if (word_operand == "-") {
    text = ctx.slurp_stdin();
  } else {
    std::ifstream file(word_operand);
    if (!file) {
      throw precondition_error("cannot read word file \"" + word_operand +
                               "\"");
    }
    std::ostringstream ss;
    ss << file.rdbuf();
    text = ss.str();
  }
  GeneratorWord word = word_from_json(text);
  VerificationReport rep = verify_word(word, target);
  if (json_out) {
    ctx.out << verification_to_json(rep) << "\n";
  } else {
    ctx.out << "composed_equals_target: "
            << (rep.composed_equals_target ? "yes" : "no") << "\n";
    if (rep.mismatch_witness) {
      ctx.out << "mismatch at x=" << rep.mismatch_witness->first
              << ": composed=" << rep.mismatch_witness->second.first
              << ", target=" << rep.mismatch_witness->second.second << "\n";
    }
    for (std::size_t i = 0; i < rep.factor_certifications.size(); ++i) {
      const auto& c = rep.factor_certifications[i];
      ctx.out << "factor " << (i + 1) << ": "
              << (c.ok ? "ok" : "FAIL (" + c.failing_predicate + ")") << "\n";
    }
    ctx.out << (rep.all_ok() ? "all ok" : "verification failed") << "\n";
  }
  return rep.all_ok() ? kOk : kFalse;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in,
            std::ostream& out, std::ostream& err) {
  Context ctx{in, out, err};

  CLI::App app{"exact computation in the semigroup of zig-zag "
               "order-preserving self-maps of the naturals"};
  app.require_subcommand(1);

  std::vector<std::string> operands;
  Nat n = 1;
  std::string scheme;
  std::string emit = "text";
  bool use_oracle = false;
  Nat horizon = 200;
  std::string target_text;

  auto add_common = [&](CLI::App* sub, const char* operand_desc,
                        int min_operands, int max_operands) {
    CLI::Option* op =
        sub->add_option("operands", operands, operand_desc);
    if (min_operands > 0) op->required();
    op->expected(min_operands, max_operands);
    sub->add_option("--emit", emit, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_flag("--oracle", use_oracle,
                  "cross-check against the brute-force oracle");
    sub->add_option("--horizon", horizon,
                    "minimum oracle window (extended to cover every "
                    "operand's structure)")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* check = app.add_subcommand(
      "check", "test whether a map preserves the zig-zag order");
  add_common(check, "map expression (DSL, JSON, generator spelling, or -)", 1,
             1);

  CLI::App* eval = app.add_subcommand("eval", "evaluate a map at positions");
  add_common(eval, "map expression followed by one or more positions", 2, -1);

  CLI::App* compose_cmd = app.add_subcommand(
      "compose", "compose maps left-to-right and print the canonical form");
  add_common(compose_cmd, "two or more map expressions", 2, -1);

  CLI::App* classify_cmd = app.add_subcommand(
      "classify", "class membership report for one map");
  add_common(classify_cmd, "map expression", 1, 1);
  classify_cmd->add_option("--n", n, "chain parameter (default 1)")
      ->check(CLI::PositiveNumber);

  CLI::App* blocks = app.add_subcommand(
      "blocks", "maximal-constancy-block decomposition of a map");
  add_common(blocks, "map expression", 1, 1);

  CLI::App* gen = app.add_subcommand(
      "gen", "print the canonical form of a named generator");
  add_common(gen, "generator spelling (xi, alpha:k, witness, family:[...], ...)",
             1, 1);

  CLI::App* factor = app.add_subcommand(
      "factor", "factor a map over one of the generating families");
  add_common(factor, "map expression", 1, 1);
  factor->add_option("--scheme", scheme, "factorization scheme")
      ->required()
      ->check(CLI::IsMember({"theta-lambda", "h", "g", "delta", "ksplit"}));
  CLI::Option* factor_n =
      factor->add_option("--n", n, "chain parameter")->check(
          CLI::PositiveNumber);

  CLI::App* verify = app.add_subcommand(
      "verify", "verify a generator word (JSON file or -) against a target");
  verify->add_option("operands", operands, "word file path (default: -)")
      ->expected(0, 1);
  verify->add_option("--target", target_text, "target map expression")
      ->required();
  verify->add_option("--emit", emit, "output format")
      ->check(CLI::IsMember({"text", "json"}));
  verify->add_flag("--oracle", use_oracle,
                   "cross-check against the brute-force oracle");
  verify->add_option("--horizon", horizon, "minimum oracle window")
      ->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  const bool json_out = emit == "json";
  try {
    if (app.got_subcommand(check)) {
      return do_check(ctx, ctx.map_operand(operands[0]), use_oracle, horizon,
                      json_out);
    }
    if (app.got_subcommand(eval)) {
      FenceMap m = ctx.map_operand(operands[0]);
      return do_eval(ctx, m,
                     {operands.begin() + 1, operands.end()}, json_out);
    }
    if (app.got_subcommand(compose_cmd)) {
      std::vector<FenceMap> maps;
      maps.reserve(operands.size());
      for (const std::string& s : operands) maps.push_back(ctx.map_operand(s));
      return do_compose(ctx, maps, use_oracle, horizon, json_out);
    }
    if (app.got_subcommand(classify_cmd)) {
      return do_classify(ctx, ctx.map_operand(operands[0]), n, use_oracle,
                         horizon, json_out);
    }
    if (app.got_subcommand(blocks)) {
      return do_blocks(ctx, ctx.map_operand(operands[0]), use_oracle, horizon,
                       json_out);
    }
    if (app.got_subcommand(gen)) {
      FenceMap m = ctx.map_operand(operands[0]);
      ctx.out << (json_out ? map_to_json(m) : render_map(m)) << "\n";
      return kOk;
    }
    if (app.got_subcommand(factor)) {
      if (scheme != "ksplit" && factor_n->count() == 0) {
        err << "usage error: --n is required for scheme \"" << scheme
            << "\"\n";
        return kUsage;
      }
      return do_factor(ctx, ctx.map_operand(operands[0]), scheme, n, json_out);
    }
    if (app.got_subcommand(verify)) {
      FenceMap target = ctx.map_operand(target_text);
      const std::string word_operand = operands.empty() ? "-" : operands[0];
      return do_verify(ctx, word_operand, target, json_out);
    }
    err << "usage error: no subcommand\n";
    return kUsage;
  } catch (const parse_error& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const precondition_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const internal_error& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace fencenat::cli
