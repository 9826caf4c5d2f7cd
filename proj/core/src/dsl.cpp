#include "fencenat/dsl.hpp"

#include <cctype>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fencenat/errors.hpp"
#include "fencenat/generators.hpp"

namespace fencenat {

namespace {

using ordered_json = nlohmann::ordered_json;

// --- DSL scanning -----------------------------------------------------------

class Scanner {
 public:
  explicit Scanner(const std::string& text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  std::size_t pos() const { return pos_; }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  // Consumes `lit` (after whitespace) when it is next; never partial.
  bool try_literal(const char* lit) {
    skip_ws();
    std::size_t n = 0;
    while (lit[n] != '\0') ++n;
    if (text_.compare(pos_, n, lit) != 0) return false;
    pos_ += n;
    return true;
  }

  void expect(const char* lit) {
    if (!try_literal(lit)) {
      throw parse_error(std::string("expected \"") + lit + "\"", pos_);
    }
  }

  Nat nat() {
    skip_ws();
    if (pos_ >= text_.size() ||
        !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      throw parse_error("expected a number", pos_);
    }
    Nat value = 0;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      const Nat digit = static_cast<Nat>(text_[pos_] - '0');
      if (value > (~Nat{0} - digit) / 10) {
        throw parse_error("number too large", pos_);
      }
      value = value * 10 + digit;
      ++pos_;
    }
    return value;
  }

  // Comma-separated list (possibly empty), stopping before `closer`.
  std::vector<Nat> nat_list(char closer) {
    std::vector<Nat> out;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == closer) return out;
    out.push_back(nat());
    while (try_literal(",")) out.push_back(nat());
    return out;
  }

  std::string word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalpha(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_')) {
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
};

FenceMap parse_record(Scanner& s) {
  s.expect("=");
  s.expect("[");
  std::vector<Nat> prefix = s.nat_list(']');
  s.expect("]");
  s.expect("tail");
  s.expect("(");
  s.expect("start");
  s.expect("=");
  const Nat start = s.nat();
  s.expect(",");
  s.expect("period");
  s.expect("=");
  const Nat period = s.nat();
  s.expect(",");
  s.expect("drift");
  s.expect("=");
  const Nat drift = s.nat();
  s.expect(",");
  s.expect("base");
  s.expect("=");
  s.expect("[");
  std::vector<Nat> base = s.nat_list(']');
  s.expect("]");
  s.expect(")");
  return FenceMap(std::move(prefix), start, period, drift, std::move(base))
      .normalized();
}

FenceMap parse_family(Scanner& s) {
  s.expect(":");
  s.expect("[");
  SubsetSpec spec;
  spec.members = s.nat_list(';');
  s.expect(";");
  spec.period = s.nat();
  s.expect(";");
  s.skip_ws();
  std::string bits;
  while (true) {
    if (s.try_literal("0")) {
      bits += '0';
    } else if (s.try_literal("1")) {
      bits += '1';
    } else {
      break;
    }
  }
  s.expect("]");
  if (spec.period == 0) {
    throw precondition_error("family period must be positive");
  }
  if (bits.size() != spec.period) {
    throw precondition_error(
        "family pattern must have exactly one bit per residue");
  }
  spec.pattern.reserve(bits.size());
  for (char b : bits) spec.pattern.push_back(b == '1');
  return alpha_family(spec);
}

FenceMap parse_dsl(const std::string& text) {
  Scanner s(text);
  s.skip_ws();
  const std::size_t word_pos = s.pos();
  std::string head = s.word();
  FenceMap m = identity_map();
  if (head == "prefix") {
    m = parse_record(s);
  } else if (head == "xi") {
    m = xi();
  } else if (head == "identity") {
    m = identity_map();
  } else if (head == "witness") {
    m = collapse_witness();
  } else if (head == "alpha" || head == "beta" || head == "lambda" ||
             head == "delta") {
    s.expect(":");
    const Nat k = s.nat();
    if (head == "alpha") {
      m = alpha_gen(k);
    } else if (head == "beta") {
      m = beta_gen(k);
    } else if (head == "lambda") {
      m = lambda_gen(k);
    } else {
      m = delta_gen(k);
    }
  } else if (head == "family") {
    m = parse_family(s);
  } else {
    throw parse_error("expected a map record or a generator spelling",
                      word_pos);
  }
  if (!s.at_end()) {
    throw parse_error("unexpected trailing input", s.pos());
  }
  return m;
}

// --- JSON helpers -----------------------------------------------------------

ordered_json ext_nat_to_json(const ExtNat& v) {
  if (v.is_aleph0()) return "aleph0";
  return v.value();
}

ordered_json map_fields(const FenceMap& m) {
  FenceMap c = m.normalized();
  ordered_json tail;
  tail["start"] = c.tail_start();
  tail["period"] = c.tail_period();
  tail["drift"] = c.tail_drift();
  tail["base"] = c.tail_base();
  ordered_json j;
  j["prefix"] = c.prefix();
  j["tail"] = std::move(tail);
  return j;
}

const ordered_json& require_field(const ordered_json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw parse_error(std::string("missing field \"") + key + "\"", 0);
  }
  return *it;
}

Nat json_nat(const ordered_json& j, const char* key) {
  const ordered_json& v = require_field(j, key);
  if (!v.is_number_unsigned()) {
    throw parse_error(std::string("field \"") + key +
                          "\" must be a non-negative integer",
                      0);
  }
  return v.get<Nat>();
}

std::vector<Nat> json_nat_list(const ordered_json& j, const char* key) {
  const ordered_json& v = require_field(j, key);
  if (!v.is_array()) {
    throw parse_error(std::string("field \"") + key + "\" must be a list", 0);
  }
  std::vector<Nat> out;
  out.reserve(v.size());
  for (const ordered_json& e : v) {
    if (!e.is_number_unsigned()) {
      throw parse_error(std::string("field \"") + key +
                            "\" must contain non-negative integers",
                        0);
    }
    out.push_back(e.get<Nat>());
  }
  return out;
}

void check_schema_version(const ordered_json& j) {
  auto it = j.find("schema_version");
  if (it != j.end() && (!it->is_number_unsigned() ||
                        it->get<int>() != kSchemaVersion)) {
    throw parse_error("unsupported schema_version", 0);
  }
}

FenceMap map_from_fields(const ordered_json& j) {
  if (!j.is_object()) {
    throw parse_error("map must be a JSON object", 0);
  }
  check_schema_version(j);
  const ordered_json& tail = require_field(j, "tail");
  if (!tail.is_object()) {
    throw parse_error("field \"tail\" must be an object", 0);
  }
  return FenceMap(json_nat_list(j, "prefix"), json_nat(tail, "start"),
                  json_nat(tail, "period"), json_nat(tail, "drift"),
                  json_nat_list(tail, "base"))
      .normalized();
}

ordered_json parse_json_text(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what(),
                      e.byte > 0 ? e.byte - 1 : 0);
  }
}

const char* target_kind_name(TargetClass::Kind k) {
  switch (k) {
    case TargetClass::Kind::theta_lambda:
      return "theta_lambda";
    case TargetClass::Kind::delta_word:
      return "delta_word";
    case TargetClass::Kind::h_n:
      return "h_n";
    case TargetClass::Kind::g_n:
      return "g_n";
    case TargetClass::Kind::k_split:
      return "k_split";
  }
  throw internal_error("unhandled target-class kind");
}

TargetClass::Kind target_kind_from_name(const std::string& name) {
  if (name == "theta_lambda") return TargetClass::Kind::theta_lambda;
  if (name == "delta_word") return TargetClass::Kind::delta_word;
  if (name == "h_n") return TargetClass::Kind::h_n;
  if (name == "g_n") return TargetClass::Kind::g_n;
  if (name == "k_split") return TargetClass::Kind::k_split;
  throw parse_error("unknown target_class kind \"" + name + "\"", 0);
}

const char* certified_tag_name(CertifiedClass::Tag t) {
  switch (t) {
    case CertifiedClass::Tag::theta:
      return "theta";
    case CertifiedClass::Tag::lambda_n:
      return "lambda_n";
    case CertifiedClass::Tag::delta_n:
      return "delta_n";
    case CertifiedClass::Tag::g3:
      return "g3";
  }
  throw internal_error("unhandled certified-class tag");
}

CertifiedClass::Tag certified_tag_from_name(const std::string& name) {
  if (name == "theta") return CertifiedClass::Tag::theta;
  if (name == "lambda_n") return CertifiedClass::Tag::lambda_n;
  if (name == "delta_n") return CertifiedClass::Tag::delta_n;
  if (name == "g3") return CertifiedClass::Tag::g3;
  throw parse_error("unknown certified_class tag \"" + name + "\"", 0);
}

std::string json_string(const ordered_json& j, const char* key) {
  const ordered_json& v = require_field(j, key);
  if (!v.is_string()) {
    throw parse_error(std::string("field \"") + key + "\" must be a string",
                      0);
  }
  return v.get<std::string>();
}

}  // namespace

// --- Public API ---------------------------------------------------------------

FenceMap parse_map(const std::string& text) {
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    if (ch == '{') return map_from_json(text);
    break;
  }
  return parse_dsl(text);
}

std::string render_map(const FenceMap& m) {
  FenceMap c = m.normalized();
  std::string out = "prefix=[";
  bool first = true;
  for (Nat v : c.prefix()) {
    if (!first) out += ',';
    first = false;
    out += std::to_string(v);
  }
  out += "] tail(start=" + std::to_string(c.tail_start()) +
         ", period=" + std::to_string(c.tail_period()) +
         ", drift=" + std::to_string(c.tail_drift()) + ", base=[";
  first = true;
  for (Nat v : c.tail_base()) {
    if (!first) out += ',';
    first = false;
    out += std::to_string(v);
  }
  out += "])";
  return out;
}

std::string map_to_json(const FenceMap& m) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  ordered_json fields = map_fields(m);
  j["prefix"] = std::move(fields["prefix"]);
  j["tail"] = std::move(fields["tail"]);
  return j.dump();
}

FenceMap map_from_json(const std::string& json_text) {
  return map_from_fields(parse_json_text(json_text));
}

std::string word_to_json(const GeneratorWord& word) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["target_class"] = {{"kind", target_kind_name(word.target_class.kind)},
                       {"n", word.target_class.n}};
  ordered_json factors = ordered_json::array();
  for (const GeneratorSymbol& s : word.factors) {
    ordered_json f;
    switch (s.kind()) {
      case GeneratorSymbol::Kind::xi:
        f["kind"] = "xi";
        break;
      case GeneratorSymbol::Kind::alpha:
        f["kind"] = "alpha";
        f["k"] = s.param();
        break;
      case GeneratorSymbol::Kind::beta:
        f["kind"] = "beta";
        f["k"] = s.param();
        break;
      case GeneratorSymbol::Kind::lambda:
        f["kind"] = "lambda";
        f["k"] = s.param();
        break;
      case GeneratorSymbol::Kind::delta:
        f["kind"] = "delta";
        f["k"] = s.param();
        break;
      case GeneratorSymbol::Kind::explicit_map:
        f["kind"] = "explicit";
        f["map"] = map_fields(s.map());
        f["certified_class"] = {{"tag", certified_tag_name(s.certified().tag)},
                                {"n", s.certified().n}};
        break;
    }
    factors.push_back(std::move(f));
  }
  j["factors"] = std::move(factors);
  return j.dump();
}

GeneratorWord word_from_json(const std::string& json_text) {
  ordered_json j = parse_json_text(json_text);
  if (!j.is_object()) throw parse_error("word must be a JSON object", 0);
  check_schema_version(j);
  GeneratorWord word;
  const ordered_json& tc = require_field(j, "target_class");
  word.target_class.kind = target_kind_from_name(json_string(tc, "kind"));
  word.target_class.n = json_nat(tc, "n");
  if (word.target_class.n == 0) {
    throw precondition_error("class parameter must be positive");
  }
  const ordered_json& factors = require_field(j, "factors");
  if (!factors.is_array()) {
    throw parse_error("field \"factors\" must be a list", 0);
  }
  if (factors.empty()) {
    throw precondition_error("generator word must contain at least one factor");
  }
  for (const ordered_json& f : factors) {
    const std::string kind = json_string(f, "kind");
    if (kind == "xi") {
      word.factors.push_back(GeneratorSymbol::make_xi());
    } else if (kind == "alpha") {
      word.factors.push_back(GeneratorSymbol::make_alpha(json_nat(f, "k")));
    } else if (kind == "beta") {
      word.factors.push_back(GeneratorSymbol::make_beta(json_nat(f, "k")));
    } else if (kind == "lambda") {
      word.factors.push_back(GeneratorSymbol::make_lambda(json_nat(f, "k")));
    } else if (kind == "delta") {
      word.factors.push_back(GeneratorSymbol::make_delta(json_nat(f, "k")));
    } else if (kind == "explicit") {
      const ordered_json& cc = require_field(f, "certified_class");
      CertifiedClass cls;
      cls.tag = certified_tag_from_name(json_string(cc, "tag"));
      cls.n = json_nat(cc, "n");
      word.factors.push_back(GeneratorSymbol::make_explicit(
          map_from_fields(require_field(f, "map")), cls));
    } else {
      throw parse_error("unknown factor kind \"" + kind + "\"", 0);
    }
  }
  return word;
}

std::string class_report_to_json(const ClassReport& report) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["in_theta"] = report.in_theta;
  j["in_lambda"] = report.in_lambda;
  j["in_gamma"] = report.in_gamma;
  j["in_delta"] = report.in_delta;
  j["in_B"] = report.in_B;
  j["in_P"] = report.in_P;
  j["rank"] = ext_nat_to_json(report.rank);
  j["nb_size"] = ext_nat_to_json(report.nb_size);
  j["c_value"] = ext_nat_to_json(report.c_value);
  switch (report.k_class.kind) {
    case KClass::Kind::not_in_p:
      j["k_class"] = {{"kind", "not_in_p"}};
      break;
    case KClass::Kind::k_finite:
      j["k_class"] = {{"kind", "k_finite"}, {"l", report.k_class.l}};
      break;
    case KClass::Kind::k_aleph0:
      j["k_class"] = {{"kind", "k_aleph0"}};
      break;
  }
  j["n"] = report.n;
  j["in_omega_n"] = report.in_omega_n;
  j["in_lambda_n"] = report.in_lambda_n;
  j["in_theta_n"] = report.in_theta_n;
  j["in_delta_n"] = report.in_delta_n;
  j["in_H_n"] = report.in_H_n;
  j["in_G_n"] = report.in_G_n;
  return j.dump();
}

std::string set_report_to_json(const SetReport& report) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["cardinality"] = ext_nat_to_json(report.cardinality);
  j["elements"] = report.elements;
  if (report.periodic_witness) {
    j["periodic_witness"] = {{"start", report.periodic_witness->first},
                             {"period", report.periodic_witness->second}};
  } else {
    j["periodic_witness"] = nullptr;
  }
  return j.dump();
}

std::string block_stream_to_json(const BlockStream& bs) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  ordered_json head = ordered_json::array();
  for (const Block& b : bs.head()) {
    head.push_back({{"start", b.start}, {"length", b.length},
                    {"value", b.value}});
  }
  j["head"] = std::move(head);
  ordered_json tail;
  switch (bs.tail_kind()) {
    case TailKind::none:
      tail["kind"] = "none";
      break;
    case TailKind::infinite_block:
      tail["kind"] = "infinite_block";
      tail["start"] = bs.tail_start();
      tail["value"] = bs.tail_value();
      break;
    case TailKind::periodic: {
      tail["kind"] = "periodic";
      tail["start"] = bs.tail_start();
      tail["spatial_period"] = bs.spatial_period();
      tail["value_drift"] = bs.value_drift();
      ordered_json shapes = ordered_json::array();
      for (const Shape& s : bs.shapes()) {
        shapes.push_back({{"offset", s.offset}, {"length", s.length},
                          {"base_value", s.base_value}});
      }
      tail["shapes"] = std::move(shapes);
      break;
    }
  }
  j["tail"] = std::move(tail);
  return j.dump();
}

std::string verification_to_json(const VerificationReport& report) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["composed_equals_target"] = report.composed_equals_target;
  if (report.mismatch_witness) {
    j["mismatch_witness"] = {
        {"position", report.mismatch_witness->first},
        {"composed_value", report.mismatch_witness->second.first},
        {"target_value", report.mismatch_witness->second.second}};
  } else {
    j["mismatch_witness"] = nullptr;
  }
  ordered_json certs = ordered_json::array();
  for (const VerificationReport::FactorCert& c : report.factor_certifications) {
    ordered_json e;
    e["ok"] = c.ok;
    if (!c.ok) e["failing_predicate"] = c.failing_predicate;
    certs.push_back(std::move(e));
  }
  j["factor_certifications"] = std::move(certs);
  j["all_ok"] = report.all_ok();
  return j.dump();
}

}  // namespace fencenat
