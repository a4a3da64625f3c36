// Copyright (c) 2026 The ICM Pipeline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "icm/common.hpp"
#include "icm/hash.hpp"
#include "icm/rng.hpp"
#include "icm/toml.hpp"

namespace icm::rules {

using nlohmann::json;

// A moderation term (e.g. "sexy") is decomposed into orthogonal attributes,
// each with a small ordered value set. One full assignment of values, an
// attribute product, is the unit that rule sets label and that explicit
// descriptions attach to. All types here are immutable after loading;
// every operation is a pure function.

struct ModerationTerm {
  std::string id;
  std::string name;
  std::string description;
};

struct AttributeValue {
  std::string id;
  std::string name;
  std::string description;
};

struct Attribute {
  std::string id;
  std::string name;
  std::vector<AttributeValue> values;
};

struct Label {
  bool violation = false;

  bool operator==(const Label&) const = default;
};

struct RuleSet {
  std::string id;
  std::string term_id;
  std::string description;
  std::map<std::string, Label> label_map;  // canonical_key -> label
};

struct ExplicitDescription {
  std::string product_key;
  std::string text;
  std::string author;
};

struct RuleSpec {
  int64_t schema_version = 0;
  ModerationTerm term;
  std::vector<Attribute> attributes;  // declaration order is significant
  std::vector<RuleSet> rulesets;
  std::vector<ExplicitDescription> descriptions;
  std::string source_digest;  // sha256 of the spec file bytes
};

struct AttributeProduct {
  std::string term_id;
  // (attribute_id, value_id) pairs in attribute declaration order.
  std::vector<std::pair<std::string, std::string>> coordinates;
  std::string canonical_key;
};

inline constexpr int64_t kSchemaVersion = 1;

/// Canonical key: `attr=value` pairs joined by ';' in attribute declaration
/// order. Injective because ids exclude '=' and ';'.
inline std::string make_canonical_key(
    const std::vector<std::pair<std::string, std::string>>& coordinates) {
  std::string key;
  for (size_t i = 0; i < coordinates.size(); ++i) {
    if (i) key += ';';
    key += coordinates[i].first;
    key += '=';
    key += coordinates[i].second;
  }
  return key;
}

inline std::map<std::string, std::string> parse_canonical_key(const std::string& key) {
  std::map<std::string, std::string> coords;
  for (const std::string& pair : split(key, ';')) {
    auto eq = pair.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= pair.size())
      fail(ErrorKind::Parse, "malformed canonical key segment '" + pair + "'");
    std::string attr = pair.substr(0, eq);
    if (coords.count(attr))
      fail(ErrorKind::Parse, "canonical key repeats attribute '" + attr + "'");
    coords[attr] = pair.substr(eq + 1);
  }
  return coords;
}

// ── spec file loading ─────────────────────────────────────────────────────

inline RuleSpec parse_rule_spec(const json& doc, const std::string& source_name) {
  RuleSpec spec;
  spec.schema_version = toml::require_int(doc, "schema_version", source_name);
  if (spec.schema_version != kSchemaVersion)
    fail(ErrorKind::Parse, source_name + ": unsupported schema_version " +
                               std::to_string(spec.schema_version) + " (expected " +
                               std::to_string(kSchemaVersion) + ")");

  const json& term = toml::require(doc, "term", source_name);
  spec.term.id = toml::require_string(term, "id", source_name + ": [term]");
  spec.term.name = toml::require_string(term, "name", source_name + ": [term]");
  spec.term.description = toml::get_string(term, "description", "");

  const json& attrs = toml::require(doc, "attribute", source_name);
  if (!attrs.is_array()) fail(ErrorKind::Parse, source_name + ": [[attribute]] must be an array");
  for (const json& a : attrs) {
    Attribute attr;
    attr.id = toml::require_string(a, "id", source_name + ": [[attribute]]");
    attr.name = toml::get_string(a, "name", attr.id);
    if (a.contains("value")) {
      for (const json& v : a.at("value")) {
        AttributeValue value;
        value.id = toml::require_string(v, "id", source_name + ": [[attribute.value]]");
        value.name = toml::get_string(v, "name", value.id);
        value.description = toml::get_string(v, "description", "");
        attr.values.push_back(std::move(value));
      }
    }
    spec.attributes.push_back(std::move(attr));
  }

  if (doc.contains("ruleset")) {
    for (const json& r : doc.at("ruleset")) {
      RuleSet rs;
      rs.id = toml::require_string(r, "id", source_name + ": [[ruleset]]");
      rs.term_id = spec.term.id;
      rs.description = toml::get_string(r, "description", "");
      const json& labels = toml::require(r, "labels", source_name + ": [[ruleset]] '" + rs.id + "'");
      if (!labels.is_object())
        fail(ErrorKind::Parse, source_name + ": ruleset '" + rs.id + "' labels must be a table");
      for (auto it = labels.begin(); it != labels.end(); ++it) {
        if (!it.value().is_boolean())
          fail(ErrorKind::Parse, source_name + ": label for '" + it.key() + "' must be a boolean");
        rs.label_map[it.key()] = Label{it.value().get<bool>()};
      }
      spec.rulesets.push_back(std::move(rs));
    }
  }

  if (doc.contains("description")) {
    for (const json& d : doc.at("description")) {
      ExplicitDescription desc;
      desc.product_key = toml::require_string(d, "product", source_name + ": [[description]]");
      desc.text = toml::require_string(d, "text", source_name + ": [[description]]");
      desc.author = toml::get_string(d, "author", "");
      spec.descriptions.push_back(std::move(desc));
    }
  }
  return spec;
}

inline RuleSpec load_rule_spec(const std::filesystem::path& path) {
  std::string text = jsonl::read_text_file(path);
  RuleSpec spec = parse_rule_spec(toml::parse(text, path.string()), path.string());
  spec.source_digest = sha256_hex(text);
  return spec;
}

// ── operations ────────────────────────────────────────────────────────────

/// Cartesian product of attribute values; the first declared attribute is
/// the most significant position, values in declaration order.
inline std::vector<AttributeProduct> enumerate_products(const RuleSpec& spec) {
  if (spec.attributes.empty())
    fail(ErrorKind::Validation, "no attributes declared for term '" + spec.term.id + "'");
  for (const Attribute& a : spec.attributes)
    if (a.values.empty())
      fail(ErrorKind::Validation, "attribute '" + a.id + "' has no values");

  std::vector<AttributeProduct> products;
  std::vector<size_t> odometer(spec.attributes.size(), 0);
  while (true) {
    AttributeProduct p;
    p.term_id = spec.term.id;
    for (size_t i = 0; i < spec.attributes.size(); ++i)
      p.coordinates.emplace_back(spec.attributes[i].id,
                                 spec.attributes[i].values[odometer[i]].id);
    p.canonical_key = make_canonical_key(p.coordinates);
    products.push_back(std::move(p));

    size_t i = spec.attributes.size();
    while (i > 0) {
      --i;
      if (++odometer[i] < spec.attributes[i].values.size()) break;
      odometer[i] = 0;
      if (i == 0) return products;
    }
  }
}

struct ValidationIssue {
  std::string code;    // stable machine-checkable tag
  std::string detail;  // human text naming the offending element
};

/// Structural audit of a parsed spec. A spec is accepted iff the returned
/// report is empty. Orthogonality is enforced only structurally: distinct
/// ids and distinct value names within an attribute.
inline std::vector<ValidationIssue> validate_spec(const RuleSpec& spec) {
  std::vector<ValidationIssue> issues;
  auto add = [&](const std::string& code, const std::string& detail) {
    issues.push_back({code, detail});
  };

  if (!is_valid_id(spec.term.id)) add("bad-term-id", "term id '" + spec.term.id + "'");

  std::map<std::string, int> attr_ids;
  for (const Attribute& a : spec.attributes) {
    if (!is_valid_id(a.id)) add("bad-attribute-id", "attribute id '" + a.id + "'");
    if (++attr_ids[a.id] == 2) add("duplicate-attribute-id", "attribute id '" + a.id + "'");
    if (a.values.empty()) add("empty-value-list", "attribute '" + a.id + "' declares no values");
    std::map<std::string, int> value_ids;
    std::map<std::string, int> value_names;
    for (const AttributeValue& v : a.values) {
      if (!is_valid_id(v.id))
        add("bad-value-id", "value id '" + v.id + "' in attribute '" + a.id + "'");
      if (++value_ids[v.id] == 2)
        add("duplicate-value-id", "value id '" + v.id + "' in attribute '" + a.id + "'");
      if (++value_names[v.name] == 2)
        add("duplicate-value-name", "value name '" + v.name + "' in attribute '" + a.id + "'");
    }
  }

  std::vector<AttributeProduct> products;
  bool enumerable = !spec.attributes.empty();
  for (const Attribute& a : spec.attributes)
    if (a.values.empty()) enumerable = false;
  if (enumerable) products = enumerate_products(spec);

  std::map<std::string, bool> product_keys;
  for (const AttributeProduct& p : products) product_keys[p.canonical_key] = true;

  std::map<std::string, int> ruleset_ids;
  for (const RuleSet& rs : spec.rulesets) {
    if (++ruleset_ids[rs.id] == 2) add("duplicate-ruleset-id", "ruleset id '" + rs.id + "'");
    for (const AttributeProduct& p : products)
      if (!rs.label_map.count(p.canonical_key))
        add("uncovered-product",
            "ruleset '" + rs.id + "' has no label for product '" + p.canonical_key + "'");
    for (const auto& [key, label] : rs.label_map)
      if (!product_keys.count(key))
        add("extraneous-label", "ruleset '" + rs.id + "' labels unknown product '" + key + "'");
  }

  for (const ExplicitDescription& d : spec.descriptions) {
    if (!product_keys.count(d.product_key))
      add("unknown-description-product",
          "description references unknown product '" + d.product_key + "'");
    if (trim(d.text).empty())
      add("empty-description", "description for '" + d.product_key + "' has empty text");
  }
  return issues;
}

inline Label classify_key(const RuleSet& ruleset, const std::string& canonical_key) {
  auto it = ruleset.label_map.find(canonical_key);
  if (it == ruleset.label_map.end())
    fail(ErrorKind::NotFound,
         "uncovered product '" + canonical_key + "' in ruleset '" + ruleset.id + "'");
  return it->second;
}

inline Label classify_product(const RuleSet& ruleset, const AttributeProduct& product) {
  if (ruleset.term_id != product.term_id)
    fail(ErrorKind::Validation, "product of term '" + product.term_id +
                                    "' classified under ruleset for term '" + ruleset.term_id + "'");
  return classify_key(ruleset, product.canonical_key);
}

inline const RuleSet& find_ruleset(const RuleSpec& spec, const std::string& id) {
  for (const RuleSet& rs : spec.rulesets)
    if (rs.id == id) return rs;
  fail(ErrorKind::NotFound, "unknown ruleset '" + id + "'");
}

struct DiffRow {
  std::string canonical_key;
  Label label_a;
  Label label_b;
};

/// Products where the two rule sets disagree, in enumeration order.
inline std::vector<DiffRow> diff_rulesets(const RuleSpec& spec, const RuleSet& a,
                                          const RuleSet& b) {
  if (a.term_id != b.term_id)
    fail(ErrorKind::Validation,
         "rule sets over different terms: '" + a.term_id + "' vs '" + b.term_id + "'");
  std::vector<DiffRow> rows;
  for (const AttributeProduct& p : enumerate_products(spec)) {
    Label la = classify_key(a, p.canonical_key);
    Label lb = classify_key(b, p.canonical_key);
    if (la != lb) rows.push_back({p.canonical_key, la, lb});
  }
  return rows;
}

inline std::vector<const ExplicitDescription*> descriptions_for(
    const RuleSpec& spec, const std::string& product_key) {
  std::vector<const ExplicitDescription*> pool;
  for (const ExplicitDescription& d : spec.descriptions)
    if (d.product_key == product_key) pool.push_back(&d);
  return pool;
}

/// Uniform draw from the product's description pool, deterministic under the
/// seed. Callers mix the per-image salt into the seed (rng::mix) so distinct
/// images draw independently.
inline const ExplicitDescription& sample_description(const RuleSpec& spec,
                                                     const std::string& product_key,
                                                     uint64_t seed) {
  auto pool = descriptions_for(spec, product_key);
  if (pool.empty())
    fail(ErrorKind::NotFound, "no explicit description for product '" + product_key + "'");
  rng::SplitMix64 g(seed);
  return *pool[rng::uniform_index(g, pool.size())];
}

}  // namespace icm::rules
