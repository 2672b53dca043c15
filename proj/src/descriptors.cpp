#include "rackkex/descriptors.hpp"

#include <set>

#include "rackkex/crypto.hpp"

namespace rackkex::descriptors {

namespace {

void require_fields(const json& d, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : d.items()) {
    (void)value;
    if (!allowed.contains(key)) {
      throw Error("unexpected descriptor field '" + key + "'");
    }
  }
  for (const auto& key : allowed) {
    if (!d.contains(key)) throw Error("descriptor is missing field '" + key + "'");
  }
}

std::uint32_t get_count(const json& d, const char* field) {
  const auto& v = d.at(field);
  if (!v.is_number_unsigned()) throw Error(std::string(field) + " must be a non-negative integer");
  const auto n = v.get<std::uint64_t>();
  if (n == 0) throw Error(std::string(field) + " must be positive");
  if (n > 0xffffffffull) throw Error(std::string(field) + " is out of range");
  return static_cast<std::uint32_t>(n);
}

rackcore::TableCandidate table_candidate(const json& d) {
  rackcore::TableCandidate t;
  t.n = get_count(d, "n");
  const auto& rows = d.at("table");
  if (!rows.is_array() || rows.size() != t.n) {
    throw Error("table must be an n x n array");
  }
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != t.n) throw Error("table must be an n x n array");
    std::vector<std::uint32_t> out;
    out.reserve(t.n);
    for (const auto& cell : row) {
      if (!cell.is_number_unsigned()) throw Error("table entries must be non-negative integers");
      const auto v = cell.get<std::uint64_t>();
      if (v >= t.n) throw Error("table entry out of range");
      out.push_back(static_cast<std::uint32_t>(v));
    }
    t.table.push_back(std::move(out));
  }
  return t;
}

ext::CocycleFamily cocycle_from_json(const json& alpha, std::uint32_t k) {
  if (!alpha.is_array()) throw Error("alpha must be a nested array");
  ext::CocycleFamily f;
  f.m = static_cast<std::uint32_t>(alpha.size());
  f.k = k;
  for (const auto& row : alpha) {
    if (!row.is_array() || row.size() != f.m) throw Error("alpha must be an m x m family");
    std::vector<std::vector<std::vector<std::uint32_t>>> tables;
    for (const auto& table : row) {
      if (!table.is_array() || table.size() != k) throw Error("alpha tables must be k x k");
      std::vector<std::vector<std::uint32_t>> lines;
      for (const auto& line : table) {
        if (!line.is_array() || line.size() != k) throw Error("alpha tables must be k x k");
        std::vector<std::uint32_t> out;
        for (const auto& cell : line) {
          if (!cell.is_number_unsigned()) {
            throw Error("alpha entries must be non-negative integers");
          }
          const auto v = cell.get<std::uint64_t>();
          if (v >= k) throw Error("alpha entry out of fiber range");
          out.push_back(static_cast<std::uint32_t>(v));
        }
        lines.push_back(std::move(out));
      }
      tables.push_back(std::move(lines));
    }
    f.alpha.push_back(std::move(tables));
  }
  return f;
}

json cocycle_to_json(const ext::CocycleFamily& f) {
  json alpha = json::array();
  for (std::uint32_t y1 = 0; y1 < f.m; ++y1) {
    json row = json::array();
    for (std::uint32_t y2 = 0; y2 < f.m; ++y2) {
      row.push_back(f.alpha[y1][y2]);
    }
    alpha.push_back(std::move(row));
  }
  return alpha;
}

}  // namespace

ojson canonical_descriptor(const json& d) {
  if (!d.is_object()) throw Error("rack descriptor must be an object");
  if (!d.contains("type") || !d.at("type").is_string()) {
    throw Error("rack descriptor needs a string 'type' field");
  }
  const auto type = d.at("type").get<std::string>();
  ojson out;
  out["type"] = type;
  if (type == "table") {
    require_fields(d, {"type", "n", "table"});
    const auto t = table_candidate(d);
    out["n"] = t.n;
    out["table"] = t.table;
  } else if (type == "conj_perm") {
    require_fields(d, {"type", "degree", "seed"});
    const auto degree = get_count(d, "degree");
    const auto& seed = d.at("seed");
    if (!seed.is_array() || seed.empty()) throw Error("seed must be a nonempty array");
    std::vector<std::string> texts;
    for (const auto& s : seed) {
      if (!s.is_string()) throw Error("seed entries must be cycle strings");
      // Parse and re-emit so the stored text is in canonical cycle form.
      texts.push_back(
          permgroups::cycle_text(permgroups::parse_cycles(s.get<std::string>(), degree)));
    }
    out["degree"] = degree;
    out["seed"] = texts;
  } else if (type == "group_rack_thompson") {
    require_fields(d, {"type", "max_gen", "sample_len"});
    out["max_gen"] = get_count(d, "max_gen");
    out["sample_len"] = get_count(d, "sample_len");
  } else if (type == "extension") {
    require_fields(d, {"type", "base", "fiber", "alpha"});
    const auto fiber = get_count(d, "fiber");
    const auto base = canonical_descriptor(d.at("base"));
    const auto f = cocycle_from_json(d.at("alpha"), fiber);
    out["base"] = base;
    out["fiber"] = fiber;
    out["alpha"] = cocycle_to_json(f);
  } else {
    throw Error("unknown rack descriptor type '" + type + "'");
  }
  return out;
}

std::string descriptor_dump(const json& d) { return canonical_descriptor(d).dump(); }

Bytes descriptor_bytes(const json& d) { return str_bytes(descriptor_dump(d)); }

Bytes descriptor_hash(const json& d) { return crypto::sha256(descriptor_bytes(d)); }

std::shared_ptr<const rackcore::Rack> rack_from_descriptor(const json& d) {
  const auto canon = canonical_descriptor(d);
  const auto type = canon.at("type").get<std::string>();
  if (type == "table") {
    return std::make_shared<rackcore::TableRack>(table_candidate(canon));
  }
  if (type == "conj_perm") {
    const auto degree = canon.at("degree").get<std::uint32_t>();
    auto model = std::make_shared<rackcore::PermGroupModel>(degree);
    std::vector<rackcore::RackElement> seed;
    for (const auto& s : canon.at("seed")) {
      seed.push_back(
          rackcore::RackElement::perm(permgroups::parse_cycles(s.get<std::string>(), degree)));
    }
    auto elements = rackcore::conj_closure(*model, seed);
    return std::make_shared<rackcore::FiniteConjRack>(std::move(model), std::move(elements));
  }
  if (type == "group_rack_thompson") {
    return std::make_shared<rackcore::ThompsonRack>(canon.at("max_gen").get<std::uint32_t>(),
                                                    canon.at("sample_len").get<std::uint32_t>());
  }
  // extension
  const auto base = rack_from_descriptor(canon.at("base"));
  auto finite_base = std::dynamic_pointer_cast<const rackcore::FiniteRack>(base);
  if (!finite_base) throw Error("extension base must be a finite rack");
  const auto fiber = canon.at("fiber").get<std::uint32_t>();
  auto alpha = cocycle_from_json(canon.at("alpha"), fiber);
  return ext::build_extension(std::move(finite_base), std::move(alpha));
}

ojson table_descriptor(const rackcore::TableCandidate& t) {
  ojson d;
  d["type"] = "table";
  d["n"] = t.n;
  d["table"] = t.table;
  return d;
}

ojson conj_perm_descriptor(std::uint32_t degree, const std::vector<std::string>& seed) {
  ojson d;
  d["type"] = "conj_perm";
  d["degree"] = degree;
  d["seed"] = seed;
  return canonical_descriptor(d);
}

ojson thompson_descriptor(std::uint32_t max_gen, std::uint32_t sample_len) {
  ojson d;
  d["type"] = "group_rack_thompson";
  d["max_gen"] = max_gen;
  d["sample_len"] = sample_len;
  return d;
}

ojson extension_descriptor(const json& base, const ext::CocycleFamily& alpha) {
  ojson d;
  d["type"] = "extension";
  d["base"] = canonical_descriptor(base);
  d["fiber"] = alpha.k;
  d["alpha"] = cocycle_to_json(alpha);
  return d;
}

}  // namespace rackkex::descriptors
