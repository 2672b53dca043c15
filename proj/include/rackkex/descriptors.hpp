#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "rackkex/bytes.hpp"
#include "rackkex/ext.hpp"
#include "rackkex/rackcore.hpp"

namespace rackkex::descriptors {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

/// Validates a rack descriptor and re-emits it with fields in canonical
/// order. Supported types: table, conj_perm, group_rack_thompson, extension.
ojson canonical_descriptor(const json& d);

/// Compact canonical text; the byte form that descriptor_hash covers.
std::string descriptor_dump(const json& d);
Bytes descriptor_bytes(const json& d);
/// SHA-256 of the canonical descriptor bytes.
Bytes descriptor_hash(const json& d);

std::shared_ptr<const rackcore::Rack> rack_from_descriptor(const json& d);

ojson table_descriptor(const rackcore::TableCandidate& t);
ojson conj_perm_descriptor(std::uint32_t degree, const std::vector<std::string>& seed);
ojson thompson_descriptor(std::uint32_t max_gen, std::uint32_t sample_len);
ojson extension_descriptor(const json& base, const ext::CocycleFamily& alpha);

}  // namespace rackkex::descriptors
