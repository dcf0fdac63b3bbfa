#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace tglab {

/// docs/conventions.md as compiled in.
std::string_view convention_ledger();
/// docs/config_schema.json as compiled in.
std::string_view config_schema_text();

std::uint64_t fnv1a64(std::string_view bytes);
/// "fnv1a64:" followed by 16 hex digits of the ledger hash.
std::string ledger_hash();

}  // namespace tglab
