#include "tglab/conventions.hpp"

#include "tglab/embedded.hpp"

#include <cstdio>

namespace tglab {

std::string_view convention_ledger() { return embedded::kConventionLedger; }
std::string_view config_schema_text() { return embedded::kConfigSchema; }

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string ledger_hash() {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(convention_ledger())));
  return buf;
}

}  // namespace tglab
