#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace lexidepth {

// FNV-1a 64-bit; used for the input digests recorded in run manifests.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);
std::string file_digest(const std::string& path);  // throws DataError

}  // namespace lexidepth
