#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "qhosvd/qtensor.hpp"

namespace qhosvd {

// 64-bit FNV-1a.
[[nodiscard]] std::uint64_t fnv1a64(std::string_view bytes);

// Checksum of data/appendix_tensor.txt. Any edit to the fixture must update
// this value, which keeps transcription changes deliberate.
inline constexpr std::uint64_t kAppendixChecksum = 0xcdd4101639aaa284ULL;

// Plain-text tensor: '#' comments, then one entry per line as
// "i1 ... iN w x y z" with 1-based indices. Every index combination must
// appear exactly once. Throws DataError on malformed input.
[[nodiscard]] QTensor parse_tensor_text(std::string_view text);

// The 3x3x3x3 example tensor, compiled into the library.
[[nodiscard]] QTensor appendix_tensor();

// Reads a fixture file and checks it against kAppendixChecksum before
// parsing; throws DataError on mismatch and IoError when unreadable.
[[nodiscard]] QTensor load_appendix_fixture(const std::string& path);

}  // namespace qhosvd
