#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace epdt::lab {

inline constexpr int config_version = 1;

enum Exit : int { Ok = 0, ValidationFailure = 2, NumericFailure = 3 };

// Runs epdt_lab with the given argument vector (without the program name).
// Everything the command prints goes to `out`, the JSON error object included.
int run(const std::vector<std::string>& args, std::ostream& out);

// 64-bit FNV-1a; the output slug and the determinism checks both use it.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);
std::string hex16(std::uint64_t h);

// Hash over the names and bytes of every regular file below dir, in sorted order.
std::uint64_t hash_tree(const std::filesystem::path& dir);

// Shortest round-trip decimal; "+inf", "-inf" and "nan" otherwise.
std::string format_number(double v);

}  // namespace epdt::lab
