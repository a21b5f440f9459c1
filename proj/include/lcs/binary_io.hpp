#pragma once

// Shared plumbing for the "JSON header line + little-endian payload" files
// (VGF1, FMG1, CGF1).

#include "lcs/error.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace lcs::io {

using json = nlohmann::json;

std::ofstream open_for_write(const std::filesystem::path& path);
std::ifstream open_for_read(const std::filesystem::path& path);

void write_header(std::ostream& out, const json& header);

/// Reads the first line and parses it; checks the magic tag.
json read_header(std::istream& in, const std::string& expected_magic);

/// Peeks at the magic tag of a file without consuming the payload.
std::string peek_magic(const std::filesystem::path& path);

void write_f64(std::ostream& out, std::span<const double> values);
void write_bytes(std::ostream& out, std::span<const std::uint8_t> bytes);

std::vector<double> read_f64(std::istream& in, std::size_t count);
std::vector<std::uint8_t> read_bytes(std::istream& in, std::size_t count);

/// Throws a format error unless the stream is exactly at end of file.
void expect_eof(std::istream& in);

std::vector<std::uint8_t> pack_bits(const std::vector<std::uint8_t>& flags);
std::vector<std::uint8_t> unpack_bits(const std::vector<std::uint8_t>& packed, std::size_t count);

template <typename T>
T require(const json& header, const char* key) {
  if (!header.contains(key)) throw Error(ErrorKind::Format, std::string("header missing key '") + key + "'");
  try {
    return header.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Format, std::string("header key '") + key + "': " + e.what());
  }
}

}  // namespace lcs::io
