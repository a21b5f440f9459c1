#include "lcs/binary_io.hpp"

#include <bit>
#include <cstring>

namespace lcs::io {

namespace {

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
  }
}

}  // namespace

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open for reading: " + path.string());
  return in;
}

void write_header(std::ostream& out, const json& header) {
  out << header.dump() << '\n';
}

json read_header(std::istream& in, const std::string& expected_magic) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Format, "missing header line");
  json header;
  try {
    header = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Format, std::string("malformed header: ") + e.what());
  }
  if (!header.is_object()) throw Error(ErrorKind::Format, "header is not a JSON object");
  const auto magic = require<std::string>(header, "magic");
  if (magic != expected_magic)
    throw Error(ErrorKind::Format, "expected magic " + expected_magic + ", found " + magic);
  return header;
}

std::string peek_magic(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  std::string line;
  if (!std::getline(in, line)) return {};
  try {
    auto header = json::parse(line);
    if (header.is_object() && header.contains("magic") && header["magic"].is_string())
      return header["magic"].get<std::string>();
  } catch (const json::parse_error&) {
  }
  return {};
}

void write_f64(std::ostream& out, std::span<const double> values) {
  std::vector<char> buffer(values.size() * 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(values[i]));
    std::memcpy(buffer.data() + 8 * i, &bits, 8);
  }
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (!out) throw Error(ErrorKind::InvalidArgument, "write failed");
}

void write_bytes(std::ostream& out, std::span<const std::uint8_t> bytes) {
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::InvalidArgument, "write failed");
}

std::vector<double> read_f64(std::istream& in, std::size_t count) {
  std::vector<char> buffer(count * 8);
  in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (static_cast<std::size_t>(in.gcount()) != buffer.size())
    throw Error(ErrorKind::Format, "payload shorter than header declares");
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, buffer.data() + 8 * i, 8);
    values[i] = std::bit_cast<double>(to_little(bits));
  }
  return values;
}

std::vector<std::uint8_t> read_bytes(std::istream& in, std::size_t count) {
  std::vector<std::uint8_t> bytes(count);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(count));
  if (static_cast<std::size_t>(in.gcount()) != count)
    throw Error(ErrorKind::Format, "payload shorter than header declares");
  return bytes;
}

void expect_eof(std::istream& in) {
  if (in.peek() != std::char_traits<char>::eof())
    throw Error(ErrorKind::Format, "payload longer than header declares");
}

std::vector<std::uint8_t> pack_bits(const std::vector<std::uint8_t>& flags) {
  std::vector<std::uint8_t> packed((flags.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < flags.size(); ++i)
    if (flags[i]) packed[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  return packed;
}

std::vector<std::uint8_t> unpack_bits(const std::vector<std::uint8_t>& packed, std::size_t count) {
  std::vector<std::uint8_t> flags(count, 0);
  for (std::size_t i = 0; i < count; ++i) flags[i] = (packed[i / 8] >> (i % 8)) & 1u;
  return flags;
}

}  // namespace lcs::io
