#include "provenance.hpp"

#include "lcs/error.hpp"

#include <Eigen/Core>
#include <openssl/crypto.h>
#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>

#include <fcntl.h>
#include <unistd.h>

#ifndef LCSKIT_VERSION
#define LCSKIT_VERSION "0.0.0"
#endif

namespace lcskit {

namespace {

std::string hex(const unsigned char* data, unsigned len) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out += digits[data[i] >> 4];
    out += digits[data[i] & 0xF];
  }
  return out;
}

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lcs::Error(lcs::ErrorKind::InvalidArgument, "cannot read " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw lcs::Error(lcs::ErrorKind::Unavailable, "SHA-256 digest failed");
  return hex(digest, len);
}

std::string sha256_file(const fs::path& path) { return sha256_hex(read_all(path)); }

DirLock::DirLock(const fs::path& dir) : path_(dir / ".lcskit.lock") {
  fs::create_directories(dir);
  const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0)
    throw lcs::Error(lcs::ErrorKind::InvalidArgument,
                     "output directory is locked by another run (remove " + path_.string() + " if stale)");
  const std::string pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] const auto written = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

DirLock::~DirLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

Stage::Stage(std::string name, json params, std::vector<fs::path> inputs, std::vector<fs::path> outputs)
    : name_(std::move(name)), params_(std::move(params)), input_hashes_(json::object()), outputs_(std::move(outputs)) {
  for (const auto& in : inputs) input_hashes_[in.filename().string()] = sha256_file(in);
  const json keyed{{"stage", name_}, {"version", LCSKIT_VERSION}, {"params", params_}, {"inputs", input_hashes_}};
  key_ = sha256_hex(keyed.dump());
}

fs::path Stage::sidecar(const fs::path& output) { return fs::path(output.string() + ".prov.json"); }

bool Stage::up_to_date() const {
  for (const auto& out : outputs_) {
    const auto side = sidecar(out);
    if (!fs::exists(out) || !fs::exists(side)) return false;
    try {
      const json prov = json::parse(read_all(side));
      if (prov.value("config_hash", "") != key_ || prov.value("sha256", "") != sha256_file(out)) return false;
    } catch (const json::exception&) {
      return false;
    }
  }
  return true;
}

void Stage::record(double wall_seconds, const json& extra) const {
  for (const auto& out : outputs_) {
    json prov{{"stage", name_},
              {"file", out.filename().string()},
              {"config_hash", key_},
              {"sha256", sha256_file(out)},
              {"params", params_},
              {"inputs", input_hashes_},
              {"version", version_string()},
              {"wall_time_s", wall_seconds}};
    for (auto it = extra.begin(); it != extra.end(); ++it) prov[it.key()] = it.value();
    std::ofstream side(sidecar(out), std::ios::binary);
    side << prov.dump(2) << '\n';
  }
}

std::string version_string() {
  std::ostringstream v;
  v << "lcskit " << LCSKIT_VERSION << " (Eigen " << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.'
    << EIGEN_MINOR_VERSION << ", " << OpenSSL_version(OPENSSL_VERSION) << ')';
  return v.str();
}

}  // namespace lcskit
