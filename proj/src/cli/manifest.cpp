#include "bmhd/cli/manifest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "bmhd/common/error.hpp"

namespace bmhd::cli {

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  require(EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) == 1, ErrorKind::Io,
          "sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

OutputDir::OutputDir(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  require(!ec, ErrorKind::Io, "cannot create output directory '" + root_.string() + "': " + ec.message());
}

void OutputDir::write(const std::string& rel, const std::string& bytes) {
  const std::filesystem::path p = root_ / rel;
  std::error_code ec;
  std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot write '" + p.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  require(static_cast<bool>(out), ErrorKind::Io, "short write to '" + p.string() + "'");
  auto it = std::find_if(entries_.begin(), entries_.end(), [&](const ManifestEntry& e) { return e.path == rel; });
  ManifestEntry e{rel, sha256_hex(bytes), bytes.size()};
  if (it != entries_.end()) *it = e;
  else entries_.push_back(e);
}

void OutputDir::write_manifest(const ExperimentConfig& c, const std::string& status, int exit_code) {
  std::vector<ManifestEntry> files = entries_;
  std::sort(files.begin(), files.end(), [](const ManifestEntry& a, const ManifestEntry& b) { return a.path < b.path; });
  nlohmann::ordered_json j;
  j["tool"] = "bmhd";
  j["kind"] = c.kind;
  j["seed"] = c.seed;
  j["config_sha256"] = sha256_hex(to_toml(c));
  j["status"] = status;
  j["exit_code"] = exit_code;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& f : files) arr.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  j["files"] = arr;
  const std::string text = j.dump(2) + "\n";
  std::ofstream out(root_ / "manifest.json", std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot write manifest in '" + root_.string() + "'");
  out << text;
}

Manifest read_manifest(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
    Manifest m;
    m.kind = j.at("kind").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.status = j.at("status").get<std::string>();
    m.exit_code = j.at("exit_code").get<int>();
    for (const auto& f : j.at("files"))
      m.files.push_back({f.at("path").get<std::string>(), f.at("sha256").get<std::string>(), f.at("bytes").get<std::size_t>()});
    return m;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, "manifest '" + path.string() + "': " + e.what());
  }
}

std::vector<std::string> verify_manifest(const std::filesystem::path& dir) {
  const Manifest m = read_manifest(dir / "manifest.json");
  std::vector<std::string> bad;
  for (const auto& f : m.files) {
    std::error_code ec;
    if (!std::filesystem::exists(dir / f.path, ec)) {
      bad.push_back(f.path);
      continue;
    }
    if (sha256_hex(read_file(dir / f.path)) != f.sha256) bad.push_back(f.path);
  }
  return bad;
}

}  // namespace bmhd::cli
