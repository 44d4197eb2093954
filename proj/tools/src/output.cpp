#include "fireline_cli/output.hpp"

#include <array>
#include <fstream>

#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

#include "fireline/errors.hpp"
#include "fireline_cli/version.hpp"

namespace fireline::cli {

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw IoError("sha256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int k = 0; k < length; ++k) hex += fmt::format("{:02x}", digest[k]);
  return hex;
}

OutputDir::OutputDir(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec || !std::filesystem::is_directory(root_)) {
    throw IoError(fmt::format("cannot create output directory '{}': {}", root_.string(), ec.message()));
  }
  // Probe writability before any simulation work starts.
  const auto probe = root_ / ".fireline_write_test";
  {
    std::ofstream test(probe);
    if (!test) throw IoError(fmt::format("output directory '{}' is not writable", root_.string()));
  }
  std::filesystem::remove(probe, ec);
}

void OutputDir::write(const std::string& relative, const std::string& content) {
  const auto path = root_ / relative;
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
  files_.push_back({relative, sha256_hex(content), content.size()});
}

void write_manifest(OutputDir& out, const ManifestInfo& info) {
  nlohmann::ordered_json j;
  j["command"] = info.command;
  j["code_version"] = kCodeVersion;
  j["config_hash"] = info.config_hash;
  j["seed"] = info.seed;
  auto files = nlohmann::ordered_json::array();
  for (const auto& f : out.files()) files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  j["files"] = files;
  auto stages = nlohmann::ordered_json::array();
  for (const auto& s : info.stages) stages.push_back({{"stage", s.name}, {"seconds", s.seconds}});
  j["stages"] = stages;

  const auto path = out.root() / "manifest.json";
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  file << j.dump(2) << '\n';
  if (!file) throw IoError(fmt::format("write to '{}' failed", path.string()));
}

}  // namespace fireline::cli
