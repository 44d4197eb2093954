#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fireline::cli {

std::string sha256_hex(std::string_view data);

struct OutputFile {
  std::string path;  // relative to the output root, '/' separated
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct StageTiming {
  std::string name;
  double seconds = 0.0;
};

// Result directory. Every file goes through write() so the manifest can list
// it with its checksum. I/O failures raise IoError.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path root);

  void write(const std::string& relative, const std::string& content);
  [[nodiscard]] const std::vector<OutputFile>& files() const noexcept { return files_; }
  [[nodiscard]] const std::filesystem::path& root() const noexcept { return root_; }

 private:
  std::filesystem::path root_;
  std::vector<OutputFile> files_;
};

struct ManifestInfo {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<StageTiming> stages;
};

// Writes manifest.json (not itself listed) with checksums of every file written so far.
void write_manifest(OutputDir& out, const ManifestInfo& info);

}  // namespace fireline::cli
