#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

namespace fchlog::cli {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// JSON record written next to a command's outputs: tool version, config
/// hash, seed, thread count, wall-clock timestamps and a hash of every output.
class Provenance {
 public:
  Provenance(std::string command, std::string config_text, std::string config_path,
             std::uint64_t seed, int threads);

  void add(const std::filesystem::path& file);
  void add(const std::vector<std::filesystem::path>& files);
  std::filesystem::path write(const std::filesystem::path& dir) const;

 private:
  std::string command_;
  std::string config_text_;
  std::string config_path_;
  std::uint64_t seed_;
  int threads_;
  std::chrono::system_clock::time_point started_;
  std::vector<std::filesystem::path> files_;
};

}  // namespace fchlog::cli
