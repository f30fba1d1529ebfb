#include "fchlog_cli/provenance.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "fchlog/errors.hpp"

#ifndef FCHLOG_VERSION
#define FCHLOG_VERSION "unknown"
#endif

namespace fchlog::cli {

namespace {

std::string iso_utc(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 digest failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot read " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return sha256_hex(ss.str());
}

Provenance::Provenance(std::string command, std::string config_text, std::string config_path,
                       std::uint64_t seed, int threads)
    : command_(std::move(command)),
      config_text_(std::move(config_text)),
      config_path_(std::move(config_path)),
      seed_(seed),
      threads_(threads),
      started_(std::chrono::system_clock::now()) {}

void Provenance::add(const std::filesystem::path& file) { files_.push_back(file); }

void Provenance::add(const std::vector<std::filesystem::path>& files) {
  files_.insert(files_.end(), files.begin(), files.end());
}

std::filesystem::path Provenance::write(const std::filesystem::path& dir) const {
  nlohmann::ordered_json j;
  j["tool"] = "fchlog";
  j["version"] = FCHLOG_VERSION;
  j["command"] = command_;
  j["config_path"] = config_path_;
  j["config_sha256"] = sha256_hex(config_text_);
  j["seed"] = seed_;
  j["threads"] = threads_;
  j["started_utc"] = iso_utc(started_);
  j["finished_utc"] = iso_utc(std::chrono::system_clock::now());
  nlohmann::ordered_json outputs = nlohmann::ordered_json::array();
  for (const auto& f : files_) {
    outputs.push_back({{"file", std::filesystem::relative(f, dir).generic_string()},
                       {"sha256", sha256_file(f)}});
  }
  j["outputs"] = outputs;
  std::filesystem::create_directories(dir);
  const auto path = dir / "provenance.json";
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path.string());
  os << j.dump(2) << '\n';
  return path;
}

}  // namespace fchlog::cli
