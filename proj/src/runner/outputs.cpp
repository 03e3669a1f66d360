#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <memory>

#include "nlw/runner.hpp"

namespace nlw {

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw Error("sha256: digest computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
  text_ += "\n";
}

CsvWriter& CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw ContractViolation("CsvWriter: row width does not match header");
  char buf[64];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    if (i) text_ += ",";
    text_ += buf;
  }
  text_ += "\n";
  return *this;
}

namespace {

namespace fs = std::filesystem;

ManifestEntry write_atomic(const fs::path& dir, const std::string& name, const std::string& bytes) {
  const fs::path target = dir / name;
  const fs::path tmp = dir / ("." + name + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot rename '" + tmp.string() + "' to '" + target.string() + "': " + ec.message());
  return {name, sha256_hex(bytes), bytes.size()};
}

}  // namespace

std::vector<ManifestEntry> emit_outputs(const RunRecord& record, const std::filesystem::path& directory) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw IoError("cannot create directory '" + directory.string() + "': " + ec.message());
  std::vector<ManifestEntry> entries;
  entries.push_back(write_atomic(directory, "metadata.json", record.metadata.empty() ? "{}\n" : record.metadata));
  for (const auto& [name, bytes] : record.files) entries.push_back(write_atomic(directory, name, bytes));
  if (record.trajectory) entries.push_back(write_atomic(directory, "trajectory.bin", *record.trajectory));
  nlohmann::ordered_json manifest = nlohmann::ordered_json::array();
  for (const auto& e : entries) manifest.push_back({{"path", e.path}, {"sha256", e.sha256}, {"bytes", e.bytes}});
  write_atomic(directory, "manifest.json", manifest.dump(2) + "\n");
  return entries;
}

}  // namespace nlw
