#pragma once

#include <cstddef>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cotkit/records.hpp"

namespace cotkit {

/// Streams JSON records from a JSONL file, skipping blank lines.
class JsonlReader {
 public:
  explicit JsonlReader(const std::string& path);

  /// Next record, or nullopt at end of file. Throws Error(parse) naming the
  /// file and line on malformed JSON.
  std::optional<Json> next();
  std::size_t line() const { return line_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::size_t line_ = 0;
};

/// Writes one compact record per line into a temporary file that replaces
/// the destination on commit(), so an interrupted run never leaves a
/// truncated output that a resumed pipeline would mistake for finished.
class JsonlWriter {
 public:
  explicit JsonlWriter(std::string path);
  ~JsonlWriter();

  JsonlWriter(const JsonlWriter&) = delete;
  JsonlWriter& operator=(const JsonlWriter&) = delete;

  void write(const Json& record);
  void commit();
  std::size_t count() const { return count_; }

 private:
  std::string path_;
  std::string tmp_path_;
  std::ofstream out_;
  std::size_t count_ = 0;
  bool committed_ = false;
};

/// Reads every record of a file, mapping each through `fn`.
template <typename T>
std::vector<T> read_all(const std::string& path, const std::function<T(const Json&)>& fn) {
  JsonlReader reader(path);
  std::vector<T> out;
  while (auto rec = reader.next()) out.push_back(fn(*rec));
  return out;
}

/// Writes `content` atomically (temp file + rename), creating parent dirs.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

void ensure_parent_dir(const std::string& path);

}  // namespace cotkit
