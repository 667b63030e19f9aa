#include "cotkit/jsonl.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>

#include <fmt/format.h>

#include "cotkit/text_util.hpp"

namespace cotkit {

namespace fs = std::filesystem;

JsonlReader::JsonlReader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw Error(ErrorCode::io, fmt::format("cannot open '{}'", path));
}

std::optional<Json> JsonlReader::next() {
  std::string buf;
  while (std::getline(in_, buf)) {
    ++line_;
    if (text::trim(buf).empty()) continue;
    try {
      return Json::parse(buf);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::parse,
                  fmt::format("{}:{}: malformed JSON at byte {}: {}", path_, line_, e.byte, e.what()));
    }
  }
  return std::nullopt;
}

void ensure_parent_dir(const std::string& path) {
  fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    fs::create_directories(parent, ec);
    if (ec) throw Error(ErrorCode::io, fmt::format("cannot create directory '{}': {}", parent.string(), ec.message()));
  }
}

JsonlWriter::JsonlWriter(std::string path) : path_(std::move(path)), tmp_path_(path_ + ".tmp") {
  ensure_parent_dir(path_);
  out_.open(tmp_path_, std::ios::binary | std::ios::trunc);
  if (!out_) throw Error(ErrorCode::io, fmt::format("cannot write '{}'", path_));
}

JsonlWriter::~JsonlWriter() {
  if (!committed_) {
    out_.close();
    std::error_code ec;
    fs::remove(tmp_path_, ec);
  }
}

void JsonlWriter::write(const Json& record) {
  out_ << record.dump(-1, ' ', false, Json::error_handler_t::replace) << '\n';
  ++count_;
}

void JsonlWriter::commit() {
  if (committed_) return;
  out_.close();
  if (!out_) throw Error(ErrorCode::io, fmt::format("failed writing '{}'", path_));
  std::error_code ec;
  fs::rename(tmp_path_, path_, ec);
  if (ec) throw Error(ErrorCode::io, fmt::format("cannot move output into '{}': {}", path_, ec.message()));
  committed_ = true;
}

void write_text_file(const std::string& path, const std::string& content) {
  ensure_parent_dir(path);
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, fmt::format("cannot write '{}'", path));
    out << content;
    if (!out) throw Error(ErrorCode::io, fmt::format("failed writing '{}'", path));
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::io, fmt::format("cannot move output into '{}': {}", path, ec.message()));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cotkit
