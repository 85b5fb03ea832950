#ifndef BREATHER_IO_HPP
#define BREATHER_IO_HPP

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace breather {

inline constexpr const char* kToolName = "breather";
inline constexpr const char* kToolVersion = "0.1.0";

// 17 significant digits, locale independent.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Hash of the canonical (key-sorted) dump.
inline std::string config_hash(const nlohmann::json& j) { return hex64(fnv1a64(j.dump())); }

namespace detail {

inline void write_json_string(std::string& out, const std::string& s) {
  out += nlohmann::json(s).dump();
}

inline void write_json(std::string& out, const nlohmann::json& j, int indent, int depth) {
  const std::string pad(std::size_t(indent * (depth + 1)), ' ');
  const std::string pad_end(std::size_t(indent * depth), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        write_json_string(out, it.key());
        out += ": ";
        write_json(out, it.value(), indent, depth + 1);
      }
      out += "\n" + pad_end + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // scalar arrays on one line
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += pad;
        write_json(out, e, indent, depth + 1);
      }
      out += flat ? "]" : "\n" + pad_end + "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

// JSON text with floats at 17 significant digits.
inline std::string to_json_text(const nlohmann::json& j, int indent = 2) {
  std::string out;
  detail::write_json(out, j, indent, 0);
  out += "\n";
  return out;
}

inline nlohmann::json output_meta(const std::string& hash) {
  return {{"tool", kToolName}, {"version", kToolVersion}, {"config_hash", hash}};
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

// JSON document with a leading "meta" object.
inline void write_json_file(const std::filesystem::path& path, nlohmann::json body, const std::string& hash) {
  body["meta"] = output_meta(hash);
  write_text_file(path, to_json_text(body));
}

class CsvWriter {
 public:
  CsvWriter(std::vector<std::string> columns, const std::string& hash) : ncol_(columns.size()) {
    text_ = std::string("# ") + kToolName + " " + kToolVersion + " config_hash=" + hash + "\n";
    add_line(columns);
  }

  class Row {
   public:
    Row& operator<<(double v) {
      cells_.push_back(format_double(v));
      return *this;
    }
    Row& operator<<(int v) {
      cells_.push_back(std::to_string(v));
      return *this;
    }
    Row& operator<<(std::size_t v) {
      cells_.push_back(std::to_string(v));
      return *this;
    }
    Row& operator<<(bool v) {
      cells_.push_back(v ? "1" : "0");
      return *this;
    }
    Row& operator<<(const std::string& v) {
      cells_.push_back(v);
      return *this;
    }
    Row& operator<<(const char* v) {
      cells_.push_back(v);
      return *this;
    }
    const std::vector<std::string>& cells() const { return cells_; }

   private:
    std::vector<std::string> cells_;
  };

  void add(const Row& r) {
    if (r.cells().size() != ncol_) throw std::logic_error("CsvWriter: column count mismatch");
    add_line(r.cells());
  }

  const std::string& text() const { return text_; }
  void save(const std::filesystem::path& path) const { write_text_file(path, text_); }

 private:
  void add_line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += cells[i];
    }
    text_ += '\n';
  }

  std::size_t ncol_;
  std::string text_;
};

}  // namespace breather

#endif
