#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <type_traits>
#include <vector>

#include "bumpdirac/errors.hpp"

namespace bumpdirac::cli {

// 17 significant digits round-trip every double.
template <class T>
std::string format_number(T v) {
  if constexpr (std::is_floating_point_v<T>) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, static_cast<double>(v), std::chars_format::general, 17);
    return std::string(buf, end);
  } else {
    return std::to_string(v);
  }
}

// Shortest round-trip form, for human-facing text.
inline std::string short_number(double v) {
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline std::string cell(const std::string& text) { return text; }

template <class T>
std::string cell(const T& v) {
  return format_number(v);
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header) : out_(path) {
    if (!out_) fail(ErrorKind::configuration, "cannot write " + path.string());
    bool first = true;
    for (const auto& h : header) {
      if (!first) out_ << ',';
      out_ << h;
      first = false;
    }
    out_ << '\n';
  }

  template <class... Ts>
  void row(const Ts&... values) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(values), first = false), ...);
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

}  // namespace bumpdirac::cli
