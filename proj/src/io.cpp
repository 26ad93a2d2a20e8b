#include "atomdeconv/io.hpp"

#include "atomdeconv/error.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <unistd.h>

namespace atomdeconv::io {

std::string
format_double(double value)
{
  if (std::isnan(value))
    return "nan";
  if (std::isinf(value))
    return value > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", value);
}

namespace {

std::string_view
trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

} // namespace

std::vector<double>
read_sample_csv(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::IoError, "cannot open input file '" + path + "'");
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto field = trim(line);
    if (field.empty())
      continue;
    if (!seen_content && field == "x") {
      seen_content = true;
      continue;
    }
    seen_content = true;
    double v = 0.0;
    const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size() ||
        !std::isfinite(v))
      throw Error(ErrorCode::ParseError,
                  fmt::format("{}:{}: '{}' is not a finite decimal", path,
                              line_no, field));
    values.push_back(v);
  }
  if (values.empty())
    throw Error(ErrorCode::InvalidArgument,
                "input file '" + path + "' holds no observations");
  return values;
}

void
write_atomic(const std::string& path, std::string_view content)
{
  if (path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp =
    target.string() + fmt::format(".tmp.{}", static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error(ErrorCode::IoError,
                  "cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw Error(ErrorCode::IoError, "write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw Error(ErrorCode::IoError,
                "cannot rename onto '" + path + "': " + ec.message());
  }
}

std::string
json_quote(std::string_view text)
{
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20)
          out += fmt::format("\\u{:04x}", static_cast<int>(c));
        else
          out += c;
    }
  }
  return out + "\"";
}

namespace {

// JSON has no nan/inf literals; they are written as null.
std::string
json_number(double value)
{
  return std::isfinite(value) ? format_double(value) : "null";
}

template<class T, class F>
std::string
json_array(const std::vector<T>& values, F&& render)
{
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0)
      out += ", ";
    out += render(values[i]);
  }
  return out + "]";
}

} // namespace

JsonObject&
JsonObject::raw(std::string_view key, std::string value)
{
  fields_.push_back({ std::string(key), std::move(value), {} });
  return *this;
}

JsonObject&
JsonObject::add(std::string_view key, double value)
{
  return raw(key, json_number(value));
}

JsonObject&
JsonObject::add(std::string_view key, std::uint64_t value)
{
  return raw(key, std::to_string(value));
}

JsonObject&
JsonObject::add(std::string_view key, bool value)
{
  return raw(key, value ? "true" : "false");
}

JsonObject&
JsonObject::add(std::string_view key, std::string_view value)
{
  return raw(key, json_quote(value));
}

JsonObject&
JsonObject::add(std::string_view key, const char* value)
{
  return add(key, std::string_view(value));
}

JsonObject&
JsonObject::add(std::string_view key, const JsonObject& value)
{
  fields_.push_back({ std::string(key), {}, { value } });
  return *this;
}

JsonObject&
JsonObject::add(std::string_view key, const std::vector<double>& values)
{
  return raw(key, json_array(values, [](double v) { return json_number(v); }));
}

JsonObject&
JsonObject::add(std::string_view key, const std::vector<std::uint64_t>& values)
{
  return raw(key, json_array(values, [](std::uint64_t v) {
               return std::to_string(v);
             }));
}

JsonObject&
JsonObject::add(std::string_view key, const std::vector<std::string>& values)
{
  return raw(key, json_array(values, [](const std::string& v) {
               return json_quote(v);
             }));
}

JsonObject&
JsonObject::add_null(std::string_view key)
{
  return raw(key, "null");
}

std::string
JsonObject::dump(int indent) const
{
  if (fields_.empty())
    return "{}";
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  std::string out = "{\n";
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    const auto& f = fields_[i];
    out += pad + json_quote(f.key) + ": ";
    out += f.child.empty() ? f.scalar : f.child.front().dump(indent + 2);
    out += i + 1 < fields_.size() ? ",\n" : "\n";
  }
  return out + std::string(static_cast<std::size_t>(indent), ' ') + "}";
}

} // namespace atomdeconv::io
