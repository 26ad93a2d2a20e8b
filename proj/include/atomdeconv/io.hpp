#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace atomdeconv::io {

//! Round-trip exact rendering with 17 significant digits.
//! Non-finite values print as nan / inf / -inf.
std::string
format_double(double value);

//! Reads one decimal per line; a single leading header line "x" is allowed,
//! as are blank lines and surrounding whitespace.
std::vector<double>
read_sample_csv(const std::string& path);

//! Writes `content` to `path` through a temporary file in the same directory
//! and a rename, so readers never observe a partial file. "-" means stdout.
void
write_atomic(const std::string& path, std::string_view content);

//! Minimal insertion-ordered JSON object writer.
class JsonObject
{
public:
  JsonObject& add(std::string_view key, double value);
  JsonObject& add(std::string_view key, std::uint64_t value);
  JsonObject& add(std::string_view key, bool value);
  JsonObject& add(std::string_view key, std::string_view value);
  JsonObject& add(std::string_view key, const char* value);
  JsonObject& add(std::string_view key, const JsonObject& value);
  JsonObject& add(std::string_view key, const std::vector<double>& values);
  JsonObject& add(std::string_view key, const std::vector<std::uint64_t>& values);
  JsonObject& add(std::string_view key, const std::vector<std::string>& values);
  JsonObject& add_null(std::string_view key);

  //! Pretty-printed with two-space indentation.
  std::string dump(int indent = 0) const;

private:
  struct Field
  {
    std::string key;
    std::string scalar;            // rendered value unless nested
    std::vector<JsonObject> child; // one element for a nested object
  };

  JsonObject& raw(std::string_view key, std::string value);

  std::vector<Field> fields_;
};

std::string
json_quote(std::string_view text);

} // namespace atomdeconv::io
