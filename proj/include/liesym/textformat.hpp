#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace liesym::text {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One catalog file: "keyword rest-of-line" entries in file order. Lines
/// starting with '#' and blank lines are skipped.
struct Record {
  struct Line {
    std::string key;
    std::string value;
    int number = 0;
  };

  std::string path;
  std::vector<Line> lines;

  [[nodiscard]] std::optional<std::string> get(const std::string& key) const;
  [[nodiscard]] std::string require(const std::string& key) const;
  [[nodiscard]] std::vector<std::string> all(const std::string& key) const;
  /// All values of `key` joined with single spaces (multi-line quotes).
  [[nodiscard]] std::string joined(const std::string& key) const;
  [[noreturn]] void fail(const std::string& message, int line = 0) const;
};

[[nodiscard]] Record read_record(const std::filesystem::path& file);

/// Every "*.txt" file of `dir`, sorted by file name. Missing directory gives
/// an empty list.
[[nodiscard]] std::vector<Record> read_directory(const std::filesystem::path& dir);

/// Reference to a catalog entry with optional argument list:
/// "A_{3.7}[q=1/3, p=k]".
struct Reference {
  std::string name;
  std::vector<std::pair<std::string, std::string>> args;
};

[[nodiscard]] Reference parse_reference(const std::string& token);

/// Splits on whitespace, keeping bracketed "[...]" groups attached.
[[nodiscard]] std::vector<std::string> split_tokens(const std::string& s);

[[nodiscard]] std::string trim(const std::string& s);

/// Splits on `sep` at bracket depth zero.
[[nodiscard]] std::vector<std::string> split_top(const std::string& s, char sep);

}  // namespace liesym::text
