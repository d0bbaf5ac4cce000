#include "liesym/textformat.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

namespace liesym::text {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::optional<std::string> Record::get(const std::string& key) const {
  for (const auto& l : lines)
    if (l.key == key) return l.value;
  return std::nullopt;
}

std::string Record::require(const std::string& key) const {
  auto v = get(key);
  if (!v) fail("missing '" + key + "' line");
  return *v;
}

std::vector<std::string> Record::all(const std::string& key) const {
  std::vector<std::string> out;
  for (const auto& l : lines)
    if (l.key == key) out.push_back(l.value);
  return out;
}

std::string Record::joined(const std::string& key) const {
  std::string out;
  for (const auto& v : all(key)) {
    if (!out.empty()) out += ' ';
    out += v;
  }
  return out;
}

void Record::fail(const std::string& message, int line) const {
  throw FormatError(path + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + message);
}

Record read_record(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw FormatError("cannot open " + file.string());
  Record r;
  r.path = file.string();
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto space = line.find_first_of(" \t");
    Record::Line l;
    l.key = line.substr(0, space);
    l.value = space == std::string::npos ? std::string() : trim(line.substr(space));
    l.number = number;
    r.lines.push_back(std::move(l));
  }
  return r;
}

std::vector<Record> read_directory(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(dir))
      if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Record> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(read_record(f));
  return out;
}

std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '[' || c == '(' || c == '{') ++depth;
    if (c == ']' || c == ')' || c == '}') --depth;
    if (std::isspace(static_cast<unsigned char>(c)) && depth == 0) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

Reference parse_reference(const std::string& token) {
  Reference r;
  const auto open = token.find('[');
  r.name = trim(token.substr(0, open));
  if (open == std::string::npos) return r;
  const auto close = token.rfind(']');
  if (close == std::string::npos || close < open) throw FormatError("unbalanced '[' in reference " + token);
  for (const auto& part : split_top(token.substr(open + 1, close - open - 1), ',')) {
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw FormatError("expected name=value in reference " + token);
    r.args.emplace_back(trim(part.substr(0, eq)), trim(part.substr(eq + 1)));
  }
  return r;
}

}  // namespace liesym::text
