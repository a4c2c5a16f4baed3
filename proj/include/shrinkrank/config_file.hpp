#pragma once

#include <map>
#include <string>
#include <vector>

namespace shrinkrank {

// Flat `key = value...` text format shared by benchmark plans and data
// configs. `#` starts a comment, values are whitespace-separated tokens, and
// keys may not repeat. No nesting.
class KeyValueFile {
 public:
  static KeyValueFile parse_file(const std::string& path);
  static KeyValueFile parse_string(const std::string& text, const std::string& origin);

  bool has(const std::string& key) const;
  const std::vector<std::string>& tokens(const std::string& key) const;

  std::string get_string(const std::string& key) const;  // single token
  long get_int(const std::string& key) const;
  double get_real(const std::string& key) const;
  std::vector<double> get_reals(const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& key) const;

  std::string get_string_or(const std::string& key, const std::string& fallback) const;
  long get_int_or(const std::string& key, long fallback) const;
  double get_real_or(const std::string& key, double fallback) const;

  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
  std::map<std::string, std::vector<std::string>> entries_;
};

double parse_real(const std::string& token, const std::string& context);
long parse_int(const std::string& token, const std::string& context);

}  // namespace shrinkrank
