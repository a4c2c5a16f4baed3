#include "shrinkrank/config_file.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace shrinkrank {

namespace {

std::string strip(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

KeyValueFile KeyValueFile::parse_string(const std::string& text, const std::string& origin) {
  KeyValueFile kv;
  kv.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": expected `key = value`, got: " + line);
    const std::string key = strip(line.substr(0, eq));
    if (key.empty())
      throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": empty key");
    if (kv.entries_.count(key))
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": duplicate key: " + key);
    std::istringstream rest(line.substr(eq + 1));
    std::vector<std::string> toks;
    std::string tok;
    while (rest >> tok) toks.push_back(tok);
    kv.entries_[key] = std::move(toks);
  }
  return kv;
}

bool KeyValueFile::has(const std::string& key) const { return entries_.count(key) > 0; }

const std::vector<std::string>& KeyValueFile::tokens(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end())
    throw std::runtime_error(origin_ + ": missing key: " + key);
  return it->second;
}

std::string KeyValueFile::get_string(const std::string& key) const {
  const auto& toks = tokens(key);
  if (toks.size() != 1)
    throw std::runtime_error(origin_ + ": key `" + key + "` expects a single value");
  return toks[0];
}

long KeyValueFile::get_int(const std::string& key) const {
  return parse_int(get_string(key), origin_ + ": " + key);
}

double KeyValueFile::get_real(const std::string& key) const {
  return parse_real(get_string(key), origin_ + ": " + key);
}

std::vector<double> KeyValueFile::get_reals(const std::string& key) const {
  const auto& toks = tokens(key);
  std::vector<double> out;
  out.reserve(toks.size());
  for (const auto& t : toks) out.push_back(parse_real(t, origin_ + ": " + key));
  return out;
}

std::vector<std::string> KeyValueFile::get_strings(const std::string& key) const {
  return tokens(key);
}

std::string KeyValueFile::get_string_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

long KeyValueFile::get_int_or(const std::string& key, long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

double KeyValueFile::get_real_or(const std::string& key, double fallback) const {
  return has(key) ? get_real(key) : fallback;
}

double parse_real(const std::string& token, const std::string& context) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (errno != 0 || end == token.c_str() || *end != '\0')
    throw std::runtime_error(context + ": not a number: " + token);
  return v;
}

long parse_int(const std::string& token, const std::string& context) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(token.c_str(), &end, 10);
  if (errno != 0 || end == token.c_str() || *end != '\0')
    throw std::runtime_error(context + ": not an integer: " + token);
  return v;
}

}  // namespace shrinkrank
