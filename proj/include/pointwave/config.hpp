#pragma once

// Run configuration: a TOML subset (key = value, [table], [[array of tables]],
// numbers, strings, booleans, single-line arrays, # comments).

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "pointwave/errors.hpp"

namespace pointwave {

struct ConfigError : Error {
  using Error::Error;
};

namespace toml_lite {

using Value = std::variant<double, std::string, bool, std::vector<double>, std::vector<std::string>>;

struct Entry {
  Value value;
  int line = 0;
  bool used = false;
};

struct Table {
  std::string name;  // dotted path for messages, "" for the root
  int line = 0;
  std::map<std::string, Entry> entries;
};

struct Document {
  std::string source;
  Table root;
  std::map<std::string, Table> tables;
  std::map<std::string, std::vector<Table>> arrays;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

inline bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  return true;
}

inline std::optional<double> parse_number(const std::string& s) {
  std::string t;
  for (char c : s)
    if (c != '_') t += c;
  if (t.empty()) return std::nullopt;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (...) {
    return std::nullopt;
  }
  if (used != t.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::optional<std::string> parse_string(const std::string& s) {
  if (s.size() < 2 || s.front() != '"' || s.back() != '"') return std::nullopt;
  const std::string body = s.substr(1, s.size() - 2);
  if (body.find('"') != std::string::npos) return std::nullopt;
  return body;
}

inline std::vector<std::string> split_items(const std::string& body) {
  std::vector<std::string> items;
  std::string cur;
  bool quoted = false;
  for (char c : body) {
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      items.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) items.push_back(trim(cur));
  return items;
}

inline Value parse_value(const std::string& raw, const std::string& where) {
  const std::string s = trim(raw);
  if (s.empty()) throw ConfigError(where + ": missing value");
  if (s == "true") return true;
  if (s == "false") return false;
  if (auto str = parse_string(s)) return *str;
  if (s.front() == '[') {
    if (s.back() != ']') throw ConfigError(where + ": unterminated array");
    const auto items = split_items(s.substr(1, s.size() - 2));
    if (items.empty()) return std::vector<double>{};
    if (items.front().front() == '"') {
      std::vector<std::string> out;
      for (const auto& it : items) {
        const auto str = parse_string(it);
        if (!str) throw ConfigError(where + ": mixed or malformed array element '" + it + "'");
        out.push_back(*str);
      }
      return out;
    }
    std::vector<double> out;
    for (const auto& it : items) {
      const auto v = parse_number(it);
      if (!v) throw ConfigError(where + ": bad number '" + it + "' in array");
      out.push_back(*v);
    }
    return out;
  }
  if (auto v = parse_number(s)) return *v;
  throw ConfigError(where + ": cannot parse value '" + s + "'");
}

} // namespace detail

inline Document parse(std::istream& in, const std::string& source) {
  Document doc;
  doc.source = source;
  Table* cur = &doc.root;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const std::string where = source + ":" + std::to_string(n);
    const std::string s = detail::trim(detail::strip_comment(line));
    if (s.empty()) continue;
    if (s.rfind("[[", 0) == 0) {
      if (s.size() < 4 || s.substr(s.size() - 2) != "]]") throw ConfigError(where + ": malformed table header");
      const std::string name = detail::trim(s.substr(2, s.size() - 4));
      if (!detail::valid_key(name)) throw ConfigError(where + ": bad table name '" + name + "'");
      if (doc.tables.count(name)) throw ConfigError(where + ": '" + name + "' already defined as a table");
      auto& arr = doc.arrays[name];
      arr.push_back(Table{name + "[" + std::to_string(arr.size()) + "]", n, {}});
      cur = &arr.back();
      continue;
    }
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(where + ": malformed table header");
      const std::string name = detail::trim(s.substr(1, s.size() - 2));
      if (!detail::valid_key(name)) throw ConfigError(where + ": bad table name '" + name + "'");
      if (doc.tables.count(name) || doc.arrays.count(name)) throw ConfigError(where + ": table '" + name + "' redefined");
      cur = &doc.tables.emplace(name, Table{name, n, {}}).first->second;
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = detail::trim(s.substr(0, eq));
    if (!detail::valid_key(key)) throw ConfigError(where + ": bad key '" + key + "'");
    const std::string field = cur->name.empty() ? key : cur->name + "." + key;
    if (cur->entries.count(key)) throw ConfigError(where + ": field '" + field + "' set twice");
    cur->entries.emplace(key, Entry{detail::parse_value(s.substr(eq + 1), where + ": field '" + field + "'"), n});
  }
  return doc;
}

inline Document parse_string(const std::string& text, const std::string& source = "<config>") {
  std::istringstream in(text);
  return parse(in, source);
}

inline Document parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  return parse(in, path);
}

} // namespace toml_lite

enum class Component { position, velocity };

struct GaussianBump {
  double center = 0.0;
  double width = 1.0;
  double amplitude = 1.0;
  Component component = Component::position;
};

struct GLambdaTerm {
  double lambda = 1.0;
  double coefficient = 1.0;
};

struct EigenvectorTerm {
  double coefficient = 1.0;
};

struct ChargeTerm {
  double q = 0.0;
};

using InitialTerm = std::variant<GaussianBump, GLambdaTerm, EigenvectorTerm, ChargeTerm>;

struct RunConfig {
  std::string source;
  std::vector<double> alphas;
  double r_max = 0.0;
  int n_r = 0;
  double k_max = 0.0;
  int n_k = 0;
  std::vector<InitialTerm> initial;
  std::optional<double> t_max;
  std::optional<int> n_samples;
  std::vector<std::string> checks;
  std::optional<std::uint64_t> seed;
  int random_states = 0;
  std::string direction = "plus";
  std::string directory;
  std::vector<std::string> formats{"csv", "json"};
  std::vector<double> probes;  // radii sampled into the evolve series

  bool wants(const std::string& fmt) const {
    for (const auto& f : formats)
      if (f == fmt) return true;
    return false;
  }
};

namespace detail {

class Reader {
 public:
  Reader(toml_lite::Table& t, const std::string& source) : t_(t), source_(source) {}

  std::string field(const std::string& key) const { return t_.name.empty() ? key : t_.name + "." + key; }

  std::string at(const std::string& key) const {
    const auto it = t_.entries.find(key);
    const int line = it != t_.entries.end() ? it->second.line : t_.line;
    return source_ + ":" + std::to_string(line) + ": field '" + field(key) + "'";
  }

  bool has(const std::string& key) const { return t_.entries.count(key) != 0; }

  toml_lite::Entry& require(const std::string& key) {
    const auto it = t_.entries.find(key);
    if (it == t_.entries.end()) {
      const std::string where = t_.line > 0 ? source_ + ":" + std::to_string(t_.line) : source_;
      throw ConfigError(where + ": missing required field '" + field(key) + "'");
    }
    it->second.used = true;
    return it->second;
  }

  double number(const std::string& key) {
    auto& e = require(key);
    if (const auto* d = std::get_if<double>(&e.value)) return *d;
    throw ConfigError(at(key) + ": expected a number");
  }

  std::optional<double> number_or(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  long long integer(const std::string& key) {
    const double v = number(key);
    if (v != std::floor(v) || std::abs(v) > 9.0e15) throw ConfigError(at(key) + ": expected an integer");
    return static_cast<long long>(v);
  }

  std::optional<long long> integer_or(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return integer(key);
  }

  std::string string(const std::string& key) {
    auto& e = require(key);
    if (const auto* s = std::get_if<std::string>(&e.value)) return *s;
    throw ConfigError(at(key) + ": expected a string");
  }

  std::vector<std::string> strings(const std::string& key) {
    auto& e = require(key);
    if (const auto* s = std::get_if<std::vector<std::string>>(&e.value)) return *s;
    if (const auto* d = std::get_if<std::vector<double>>(&e.value); d && d->empty()) return {};
    if (const auto* s = std::get_if<std::string>(&e.value)) return {*s};
    throw ConfigError(at(key) + ": expected a list of strings");
  }

  std::vector<double> numbers(const std::string& key) {
    auto& e = require(key);
    if (const auto* d = std::get_if<double>(&e.value)) return {*d};
    if (const auto* v = std::get_if<std::vector<double>>(&e.value)) return *v;
    throw ConfigError(at(key) + ": expected a number or a list of numbers");
  }

  void reject_unused() const {
    for (const auto& [key, e] : t_.entries)
      if (!e.used) throw ConfigError(source_ + ":" + std::to_string(e.line) + ": unknown field '" + field(key) + "'");
  }

 private:
  toml_lite::Table& t_;
  std::string source_;
};

inline Component parse_component(Reader& r) {
  if (!r.has("component")) return Component::position;
  const std::string c = r.string("component");
  if (c == "position") return Component::position;
  if (c == "velocity") return Component::velocity;
  throw ConfigError(r.at("component") + ": expected \"position\" or \"velocity\"");
}

inline InitialTerm parse_initial(Reader& r) {
  const std::string kind = r.string("kind");
  if (kind == "gaussian_bump") {
    GaussianBump b;
    b.center = r.number("center");
    b.width = r.number("width");
    if (!(b.width > 0.0)) throw ConfigError(r.at("width") + ": must be > 0");
    b.amplitude = r.number_or("amplitude").value_or(1.0);
    b.component = parse_component(r);
    return b;
  }
  if (kind == "g_lambda") {
    GLambdaTerm g;
    g.lambda = r.number("lambda");
    if (!(g.lambda > 0.0)) throw ConfigError(r.at("lambda") + ": must be > 0");
    g.coefficient = r.number_or("coefficient").value_or(1.0);
    return g;
  }
  if (kind == "eigenvector") return EigenvectorTerm{r.number_or("coefficient").value_or(1.0)};
  if (kind == "charge") return ChargeTerm{r.number("Q")};
  throw ConfigError(r.at("kind") + ": unknown initial kind '" + kind +
                    "' (gaussian_bump, g_lambda, eigenvector, charge)");
}

} // namespace detail

inline RunConfig build_config(toml_lite::Document doc) {
  RunConfig cfg;
  cfg.source = doc.source;
  const std::string& src = doc.source;

  detail::Reader root(doc.root, src);
  cfg.alphas = root.numbers("alpha");
  if (cfg.alphas.empty()) throw ConfigError(root.at("alpha") + ": empty list");
  if (root.has("checks")) cfg.checks = root.strings("checks");
  if (const auto s = root.integer_or("seed")) {
    if (*s < 0) throw ConfigError(root.at("seed") + ": must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(*s);
  }
  if (const auto n = root.integer_or("random_states")) {
    if (*n < 0) throw ConfigError(root.at("random_states") + ": must be >= 0");
    cfg.random_states = static_cast<int>(*n);
    if (cfg.random_states > 0 && !cfg.seed)
      throw ConfigError(root.at("random_states") + ": random states need an explicit 'seed' field");
  }
  if (root.has("direction")) {
    cfg.direction = root.string("direction");
    if (cfg.direction != "plus" && cfg.direction != "minus")
      throw ConfigError(root.at("direction") + ": expected \"plus\" or \"minus\"");
  }
  root.reject_unused();

  auto table = [&](const std::string& name) -> toml_lite::Table& {
    const auto it = doc.tables.find(name);
    if (it == doc.tables.end()) throw ConfigError(src + ": missing required table [" + name + "]");
    return it->second;
  };

  {
    detail::Reader r(table("grid"), src);
    cfg.r_max = r.number("r_max");
    if (!(cfg.r_max > 0.0)) throw ConfigError(r.at("r_max") + ": must be > 0");
    const long long n = r.integer("n_r");
    if (n < 4 || n > 20000) throw ConfigError(r.at("n_r") + ": must lie in [4, 20000]");
    cfg.n_r = static_cast<int>(n);
    r.reject_unused();
  }

  if (doc.tables.count("spectral")) {
    detail::Reader r(doc.tables["spectral"], src);
    cfg.k_max = r.number("k_max");
    if (!(cfg.k_max > 0.0)) throw ConfigError(r.at("k_max") + ": must be > 0");
    const long long n = r.integer("n_k");
    if (n < 1) throw ConfigError(r.at("n_k") + ": must be >= 1");
    cfg.n_k = static_cast<int>(n);
    r.reject_unused();
  }

  if (doc.tables.count("horizon")) {
    detail::Reader r(doc.tables["horizon"], src);
    cfg.t_max = r.number("t_max");
    if (!(*cfg.t_max > 0.0)) throw ConfigError(r.at("t_max") + ": must be > 0");
    const long long n = r.integer("n_samples");
    if (n < 2) throw ConfigError(r.at("n_samples") + ": must be >= 2");
    cfg.n_samples = static_cast<int>(n);
    r.reject_unused();
  }

  if (doc.tables.count("output")) {
    detail::Reader r(doc.tables["output"], src);
    cfg.directory = r.string("directory");
    if (cfg.directory.empty()) throw ConfigError(r.at("directory") + ": must not be empty");
    if (r.has("formats")) {
      cfg.formats = r.strings("formats");
      for (const auto& f : cfg.formats)
        if (f != "csv" && f != "json") throw ConfigError(r.at("formats") + ": unknown format '" + f + "'");
    }
    if (r.has("probes")) {
      cfg.probes = r.numbers("probes");
      for (double p : cfg.probes)
        if (!(p >= 0.0 && p <= cfg.r_max)) throw ConfigError(r.at("probes") + ": radius outside [0, r_max]");
    }
    r.reject_unused();
  } else {
    throw ConfigError(src + ": missing required table [output]");
  }

  if (doc.arrays.count("initial"))
    for (auto& t : doc.arrays["initial"]) {
      detail::Reader r(t, src);
      cfg.initial.push_back(detail::parse_initial(r));
      r.reject_unused();
    }

  for (const auto& [name, t] : doc.tables)
    if (name != "grid" && name != "spectral" && name != "horizon" && name != "output")
      throw ConfigError(src + ":" + std::to_string(t.line) + ": unknown table [" + name + "]");
  for (const auto& [name, arr] : doc.arrays)
    if (name != "initial")
      throw ConfigError(src + ":" + std::to_string(arr.front().line) + ": unknown table [[" + name + "]]");
  return cfg;
}

inline RunConfig load_config(const std::string& path) { return build_config(toml_lite::parse_file(path)); }

inline RunConfig config_from_string(const std::string& text, const std::string& source = "<config>") {
  return build_config(toml_lite::parse_string(text, source));
}

} // namespace pointwave
