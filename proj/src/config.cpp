#include "vocxai/config.hpp"
#include "vocxai/errors.hpp"

#include <cctype>
#include <charconv>
#include <functional>

#include "file_util.hpp"

namespace vocxai {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

bool is_bare_key(std::string_view k) {
  if (k.empty()) return false;
  for (char c : k) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

TomlValue parse_value(std::string_view v, std::size_t lineno) {
  auto fail = [&](const std::string& why) -> TomlValue {
    throw ConfigError("config line " + std::to_string(lineno) + ": " + why);
  };
  if (v.empty()) return fail("missing value");
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') return fail("unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      if (v[i] == '\\' && i + 2 < v.size()) {
        const char e = v[++i];
        switch (e) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          default: return fail("unsupported escape sequence");
        }
      } else {
        out.push_back(v[i]);
      }
    }
    return out;
  }
  if (v == "true") return true;
  if (v == "false") return false;
  std::string digits;
  for (char c : v) {
    if (c != '_') digits.push_back(c);
  }
  const bool looks_float = digits.find_first_of(".eE") != std::string::npos ||
                           digits == "inf" || digits == "nan";
  if (!looks_float) {
    std::int64_t i = 0;
    const char* b = digits.data() + (digits.front() == '+' ? 1 : 0);
    const auto [p, ec] = std::from_chars(b, digits.data() + digits.size(), i);
    if (ec == std::errc() && p == digits.data() + digits.size()) return i;
    return fail("invalid value '" + std::string(v) + "'");
  }
  try {
    std::size_t used = 0;
    const double d = std::stod(digits, &used);
    if (used == digits.size()) return d;
  } catch (const std::logic_error&) {
  }
  return fail("invalid value '" + std::string(v) + "'");
}

std::string type_error(const std::string& key, const char* want) {
  return "config key '" + key + "' must be " + want;
}

double as_double(const std::string& key, const TomlValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  throw ConfigError(type_error(key, "a number"));
}

std::size_t as_size(const std::string& key, const TomlValue& v) {
  const auto* i = std::get_if<std::int64_t>(&v);
  if (i == nullptr || *i < 0) throw ConfigError(type_error(key, "a non-negative integer"));
  return static_cast<std::size_t>(*i);
}

bool as_bool(const std::string& key, const TomlValue& v) {
  const auto* b = std::get_if<bool>(&v);
  if (b == nullptr) throw ConfigError(type_error(key, "a boolean"));
  return *b;
}

const std::string& as_string(const std::string& key, const TomlValue& v) {
  const auto* s = std::get_if<std::string>(&v);
  if (s == nullptr) throw ConfigError(type_error(key, "a string"));
  return *s;
}

}  // namespace

TomlTable parse_toml(std::string_view text) {
  TomlTable table;
  std::string section;
  std::size_t lineno = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++lineno;
    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(lineno) + ": bad table header");
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (!is_bare_key(name)) throw ConfigError("config line " + std::to_string(lineno) + ": bad table name");
      section = std::string(name);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    if (!is_bare_key(key)) throw ConfigError("config line " + std::to_string(lineno) + ": bad key");
    const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
    if (table.contains(full)) throw ConfigError("config key '" + full + "' defined twice");
    table[full] = parse_value(trim(line.substr(eq + 1)), lineno);
  }
  return table;
}

void apply_config(ToolkitConfig& cfg, const TomlTable& table) {
  using Setter = std::function<void(const std::string&, const TomlValue&)>;
  const std::map<std::string, Setter> setters = {
      {"stft.fft_size", [&](auto& k, auto& v) { cfg.stft.fft_size = as_size(k, v); }},
      {"stft.hop", [&](auto& k, auto& v) { cfg.stft.hop = as_size(k, v); }},
      {"stft.window", [&](auto& k, auto& v) { cfg.stft.window = parse_window(as_string(k, v)); }},
      {"stft.center", [&](auto& k, auto& v) { cfg.stft.center = as_bool(k, v); }},
      {"annotation.quantile", [&](auto& k, auto& v) { cfg.annotation.quantile = as_double(k, v); }},
      {"annotation.kernel_size_time", [&](auto& k, auto& v) { cfg.annotation.kernel.size_time = as_size(k, v); }},
      {"annotation.kernel_size_freq", [&](auto& k, auto& v) { cfg.annotation.kernel.size_freq = as_size(k, v); }},
      {"annotation.kernel_var_time", [&](auto& k, auto& v) { cfg.annotation.kernel.var_time = as_double(k, v); }},
      {"annotation.kernel_var_freq", [&](auto& k, auto& v) { cfg.annotation.kernel.var_freq = as_double(k, v); }},
      {"annotation.spread_is_variance", [&](auto& k, auto& v) { cfg.annotation.kernel.spread_is_variance = as_bool(k, v); }},
      {"annotation.denom_epsilon", [&](auto& k, auto& v) { cfg.annotation.denom_epsilon = as_double(k, v); }},
      {"annotation.log_floor", [&](auto& k, auto& v) { cfg.annotation.log_floor = as_double(k, v); }},
      {"annotation.magnitude_domain",
       [&](auto& k, auto& v) {
         const std::string& s = as_string(k, v);
         if (s == "linear") {
           cfg.annotation.magnitude_domain = MagnitudeDomain::linear;
         } else if (s == "log") {
           cfg.annotation.magnitude_domain = MagnitudeDomain::log;
         } else {
           throw ConfigError("annotation.magnitude_domain must be \"linear\" or \"log\"");
         }
       }},
      {"alignment.frame", [&](auto& k, auto& v) { cfg.alignment.frame = as_size(k, v); }},
      {"alignment.hop", [&](auto& k, auto& v) { cfg.alignment.hop = as_size(k, v); }},
      {"alignment.enabled", [&](auto& k, auto& v) { cfg.alignment.enabled = as_bool(k, v); }},
      {"evaluation.quantile", [&](auto& k, auto& v) { cfg.evaluation.quantile = as_double(k, v); }},
      {"evaluation.fbound_tol", [&](auto& k, auto& v) { cfg.evaluation.fbound_tol = as_size(k, v); }},
      {"evaluation.ssim_mode",
       [&](auto& k, auto& v) {
         const std::string& s = as_string(k, v);
         if (s == "heatmap_vs_mask") {
           cfg.evaluation.ssim_mode = SsimMode::heatmap_vs_mask;
         } else if (s == "mask_vs_mask") {
           cfg.evaluation.ssim_mode = SsimMode::mask_vs_mask;
         } else {
           throw ConfigError("evaluation.ssim_mode must be \"heatmap_vs_mask\" or \"mask_vs_mask\"");
         }
       }},
      {"faithfulness.binarize", [&](auto& k, auto& v) { cfg.faithfulness.binarize = as_bool(k, v); }},
      {"faithfulness.quantile", [&](auto& k, auto& v) { cfg.faithfulness.quantile = as_double(k, v); }},
      {"faithfulness.tolerance", [&](auto& k, auto& v) { cfg.faithfulness.tolerance = as_double(k, v); }},
  };
  for (const auto& [key, value] : table) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(key, value);
  }
}

ToolkitConfig load_config(const std::filesystem::path& path) {
  ToolkitConfig cfg;
  apply_config(cfg, parse_toml(detail::read_file(path)));
  return cfg;
}

}  // namespace vocxai
