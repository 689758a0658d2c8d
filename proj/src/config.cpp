#include "sopmon/config.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "sopmon/errors.hpp"

namespace sopmon {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

bool valid_key(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
  if (s.front() == '.' || s.back() == '.' || s.find("..") != std::string::npos) return false;
  return true;
}

double parse_num(const std::string& tok, std::size_t lineno) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v))
    throw ConfigError("line " + std::to_string(lineno) + ": cannot parse number '" + tok + "'");
  return v;
}

ConfigValue parse_value(const std::string& raw, std::size_t lineno) {
  if (raw.empty())
    throw ConfigError("line " + std::to_string(lineno) + ": missing value");
  if (raw == "true") return true;
  if (raw == "false") return false;
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"')
      throw ConfigError("line " + std::to_string(lineno) + ": unterminated string");
    const std::string body = raw.substr(1, raw.size() - 2);
    if (body.find('"') != std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": strings may not contain quotes");
    return body;
  }
  if (raw.front() == '[') {
    if (raw.back() != ']')
      throw ConfigError("line " + std::to_string(lineno) + ": unterminated array");
    std::vector<double> out;
    const std::string body = trim(raw.substr(1, raw.size() - 2));
    if (body.empty()) return out;
    std::size_t start = 0;
    while (true) {
      const std::size_t pos = body.find(',', start);
      const std::string tok = trim(pos == std::string::npos ? body.substr(start)
                                                            : body.substr(start, pos - start));
      out.push_back(parse_num(tok, lineno));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    return out;
  }
  return parse_num(raw, lineno);
}

// Cuts a trailing comment, ignoring # characters inside quoted strings.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    else if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

}  // namespace

ConfigTable parse_config(const std::string& text) {
  ConfigTable table;
  std::string section;
  std::istringstream iss(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(iss, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_key(section))
        throw ConfigError("line " + std::to_string(lineno) + ": bad section name");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (!valid_key(key) || key.find('.') != std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": bad key '" + key + "'");
    const std::string full = section.empty() ? key : section + "." + key;
    if (table.count(full))
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + full + "'");
    table.emplace(full, parse_value(trim(line.substr(eq + 1)), lineno));
  }
  return table;
}

ConfigTable parse_config_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

void apply_override(ConfigTable& table, const std::string& dotted_key,
                    const std::string& raw_value) {
  if (!valid_key(dotted_key)) throw ConfigError("bad override key '" + dotted_key + "'");
  const std::string raw = trim(raw_value);
  // Unlike in config files, a bare word on the command line is a string.
  if (!raw.empty() && raw != "true" && raw != "false" && raw.front() != '"' &&
      raw.front() != '[') {
    const char* begin = raw.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end != begin && *end == '\0' && errno != ERANGE && std::isfinite(v)) {
      table[dotted_key] = v;
      return;
    }
    table[dotted_key] = raw;
    return;
  }
  table[dotted_key] = parse_value(raw, 0);
}

namespace {

// Tracks which keys the builder consumed so leftovers can be reported.
class Reader {
 public:
  explicit Reader(const ConfigTable& t) : t_(t) {}

  bool has(const std::string& k) const { return t_.count(k) != 0; }

  std::optional<double> num(const std::string& k) {
    const ConfigValue* v = take(k);
    if (!v) return std::nullopt;
    if (const double* d = std::get_if<double>(v)) return *d;
    throw ConfigError("key '" + k + "' must be a number");
  }

  std::optional<long long> integer(const std::string& k) {
    auto v = num(k);
    if (!v) return std::nullopt;
    if (*v != std::floor(*v) || std::abs(*v) >= 9007199254740992.0)
      throw ConfigError("key '" + k + "' must be an integer");
    return static_cast<long long>(*v);
  }

  std::optional<std::string> str(const std::string& k) {
    const ConfigValue* v = take(k);
    if (!v) return std::nullopt;
    if (const std::string* s = std::get_if<std::string>(v)) return *s;
    throw ConfigError("key '" + k + "' must be a string");
  }

  std::optional<std::vector<double>> arr(const std::string& k) {
    const ConfigValue* v = take(k);
    if (!v) return std::nullopt;
    if (const auto* a = std::get_if<std::vector<double>>(v)) return *a;
    throw ConfigError("key '" + k + "' must be an array of numbers");
  }

  void finish() const {
    for (const auto& [k, v] : t_)
      if (!used_.count(k)) throw ConfigError("unknown key '" + k + "'");
  }

  bool any_with_prefix(const std::string& prefix) const {
    auto it = t_.lower_bound(prefix);
    return it != t_.end() && it->first.compare(0, prefix.size(), prefix) == 0;
  }

 private:
  const ConfigValue* take(const std::string& k) {
    auto it = t_.find(k);
    if (it == t_.end()) return nullptr;
    used_.insert(k);
    return &it->second;
  }

  const ConfigTable& t_;
  std::set<std::string> used_;
};

long long require_int(Reader& r, const std::string& k) {
  auto v = r.integer(k);
  if (!v) throw ConfigError("missing required key '" + k + "'");
  return *v;
}

std::vector<double> require_arr(Reader& r, const std::string& k, std::size_t len) {
  auto v = r.arr(k);
  if (!v) throw ConfigError("missing required key '" + k + "'");
  if (v->size() != len)
    throw ConfigError("key '" + k + "' must have exactly " + std::to_string(len) + " entries");
  return *v;
}

int int_entry(double v, const std::string& k) {
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw ConfigError("entries of key '" + k + "' must be integers");
  return static_cast<int>(v);
}

std::array<int, 3> powers3(Reader& r, const std::string& k) {
  std::array<int, 3> p{1, 1, 1};
  if (auto v = r.arr(k)) {
    if (v->size() != 3) throw ConfigError("key '" + k + "' must have exactly 3 entries");
    for (std::size_t i = 0; i < 3; ++i) p[i] = int_entry((*v)[i], k);
  }
  return p;
}

std::array<int, 4> powers4(Reader& r, const std::string& k) {
  std::array<int, 4> p{1, 1, 1, 1};
  if (auto v = r.arr(k)) {
    if (v->size() != 4) throw ConfigError("key '" + k + "' must have exactly 4 entries");
    for (std::size_t i = 0; i < 4; ++i) p[i] = int_entry((*v)[i], k);
  }
  return p;
}

MarginalSpec read_marginal(Reader& r, const std::string& prefix, MarginalSpec fallback) {
  auto dist = r.str(prefix + ".dist");
  if (!dist) {
    if (r.any_with_prefix(prefix + "."))
      throw ConfigError("key '" + prefix + ".dist' is required");
    return fallback;
  }
  const auto num_or = [&](const char* key, double dflt) {
    auto v = r.num(prefix + "." + key);
    return v ? *v : dflt;
  };
  if (*dist == "normal") return marg::Normal{num_or("mu", 0.0), num_or("sigma", 1.0)};
  if (*dist == "t") return marg::StudentT{num_or("nu", 1.0)};
  if (*dist == "exponential") return marg::Exponential{num_or("rate", 1.0)};
  if (*dist == "uniform") return marg::Uniform{num_or("a", 0.0), num_or("b", 1.0)};
  if (*dist == "poisson") return marg::Poisson{num_or("mean", 1.0)};
  if (*dist == "zip") return marg::Zip{num_or("omega", 0.0), num_or("mean", 1.0)};
  if (*dist == "bernoulli") return marg::Bernoulli{num_or("p", 0.5)};
  if (*dist == "laplace") return marg::Laplace{num_or("mu", 0.0), num_or("b", 1.0)};
  if (*dist == "skew_normal")
    return marg::SkewNormal{num_or("xi", 0.0), num_or("omega", 1.0), num_or("alpha", 0.0)};
  if (*dist == "weibull") return marg::Weibull{num_or("shape", 1.0), num_or("scale", 1.0)};
  if (*dist == "normal_mixture") {
    marg::NormalMixture m;
    if (auto w = r.arr(prefix + ".weights")) m.weights = *w;
    if (auto mu = r.arr(prefix + ".means")) m.means = *mu;
    if (auto s = r.arr(prefix + ".sigmas")) m.sigmas = *s;
    return m;
  }
  if (*dist == "bpoi")
    return marg::ScaledPoissonProduct{num_or("p", 0.2), num_or("mean", 5.0)};
  throw ConfigError("unknown distribution '" + *dist + "'");
}

ChartConfig read_chart(Reader& r) {
  ChartConfig cfg;
  auto family = r.str("chart.family");
  if (!family) throw ConfigError("key 'chart.family' is required");
  const auto delay = [&]() {
    auto v = require_arr(r, "chart.delay", 2);
    return Delay{int_entry(v[0], "chart.delay"), int_entry(v[1], "chart.delay")};
  };
  const auto lag = [&]() {
    auto v = require_arr(r, "chart.lag", 2);
    return SpatialLag{int_entry(v[0], "chart.lag"), int_entry(v[1], "chart.lag")};
  };
  const auto window = [&]() { return static_cast<int>(require_int(r, "chart.window")); };
  if (*family == "tau_hat") cfg.kind = ChartKind::tau_hat();
  else if (*family == "kappa_hat") cfg.kind = ChartKind::kappa_hat();
  else if (*family == "tau_tilde") cfg.kind = ChartKind::tau_tilde();
  else if (*family == "kappa_tilde") cfg.kind = ChartKind::kappa_tilde();
  else if (*family == "acf") cfg.kind = ChartKind::acf();
  else if (*family == "tau_tilde_delayed") cfg.kind = ChartKind::tau_tilde_delayed(delay());
  else if (*family == "acf_lagged") cfg.kind = ChartKind::acf_lagged(lag());
  else if (*family == "tau_tilde_bp") cfg.kind = ChartKind::tau_tilde_bp(window());
  else if (*family == "acf_bp") cfg.kind = ChartKind::acf_bp(window());
  else throw ConfigError("unknown chart family '" + *family + "'");
  if (auto v = r.num("chart.lambda")) cfg.lambda = *v;
  if (auto v = r.num("chart.limit")) cfg.limit = *v;
  if (auto v = r.num("chart.center")) cfg.center = *v;
  // Stencil keys that the chosen family ignores stay unconsumed and are
  // reported as unknown when the reader finishes.
  return cfg;
}

DgpSpec read_dgp(Reader& r) {
  DgpSpec spec;
  auto model = r.str("dgp.model");
  if (!model) throw ConfigError("key 'dgp.model' is required");
  spec.m = static_cast<int>(require_int(r, "dgp.m"));
  spec.n = static_cast<int>(require_int(r, "dgp.n"));
  const auto lag_or = [&](int dflt) {
    auto v = r.integer("dgp.lag");
    return v ? static_cast<int>(*v) : dflt;
  };
  const auto burn_or = [&](int dflt) {
    auto v = r.integer("dgp.burn");
    return v ? static_cast<int>(*v) : dflt;
  };
  if (*model == "iid") {
    spec.model = dgp::Iid{read_marginal(r, "dgp.marginal", marg::Normal{})};
  } else if (*model == "sar") {
    auto c = require_arr(r, "dgp.coef", 3);
    spec.model = dgp::Sar{c[0], c[1], c[2], lag_or(1), burn_or(50),
                          read_marginal(r, "dgp.innovation", marg::Normal{})};
  } else if (*model == "sinar") {
    auto c = require_arr(r, "dgp.coef", 3);
    spec.model = dgp::Sinar{c[0], c[1], c[2], lag_or(1), burn_or(50),
                            read_marginal(r, "dgp.innovation", marg::Poisson{5.0})};
  } else if (*model == "sqma") {
    auto c = require_arr(r, "dgp.coef", 3);
    spec.model = dgp::Sqma{c[0], c[1], c[2], powers3(r, "dgp.powers"), lag_or(1),
                           read_marginal(r, "dgp.innovation", marg::Normal{})};
  } else if (*model == "sqinma") {
    auto c = require_arr(r, "dgp.coef", 3);
    spec.model = dgp::Sqinma{c[0], c[1], c[2], powers3(r, "dgp.powers"), lag_or(1),
                             read_marginal(r, "dgp.innovation", marg::Poisson{5.0})};
  } else if (*model == "bilateral_sar") {
    auto c = require_arr(r, "dgp.coef", 4);
    dgp::BilateralSar b{c[0], c[1], c[2], c[3], 25, 1e-8,
                        read_marginal(r, "dgp.innovation", marg::Normal{})};
    if (auto v = r.integer("dgp.buffer")) b.buffer = static_cast<int>(*v);
    if (auto v = r.num("dgp.tol")) b.tol = *v;
    spec.model = b;
  } else if (*model == "bilateral_sqma") {
    auto c = require_arr(r, "dgp.coef", 4);
    spec.model = dgp::BilateralSqma{c[0], c[1], c[2], c[3], powers4(r, "dgp.powers"),
                                    read_marginal(r, "dgp.innovation", marg::Normal{})};
  } else {
    throw ConfigError("unknown generator model '" + *model + "'");
  }
  if (r.any_with_prefix("dgp.contamination.")) {
    ContaminationSpec c;
    auto frac = r.num("dgp.contamination.fraction");
    if (!frac) throw ConfigError("key 'dgp.contamination.fraction' is required");
    c.fraction = *frac;
    auto cm = r.str("dgp.contamination.model");
    if (!cm) throw ConfigError("key 'dgp.contamination.model' is required");
    if (*cm == "fixed_add") {
      auto v = r.num("dgp.contamination.c");
      if (!v) throw ConfigError("key 'dgp.contamination.c' is required");
      c.model = FixedAdd{*v};
    } else if (*cm == "symmetric_add") {
      auto v = r.num("dgp.contamination.c");
      if (!v) throw ConfigError("key 'dgp.contamination.c' is required");
      c.model = SymmetricAdd{*v};
    } else if (*cm == "poisson_add") {
      auto v = r.num("dgp.contamination.nu");
      if (!v) throw ConfigError("key 'dgp.contamination.nu' is required");
      c.model = PoissonAdd{*v};
    } else {
      throw ConfigError("unknown contamination model '" + *cm + "'");
    }
    spec.contamination = c;
  }
  return spec;
}

}  // namespace

RunConfig build_run_config(const ConfigTable& table) {
  Reader r(table);
  RunConfig cfg;
  if (r.has("chart.family")) {
    cfg.chart = read_chart(r);
    cfg.has_chart = true;
  } else if (r.any_with_prefix("chart.")) {
    throw ConfigError("key 'chart.family' is required when chart settings are given");
  }
  if (r.has("dgp.model")) {
    cfg.dgp = read_dgp(r);
  } else if (r.any_with_prefix("dgp.")) {
    throw ConfigError("key 'dgp.model' is required when generator settings are given");
  }
  if (auto v = r.str("run.input")) cfg.input = *v;
  if (auto v = r.str("run.pool")) cfg.pool_file = *v;
  if (auto v = r.integer("run.frames")) {
    if (*v < 1) throw ConfigError("key 'run.frames' must be at least 1");
    cfg.frames = static_cast<std::uint64_t>(*v);
  }
  if (auto v = r.integer("run.replications")) {
    if (*v < 1) throw ConfigError("key 'run.replications' must be at least 1");
    cfg.replications = static_cast<std::uint64_t>(*v);
  }
  if (auto v = r.num("run.target_arl")) {
    cfg.target_arl = *v;
    cfg.has_target = true;
  }
  if (auto v = r.num("run.rel_tol")) cfg.rel_tol = *v;
  if (auto v = r.integer("run.cap")) {
    if (*v < 1) throw ConfigError("key 'run.cap' must be at least 1");
    cfg.cap = static_cast<std::uint64_t>(*v);
  }
  if (auto v = r.num("run.jitter")) cfg.jitter_scale = *v;
  if (auto v = r.integer("run.noise_runs")) {
    if (*v < 1) throw ConfigError("key 'run.noise_runs' must be at least 1");
    cfg.noise_runs = *v;
  }
  r.finish();
  if (cfg.dgp && cfg.input)
    throw ConfigError("specify either a generator or an input stream, not both");
  return cfg;
}

}  // namespace sopmon
