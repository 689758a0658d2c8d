#include "sopmon/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "sopmon/errors.hpp"

namespace sopmon {

namespace {

constexpr double kExactIntBound = 9007199254740992.0;  // 2^53

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void strip_cr(std::string& s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
}

double parse_number(const std::string& tok, const char* what) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  // Out-of-range literals become +/-inf or a subnormal; the callers' finiteness
  // checks decide, so underflow must not be rejected here.
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw SchemaError(std::string("cannot parse ") + what + " from '" + tok + "'");
  return v;
}

long long parse_integer(const std::string& tok, const char* what) {
  const double v = parse_number(tok, what);
  if (v != std::floor(v) || std::abs(v) >= kExactIntBound)
    throw SchemaError(std::string(what) + " must be an integer, got '" + tok + "'");
  return static_cast<long long>(v);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

struct CellRow {
  long long s1, s2;
  double y;
};

LoadedFrames assemble(std::map<long long, std::vector<CellRow>>& by_t) {
  if (by_t.empty()) throw ShapeError("frame stream is empty");
  LoadedFrames out;
  out.integer_valued = true;
  long long want_rows = -1, want_cols = -1;
  for (auto& [t, cells] : by_t) {
    long long max1 = 0, max2 = 0;
    for (const CellRow& c : cells) {
      max1 = std::max(max1, c.s1);
      max2 = std::max(max2, c.s2);
    }
    const long long rows = max1 + 1, cols = max2 + 1;
    if (want_rows < 0) {
      want_rows = rows;
      want_cols = cols;
    } else if (rows != want_rows || cols != want_cols) {
      throw ShapeError("frame " + std::to_string(t) + " has a different shape");
    }
    if (static_cast<long long>(cells.size()) != rows * cols)
      throw ShapeError("frame " + std::to_string(t) + " is not a complete rectangle");
    RealGrid g(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    std::vector<unsigned char> seen(static_cast<std::size_t>(rows * cols), 0);
    for (const CellRow& c : cells) {
      const auto idx = static_cast<std::size_t>(c.s1 * cols + c.s2);
      if (seen[idx])
        throw ShapeError("frame " + std::to_string(t) + " has a duplicate cell");
      seen[idx] = 1;
      g(static_cast<std::size_t>(c.s1), static_cast<std::size_t>(c.s2)) = c.y;
      if (c.y != std::floor(c.y) || std::abs(c.y) >= kExactIntBound) out.integer_valued = false;
    }
    if (rows < 2 || cols < 2) throw ShapeError("frames must be at least 2x2");
    out.frames.push_back(std::move(g));
  }
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path + "' for reading");
  return f;
}

bool has_suffix(const std::string& s, const char* suf) {
  const std::size_t n = std::strlen(suf);
  return s.size() >= n && s.compare(s.size() - n, n, suf) == 0;
}

template <class Grid>
void frames_to_csv(std::ofstream& f, const std::vector<Grid>& frames) {
  f << "t,s1,s2,y\n";
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const Grid& g = frames[k];
    for (std::size_t i = 0; i < g.rows(); ++i) {
      for (std::size_t j = 0; j < g.cols(); ++j) {
        f << (k + 1) << ',' << i << ',' << j << ',';
        if constexpr (std::is_same_v<Grid, CountGrid>)
          f << g(i, j);
        else
          f << fmt_double(g(i, j));
        f << '\n';
      }
    }
  }
}

template <class Grid>
void frames_to_ndjson(std::ofstream& f, const std::vector<Grid>& frames) {
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const Grid& g = frames[k];
    f << "{\"t\":" << (k + 1) << ",\"y\":[";
    for (std::size_t i = 0; i < g.rows(); ++i) {
      if (i) f << ',';
      f << '[';
      for (std::size_t j = 0; j < g.cols(); ++j) {
        if (j) f << ',';
        if constexpr (std::is_same_v<Grid, CountGrid>)
          f << g(i, j);
        else
          f << fmt_double(g(i, j));
      }
      f << ']';
    }
    f << "]}\n";
  }
}

}  // namespace

LoadedFrames read_frames_csv(const std::string& path) {
  std::ifstream f = open_in(path);
  std::string line;
  if (!std::getline(f, line)) throw SchemaError("missing header line in '" + path + "'");
  strip_cr(line);
  if (line != "t,s1,s2,y")
    throw SchemaError("expected header 't,s1,s2,y' in '" + path + "', got '" + line + "'");
  std::map<long long, std::vector<CellRow>> by_t;
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const auto tok = split_csv(line);
    if (tok.size() != 4)
      throw SchemaError("line " + std::to_string(lineno) + ": expected 4 columns");
    const long long t = parse_integer(tok[0], "t");
    const long long s1 = parse_integer(tok[1], "s1");
    const long long s2 = parse_integer(tok[2], "s2");
    if (t < 1) throw SchemaError("line " + std::to_string(lineno) + ": t must be >= 1");
    if (s1 < 0 || s2 < 0)
      throw SchemaError("line " + std::to_string(lineno) + ": cell indices must be >= 0");
    const double y = parse_number(tok[3], "y");
    if (!std::isfinite(y))
      throw NonFiniteError("line " + std::to_string(lineno) + ": non-finite value");
    by_t[t].push_back({s1, s2, y});
  }
  return assemble(by_t);
}

LoadedFrames read_frames_ndjson(const std::string& path) {
  std::ifstream f = open_in(path);
  std::map<long long, std::vector<CellRow>> by_t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!obj.is_object() || !obj.contains("t") || !obj.contains("y"))
      throw SchemaError("line " + std::to_string(lineno) +
                        ": expected an object with keys 't' and 'y'");
    if (!obj["t"].is_number_integer() || obj["t"].get<long long>() < 1)
      throw SchemaError("line " + std::to_string(lineno) + ": t must be an integer >= 1");
    const long long t = obj["t"].get<long long>();
    if (by_t.count(t))
      throw ShapeError("frame " + std::to_string(t) + " appears more than once");
    const auto& y = obj["y"];
    if (!y.is_array() || y.empty())
      throw SchemaError("line " + std::to_string(lineno) + ": y must be a non-empty array");
    auto& cells = by_t[t];
    for (std::size_t i = 0; i < y.size(); ++i) {
      const auto& row = y[i];
      if (!row.is_array())
        throw SchemaError("line " + std::to_string(lineno) + ": y rows must be arrays");
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (!row[j].is_number())
          throw SchemaError("line " + std::to_string(lineno) + ": y cells must be numbers");
        const double v = row[j].get<double>();
        if (!std::isfinite(v))
          throw NonFiniteError("line " + std::to_string(lineno) + ": non-finite value");
        cells.push_back({static_cast<long long>(i), static_cast<long long>(j), v});
      }
    }
  }
  return assemble(by_t);
}

LoadedFrames read_frames(const std::string& path) {
  if (has_suffix(path, ".ndjson") || has_suffix(path, ".jsonl")) return read_frames_ndjson(path);
  return read_frames_csv(path);
}

void write_frames_csv(const std::string& path, const std::vector<RealGrid>& frames) {
  auto f = open_out(path);
  frames_to_csv(f, frames);
}
void write_frames_csv(const std::string& path, const std::vector<CountGrid>& frames) {
  auto f = open_out(path);
  frames_to_csv(f, frames);
}
void write_frames_ndjson(const std::string& path, const std::vector<RealGrid>& frames) {
  auto f = open_out(path);
  frames_to_ndjson(f, frames);
}
void write_frames_ndjson(const std::string& path, const std::vector<CountGrid>& frames) {
  auto f = open_out(path);
  frames_to_ndjson(f, frames);
}
void write_frames(const std::string& path, const std::vector<RealGrid>& frames) {
  if (has_suffix(path, ".ndjson") || has_suffix(path, ".jsonl"))
    write_frames_ndjson(path, frames);
  else
    write_frames_csv(path, frames);
}
void write_frames(const std::string& path, const std::vector<CountGrid>& frames) {
  if (has_suffix(path, ".ndjson") || has_suffix(path, ".jsonl"))
    write_frames_ndjson(path, frames);
  else
    write_frames_csv(path, frames);
}

void write_chart_csv(const std::string& path, const std::vector<ChartRow>& rows) {
  auto f = open_out(path);
  f << "run,t,raw,smoothed,center,limit,alarm\n";
  for (const ChartRow& r : rows) {
    f << r.run << ',' << r.point.t << ',' << fmt_double(r.point.raw) << ','
      << fmt_double(r.point.smoothed) << ',' << fmt_double(r.point.center) << ','
      << fmt_double(r.point.limit) << ',' << (r.point.alarm ? 1 : 0) << '\n';
  }
}

std::vector<double> read_value_pool(const std::string& path) {
  std::ifstream f = open_in(path);
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    strip_cr(line);
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::size_t a = line.find_first_not_of(" \t");
    if (a == std::string::npos) continue;
    std::size_t b = line.find_last_not_of(" \t");
    const std::string tok = line.substr(a, b - a + 1);
    const double v = parse_number(tok, "pool value");
    if (!std::isfinite(v))
      throw NonFiniteError("line " + std::to_string(lineno) + ": non-finite pool value");
    out.push_back(v);
  }
  if (out.empty()) throw SchemaError("value pool '" + path + "' is empty");
  return out;
}

void write_value_pool(const std::string& path, const std::vector<double>& values) {
  auto f = open_out(path);
  for (double v : values) f << fmt_double(v) << '\n';
}

}  // namespace sopmon
