#ifndef SOPMON_IO_HPP
#define SOPMON_IO_HPP

#include <string>
#include <vector>

#include "sopmon/charts.hpp"
#include "sopmon/grid.hpp"

namespace sopmon {

// Frames parsed from disk. Values arrive as doubles either way;
// integer_valued records whether every cell was integral, in which case the
// stream may be treated as counts (e.g. for tie-breaking noise).
struct LoadedFrames {
  std::vector<RealGrid> frames;
  bool integer_valued = false;
};

// Long-format CSV with header t,s1,s2,y: one row per cell, frames keyed by
// ascending t, each forming a complete rectangle of one shared shape.
// Malformed rows raise SchemaError; incomplete or inconsistent grids raise
// ShapeError.
LoadedFrames read_frames_csv(const std::string& path);

// One JSON object per line: {"t": <int>, "y": [[row0...], [row1...], ...]}.
LoadedFrames read_frames_ndjson(const std::string& path);

// Dispatches on extension: .ndjson/.jsonl use the JSON reader, otherwise CSV.
LoadedFrames read_frames(const std::string& path);

void write_frames_csv(const std::string& path, const std::vector<RealGrid>& frames);
void write_frames_csv(const std::string& path, const std::vector<CountGrid>& frames);
void write_frames_ndjson(const std::string& path, const std::vector<RealGrid>& frames);
void write_frames_ndjson(const std::string& path, const std::vector<CountGrid>& frames);
void write_frames(const std::string& path, const std::vector<RealGrid>& frames);
void write_frames(const std::string& path, const std::vector<CountGrid>& frames);

// One monitored statistic trajectory; run 0 is reserved for the pointwise
// mean over noise runs.
struct ChartRow {
  long long run = 1;
  ChartPoint point;
};

// CSV with header run,t,raw,smoothed,center,limit,alarm (alarm as 0/1).
void write_chart_csv(const std::string& path, const std::vector<ChartRow>& rows);

// Plain numeric file, one statistic value per line; blank lines and #
// comments are skipped.
std::vector<double> read_value_pool(const std::string& path);
void write_value_pool(const std::string& path, const std::vector<double>& values);

}  // namespace sopmon

#endif
