#include "avseld/metadata_csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "avseld/errors.hpp"
#include "avseld/geometry.hpp"

namespace avseld {

namespace {

[[noreturn]] void bad(const std::filesystem::path& path, std::size_t line,
                      const std::string& why) {
  throw data_error(path.string() + ":" + std::to_string(line) + ": " + why);
}

long parse_int(const std::string& field, const std::filesystem::path& path,
               std::size_t line) {
  if (field.empty()) bad(path, line, "empty field");
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(field, &used, 10);
  } catch (const std::exception&) {
    bad(path, line, "not an integer: '" + field + "'");
  }
  if (used != field.size()) bad(path, line, "not an integer: '" + field + "'");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

// Canonical integer azimuth in (-180, 180]; the writer never emits -180.
int canonical_azimuth(double az_deg) {
  const double wrapped = wrap_azimuth_deg(az_deg);
  long v = std::lround(wrapped);
  if (v <= -180) v = 180;
  if (v > 180) v -= 360;
  return static_cast<int>(v);
}

}  // namespace

std::vector<EventAnnotation> read_metadata_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error(path.string() + ": cannot open file");
  std::vector<EventAnnotation> events;
  std::string line;
  std::size_t line_no = 0;
  int has_distance = -1;  // -1 until the first row decides
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 5 && fields.size() != 6) {
      bad(path, line_no, "expected 5 or 6 fields, got " + std::to_string(fields.size()));
    }
    const bool row_has_distance = fields.size() == 6;
    if (has_distance == -1) {
      has_distance = row_has_distance ? 1 : 0;
    } else if (row_has_distance != (has_distance == 1)) {
      bad(path, line_no, "inconsistent column count across rows");
    }
    const long frame = parse_int(fields[0], path, line_no);
    const long cls = parse_int(fields[1], path, line_no);
    const long source = parse_int(fields[2], path, line_no);
    const long az = parse_int(fields[3], path, line_no);
    const long el = parse_int(fields[4], path, line_no);
    if (frame < 0) bad(path, line_no, "negative frame index");
    if (cls < 0 || cls >= kNumClasses) {
      bad(path, line_no, "class index out of range: " + std::to_string(cls));
    }
    if (source < 0) bad(path, line_no, "negative source index");
    if (az < -180 || az > 180) {
      bad(path, line_no, "azimuth out of range: " + std::to_string(az));
    }
    if (el < -90 || el > 90) {
      bad(path, line_no, "elevation out of range: " + std::to_string(el));
    }
    EventAnnotation e;
    e.frame_index = static_cast<int>(frame);
    e.class_index = static_cast<int>(cls);
    e.source_index = static_cast<int>(source);
    e.doa = SphericalDoa(static_cast<double>(az), static_cast<double>(el));
    if (row_has_distance) {
      const long dist = parse_int(fields[5], path, line_no);
      if (dist < 0) bad(path, line_no, "negative distance");
      e.distance_cm = static_cast<int>(dist);
    }
    events.push_back(e);
  }
  return events;
}

void write_metadata_csv(const std::vector<EventAnnotation>& events,
                        const std::filesystem::path& path) {
  std::vector<EventAnnotation> rows = events;
  std::stable_sort(rows.begin(), rows.end(),
                   [](const EventAnnotation& a, const EventAnnotation& b) {
                     if (a.frame_index != b.frame_index) return a.frame_index < b.frame_index;
                     if (a.class_index != b.class_index) return a.class_index < b.class_index;
                     return a.source_index < b.source_index;
                   });
  std::ostringstream out;
  for (const auto& e : rows) {
    out << e.frame_index << ',' << e.class_index << ',' << e.source_index << ','
        << canonical_azimuth(e.doa.azimuth_deg()) << ','
        << std::lround(e.doa.elevation_deg());
    if (e.distance_cm) out << ',' << *e.distance_cm;
    out << '\n';
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw data_error(path.string() + ": cannot open for writing");
  os << out.str();
  if (!os) throw data_error(path.string() + ": write failed");
}

}  // namespace avseld
