#pragma once

#include <filesystem>
#include <vector>

#include "avseld/annotations.hpp"

namespace avseld {

// Event annotation table, one row per (frame, class, source):
//   frame,class,source,azimuth,elevation[,distance]
// All fields are integers. Azimuth is accepted in [-180, 180] and stored
// wrapped to (-180, 180]; elevation must lie in [-90, 90]. The optional
// distance column is centimetres and must be consistent across the file
// (either every row has it or none does).
std::vector<EventAnnotation> read_metadata_csv(const std::filesystem::path& path);

// Writes rows sorted by (frame, class, source). DOA angles are rounded to
// the nearest integer degree and azimuth is canonicalized so that the
// half-turn is written as 180, never -180.
void write_metadata_csv(const std::vector<EventAnnotation>& events,
                        const std::filesystem::path& path);

}  // namespace avseld
