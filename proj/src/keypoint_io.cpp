#include "avseld/keypoint_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "avseld/errors.hpp"

namespace avseld {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::filesystem::path& path, const std::string& why) {
  throw data_error(path.string() + ": " + why);
}

void require_keys(const json& obj, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional,
                  const std::string& where, const std::filesystem::path& path) {
  for (const char* key : required) {
    if (!obj.contains(key)) bad(path, where + ": missing key '" + key + "'");
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string& k = it.key();
    const bool known =
        std::any_of(required.begin(), required.end(),
                    [&](const char* r) { return k == r; }) ||
        std::any_of(optional.begin(), optional.end(),
                    [&](const char* o) { return k == o; });
    if (!known) bad(path, where + ": unknown key '" + k + "'");
  }
}

long get_int(const json& obj, const char* key, const std::string& where,
             const std::filesystem::path& path) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) bad(path, where + "." + key + ": expected an integer");
  return v.get<long>();
}

double get_number(const json& obj, const char* key, const std::string& where,
                  const std::filesystem::path& path) {
  const json& v = obj.at(key);
  if (!v.is_number()) bad(path, where + "." + key + ": expected a number");
  return v.get<double>();
}

}  // namespace

KeypointDocument read_keypoint_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error(path.string() + ": cannot open file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    bad(path, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) bad(path, "top level must be an object");
  require_keys(doc, {"version", "frame_count", "panorama", "frames"}, {}, "document",
               path);
  const long version = get_int(doc, "version", "document", path);
  if (version != 1) bad(path, "unsupported version " + std::to_string(version));

  const json& pano = doc.at("panorama");
  if (!pano.is_object()) bad(path, "panorama: expected an object");
  require_keys(pano, {"width_px", "height_px"}, {}, "panorama", path);
  const long w = get_int(pano, "width_px", "panorama", path);
  const long h = get_int(pano, "height_px", "panorama", path);

  KeypointDocument out;
  try {
    out.panorama = PanoramaSpec(static_cast<int>(w), static_cast<int>(h));
  } catch (const validation_error& e) {
    bad(path, std::string("panorama: ") + e.what());
  }

  const long frame_count = get_int(doc, "frame_count", "document", path);
  if (frame_count <= 0) bad(path, "frame_count must be positive");
  out.frame_count = static_cast<int>(frame_count);

  const json& frames = doc.at("frames");
  if (!frames.is_array()) bad(path, "frames: expected an array");
  if (static_cast<long>(frames.size()) != frame_count) {
    bad(path, "frames: expected " + std::to_string(frame_count) + " entries, got " +
                  std::to_string(frames.size()));
  }
  out.frames.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const std::string where = "frames[" + std::to_string(i) + "]";
    const json& jf = frames[i];
    if (!jf.is_object()) bad(path, where + ": expected an object");
    require_keys(jf, {"time_index", "observations"}, {}, where, path);
    const long t = get_int(jf, "time_index", where, path);
    if (t != static_cast<long>(i)) {
      bad(path, where + ": time_index " + std::to_string(t) +
                    " breaks the dense timeline (expected " + std::to_string(i) + ")");
    }
    KeypointFrame kf;
    kf.time_index = static_cast<int>(t);
    const json& obs = jf.at("observations");
    if (!obs.is_array()) bad(path, where + ".observations: expected an array");
    for (std::size_t j = 0; j < obs.size(); ++j) {
      const std::string owhere = where + ".observations[" + std::to_string(j) + "]";
      const json& jo = obs[j];
      if (!jo.is_object()) bad(path, owhere + ": expected an object");
      require_keys(jo, {"person_id", "kind", "u", "v", "confidence"}, {}, owhere, path);
      KeypointObservation o;
      const long pid = get_int(jo, "person_id", owhere, path);
      if (pid < 0) bad(path, owhere + ".person_id: must be non-negative");
      o.person_id = static_cast<int>(pid);
      const json& kind = jo.at("kind");
      if (!kind.is_string()) bad(path, owhere + ".kind: expected a string");
      try {
        o.kind = parse_keypoint_kind(kind.get<std::string>());
      } catch (const data_error& e) {
        bad(path, owhere + ".kind: " + e.what());
      }
      const long u = get_int(jo, "u", owhere, path);
      const long v = get_int(jo, "v", owhere, path);
      if (u < 0 || u >= out.panorama.width_px) {
        bad(path, owhere + ".u: out of range for a " +
                      std::to_string(out.panorama.width_px) + "-pixel-wide panorama");
      }
      if (v < 0 || v >= out.panorama.height_px) {
        bad(path, owhere + ".v: out of range for a " +
                      std::to_string(out.panorama.height_px) + "-pixel-tall panorama");
      }
      o.position = PixelCoord{static_cast<int>(u), static_cast<int>(v)};
      const double conf = get_number(jo, "confidence", owhere, path);
      if (!(conf >= 0.0 && conf <= 1.0)) {
        bad(path, owhere + ".confidence: must lie in [0, 1]");
      }
      o.confidence = conf;
      kf.observations.push_back(o);
    }
    out.frames.push_back(std::move(kf));
  }
  return out;
}

void write_keypoint_document(const KeypointDocument& doc,
                             const std::filesystem::path& path) {
  if (doc.frame_count <= 0 ||
      doc.frames.size() != static_cast<std::size_t>(doc.frame_count)) {
    throw validation_error("keypoint document frame count mismatch");
  }
  json out;
  out["version"] = 1;
  out["frame_count"] = doc.frame_count;
  out["panorama"] = {{"width_px", doc.panorama.width_px},
                     {"height_px", doc.panorama.height_px}};
  json jframes = json::array();
  for (std::size_t i = 0; i < doc.frames.size(); ++i) {
    const KeypointFrame& kf = doc.frames[i];
    if (kf.time_index != static_cast<int>(i)) {
      throw validation_error("keypoint timeline is not dense at frame " +
                             std::to_string(i));
    }
    std::vector<KeypointObservation> obs = kf.observations;
    std::stable_sort(obs.begin(), obs.end(),
                     [](const KeypointObservation& a, const KeypointObservation& b) {
                       if (a.person_id != b.person_id) return a.person_id < b.person_id;
                       return static_cast<int>(a.kind) < static_cast<int>(b.kind);
                     });
    json jobs = json::array();
    for (const auto& o : obs) {
      jobs.push_back({{"person_id", o.person_id},
                      {"kind", std::string(keypoint_kind_name(o.kind))},
                      {"u", o.position.u},
                      {"v", o.position.v},
                      {"confidence", o.confidence}});
    }
    jframes.push_back({{"time_index", kf.time_index}, {"observations", std::move(jobs)}});
  }
  out["frames"] = std::move(jframes);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw data_error(path.string() + ": cannot open for writing");
  os << out.dump(2) << '\n';
  if (!os) throw data_error(path.string() + ": write failed");
}

}  // namespace avseld
