#include "avseld/manifest.hpp"

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

bool known_split(const std::string& s) { return s == "dev-train" || s == "dev-test"; }

std::string get_string(const json& obj, const char* key, const std::string& where,
                       const std::filesystem::path& path) {
  if (!obj.contains(key)) bad(path, where + ": missing key '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_string()) bad(path, where + "." + key + ": expected a string");
  return v.get<std::string>();
}

std::filesystem::path get_relative_path(const json& obj, const char* key,
                                        const std::string& where,
                                        const std::filesystem::path& path) {
  const std::string s = get_string(obj, key, where, path);
  if (s.empty()) bad(path, where + "." + key + ": empty path");
  std::filesystem::path p(s);
  if (p.is_absolute()) bad(path, where + "." + key + ": absolute paths are not allowed");
  return p;
}

}  // namespace

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error(path.string() + ": cannot open file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    bad(path, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) bad(path, "top level must be an object");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (it.key() != "version" && it.key() != "clips") {
      bad(path, "unknown key '" + it.key() + "'");
    }
  }
  if (!doc.contains("version") || !doc.at("version").is_number_integer() ||
      doc.at("version").get<long>() != 1) {
    bad(path, "missing or unsupported version (expected 1)");
  }
  if (!doc.contains("clips") || !doc.at("clips").is_array()) {
    bad(path, "missing 'clips' array");
  }

  Manifest m;
  m.root = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::set<std::string> seen_ids;
  const json& clips = doc.at("clips");
  for (std::size_t i = 0; i < clips.size(); ++i) {
    const std::string where = "clips[" + std::to_string(i) + "]";
    const json& jc = clips[i];
    if (!jc.is_object()) bad(path, where + ": expected an object");
    for (auto it = jc.begin(); it != jc.end(); ++it) {
      const std::string& k = it.key();
      if (k != "clip_id" && k != "audio" && k != "metadata" && k != "keypoints" &&
          k != "split") {
        bad(path, where + ": unknown key '" + k + "'");
      }
    }
    ManifestEntry e;
    e.clip_id = get_string(jc, "clip_id", where, path);
    if (e.clip_id.empty()) bad(path, where + ".clip_id: empty");
    if (!seen_ids.insert(e.clip_id).second) {
      bad(path, where + ": duplicate clip_id '" + e.clip_id + "'");
    }
    e.audio = get_relative_path(jc, "audio", where, path);
    e.metadata = get_relative_path(jc, "metadata", where, path);
    e.keypoints = get_relative_path(jc, "keypoints", where, path);
    e.split = get_string(jc, "split", where, path);
    if (!known_split(e.split)) bad(path, where + ".split: unknown split '" + e.split + "'");
    for (const auto* rel : {&e.audio, &e.metadata, &e.keypoints}) {
      const auto full = m.resolve(*rel);
      if (!std::filesystem::exists(full)) {
        bad(path, where + ": referenced file does not exist: " + full.string());
      }
    }
    m.entries.push_back(std::move(e));
  }
  return m;
}

void write_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  json clips = json::array();
  std::set<std::string> seen_ids;
  for (const auto& e : manifest.entries) {
    if (e.clip_id.empty() || !seen_ids.insert(e.clip_id).second) {
      throw validation_error("manifest clip ids must be non-empty and unique");
    }
    if (!known_split(e.split)) {
      throw validation_error("unknown split '" + e.split + "'");
    }
    clips.push_back({{"clip_id", e.clip_id},
                     {"audio", e.audio.generic_string()},
                     {"metadata", e.metadata.generic_string()},
                     {"keypoints", e.keypoints.generic_string()},
                     {"split", e.split}});
  }
  json doc;
  doc["version"] = 1;
  doc["clips"] = std::move(clips);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw data_error(path.string() + ": cannot open for writing");
  os << doc.dump(2) << '\n';
  if (!os) throw data_error(path.string() + ": write failed");
}

}  // namespace avseld
