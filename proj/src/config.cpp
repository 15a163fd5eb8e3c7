#include "avseld/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "avseld/digest.hpp"
#include "avseld/errors.hpp"

namespace avseld {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::filesystem::path& path, const std::string& why) {
  throw validation_error(path.string() + ": " + why);
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& where, const std::filesystem::path& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known) {
      if (it.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) bad(path, where + ": unknown key '" + it.key() + "'");
  }
}

double number_at(const json& obj, const char* key, double fallback,
                 const std::string& where, const std::filesystem::path& path) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) bad(path, where + "." + key + ": expected a number");
  return v.get<double>();
}

}  // namespace

PipelineConfig read_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error(path.string() + ": cannot open file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw data_error(path.string() + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object()) bad(path, "top level must be an object");
  reject_unknown(doc,
                 {"version", "seed", "clip_count", "manifest", "acs_set",
                  "emit_pixel_maps", "visual", "fusion", "loss_weights"},
                 "config", path);
  if (!doc.contains("version") || !doc.at("version").is_number_integer() ||
      doc.at("version").get<long>() != 1) {
    bad(path, "missing or unsupported version (expected 1)");
  }

  PipelineConfig cfg;
  if (doc.contains("seed")) {
    const json& v = doc.at("seed");
    if (!v.is_number_unsigned() && !v.is_number_integer()) {
      bad(path, "config.seed: expected a non-negative integer");
    }
    if (v.is_number_integer() && v.get<long long>() < 0) {
      bad(path, "config.seed: expected a non-negative integer");
    }
    cfg.seed = v.get<std::uint64_t>();
  }
  if (doc.contains("clip_count")) {
    const json& v = doc.at("clip_count");
    if (!v.is_number_integer()) bad(path, "config.clip_count: expected an integer");
    const long n = v.get<long>();
    if (n < 1 || n > 10000) bad(path, "config.clip_count: must lie in [1, 10000]");
    cfg.clip_count = static_cast<int>(n);
  }
  if (doc.contains("manifest")) {
    const json& v = doc.at("manifest");
    if (!v.is_string() || v.get<std::string>().empty()) {
      bad(path, "config.manifest: expected a non-empty path string");
    }
    std::filesystem::path rel(v.get<std::string>());
    cfg.manifest = rel.is_absolute()
                       ? rel
                       : (path.has_parent_path() ? path.parent_path() / rel : rel);
  }
  if (doc.contains("acs_set")) {
    const json& v = doc.at("acs_set");
    if (v.is_string()) {
      if (v.get<std::string>() != "default") {
        bad(path, "config.acs_set: unknown named set '" + v.get<std::string>() + "'");
      }
    } else if (v.is_array()) {
      for (const json& name : v) {
        if (!name.is_string()) bad(path, "config.acs_set: expected transform names");
        cfg.acs_transform_names.push_back(name.get<std::string>());
      }
    } else {
      bad(path, "config.acs_set: expected \"default\" or an array of transform names");
    }
  }
  if (doc.contains("emit_pixel_maps")) {
    const json& v = doc.at("emit_pixel_maps");
    if (!v.is_boolean()) bad(path, "config.emit_pixel_maps: expected a boolean");
    cfg.emit_pixel_maps = v.get<bool>();
  }
  if (doc.contains("visual")) {
    const json& v = doc.at("visual");
    if (!v.is_object()) bad(path, "config.visual: expected an object");
    reject_unknown(v, {"sigma_h_frac", "sigma_v_frac"}, "config.visual", path);
    cfg.visual.sigma_h_frac =
        number_at(v, "sigma_h_frac", cfg.visual.sigma_h_frac, "config.visual", path);
    cfg.visual.sigma_v_frac =
        number_at(v, "sigma_v_frac", cfg.visual.sigma_v_frac, "config.visual", path);
  }
  if (doc.contains("fusion")) {
    const json& v = doc.at("fusion");
    if (!v.is_object()) bad(path, "config.fusion: expected an object");
    reject_unknown(v, {"sigma_deg", "min_confidence"}, "config.fusion", path);
    cfg.fusion.sigma_deg =
        number_at(v, "sigma_deg", cfg.fusion.sigma_deg, "config.fusion", path);
    cfg.fusion.min_confidence =
        number_at(v, "min_confidence", cfg.fusion.min_confidence, "config.fusion", path);
  }
  if (doc.contains("loss_weights")) {
    const json& v = doc.at("loss_weights");
    if (!v.is_object()) bad(path, "config.loss_weights: expected an object");
    reject_unknown(v, {"beta1", "beta2", "gamma1", "gamma2"}, "config.loss_weights", path);
    cfg.loss_weights.beta1 =
        number_at(v, "beta1", cfg.loss_weights.beta1, "config.loss_weights", path);
    cfg.loss_weights.beta2 =
        number_at(v, "beta2", cfg.loss_weights.beta2, "config.loss_weights", path);
    cfg.loss_weights.gamma1 =
        number_at(v, "gamma1", cfg.loss_weights.gamma1, "config.loss_weights", path);
    cfg.loss_weights.gamma2 =
        number_at(v, "gamma2", cfg.loss_weights.gamma2, "config.loss_weights", path);
  }

  // Fail fast on values the stages would reject later anyway.
  acs_set_from_config(cfg);
  if (!(cfg.visual.sigma_h_frac * kAxisBins >= 0.5) ||
      !(cfg.visual.sigma_v_frac * kAxisBins >= 0.5)) {
    bad(path, "config.visual: gaussian sigma below half a bin");
  }
  if (!(cfg.fusion.sigma_deg > 0.0 && cfg.fusion.sigma_deg <= 180.0)) {
    bad(path, "config.fusion.sigma_deg: must lie in (0, 180]");
  }
  if (!(cfg.fusion.min_confidence >= 0.0 && cfg.fusion.min_confidence <= 1.0)) {
    bad(path, "config.fusion.min_confidence: must lie in [0, 1]");
  }
  return cfg;
}

std::string config_canonical_json(const PipelineConfig& cfg) {
  json doc;
  doc["version"] = 1;
  doc["seed"] = cfg.seed;
  doc["clip_count"] = cfg.clip_count;
  if (cfg.manifest) doc["manifest"] = cfg.manifest->generic_string();
  const AcsSet set = acs_set_from_config(cfg);
  json names = json::array();
  for (const auto& t : set.transforms) names.push_back(transform_name(t));
  doc["acs_set"] = std::move(names);
  doc["emit_pixel_maps"] = cfg.emit_pixel_maps;
  doc["visual"] = {{"sigma_h_frac", cfg.visual.sigma_h_frac},
                   {"sigma_v_frac", cfg.visual.sigma_v_frac}};
  doc["fusion"] = {{"sigma_deg", cfg.fusion.sigma_deg},
                   {"min_confidence", cfg.fusion.min_confidence}};
  doc["loss_weights"] = {{"beta1", cfg.loss_weights.beta1},
                         {"beta2", cfg.loss_weights.beta2},
                         {"gamma1", cfg.loss_weights.gamma1},
                         {"gamma2", cfg.loss_weights.gamma2}};
  return doc.dump();
}

std::string config_digest(const PipelineConfig& cfg) {
  return digest_hex(fnv1a(config_canonical_json(cfg)));
}

AcsSet acs_set_from_config(const PipelineConfig& cfg) {
  if (cfg.acs_transform_names.empty()) return default_acs_set();
  AcsSet set;
  set.name = "configured";
  for (const std::string& name : cfg.acs_transform_names) {
    bool found = false;
    for (const SpatialTransform& t : all_transforms()) {
      if (transform_name(t) == name) {
        set.transforms.push_back(t);
        found = true;
        break;
      }
    }
    if (!found) throw validation_error("unknown transform name '" + name + "'");
  }
  validate_acs_set(set);
  return set;
}

}  // namespace avseld
