// avseld: command-line front end for the audio-visual SELD toolkit.
//
// Exit codes: 0 success, 1 validation error (bad arguments, bad
// configuration, violated preconditions), 2 data error (malformed or
// missing files).

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "avseld/audio_features.hpp"
#include "avseld/augmentation.hpp"
#include "avseld/config.hpp"
#include "avseld/decision_fusion.hpp"
#include "avseld/errors.hpp"
#include "avseld/feature_io.hpp"
#include "avseld/keypoint_io.hpp"
#include "avseld/losses.hpp"
#include "avseld/manifest.hpp"
#include "avseld/metadata_csv.hpp"
#include "avseld/metrics.hpp"
#include "avseld/parallel.hpp"
#include "avseld/pipeline.hpp"
#include "avseld/random.hpp"
#include "avseld/simulator.hpp"
#include "avseld/spatial_transforms.hpp"
#include "avseld/version.hpp"
#include "avseld/visual_features.hpp"
#include "avseld/wav_io.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string zero_pad(int value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

json report_to_json(const avseld::MetricsReport& r) {
  return json{{"error_rate", r.error_rate}, {"f_score", r.f_score},
              {"le_deg", r.le_deg},         {"le_defined", r.le_defined},
              {"lr", r.lr},                 {"seld", r.seld}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw avseld::data_error(path.string() + ": cannot open for writing");
  os << text;
  if (!os) throw avseld::data_error(path.string() + ": write failed");
}

int cmd_transforms_list() {
  const avseld::AcsSet def = avseld::default_acs_set();
  std::printf("%-5s %-22s %-13s %-8s %-6s %s\n", "index", "name", "quarter_turns",
              "reflect", "flip", "in_default_set");
  for (const auto& t : avseld::all_transforms()) {
    bool in_default = false;
    for (const auto& d : def.transforms) in_default = in_default || d == t;
    std::printf("%-5d %-22s %-13d %-8s %-6s %s\n", t.index(),
                avseld::transform_name(t).c_str(), t.quarter_turns,
                t.reflect_azimuth ? "yes" : "no", t.flip_elevation ? "yes" : "no",
                in_default ? "yes" : "no");
  }
  return 0;
}

int cmd_simulate(int clips, std::uint64_t seed, const fs::path& out) {
  fs::create_directories(out);
  avseld::Manifest m;
  m.root = out;
  for (int i = 0; i < clips; ++i) {
    const auto scene =
        avseld::random_disjoint_scene(avseld::derive_seed(seed, 0x7363656e65ull + i));
    const avseld::AvClipPair pair = avseld::simulate_clip(
        scene, avseld::derive_seed(seed, static_cast<std::uint64_t>(i)),
        "clip_" + zero_pad(i, 3));
    m.entries.push_back(avseld::write_clip_pair(pair, out, "dev-train"));
  }
  avseld::write_manifest(m, out / "manifest.json");
  std::printf("wrote %d clips to %s\n", clips, out.string().c_str());
  return 0;
}

int cmd_augment(const fs::path& manifest_path, const std::vector<std::string>& set_names,
                bool emit_pixel_maps, const fs::path& out) {
  avseld::PipelineConfig cfg;
  cfg.acs_transform_names = set_names;
  const avseld::AcsSet set = avseld::acs_set_from_config(cfg);
  const avseld::Manifest in = avseld::read_manifest(manifest_path);
  fs::create_directories(out);
  avseld::Manifest aug;
  aug.root = out;
  std::vector<avseld::PanoramaSpec> panoramas;
  for (const auto& entry : in.entries) {
    const avseld::AvClipPair pair = avseld::load_clip_pair(in, entry);
    panoramas.push_back(pair.panorama);
    for (const auto& expanded : avseld::acs_vps_expand(pair, set)) {
      aug.entries.push_back(avseld::write_clip_pair(expanded, out, entry.split));
    }
  }
  avseld::write_manifest(aug, out / "manifest.json");
  if (emit_pixel_maps) {
    const fs::path map_dir = out / "pixelmaps";
    fs::create_directories(map_dir);
    std::vector<std::pair<int, int>> seen;
    for (const auto& spec : panoramas) {
      const std::pair<int, int> key{spec.width_px, spec.height_px};
      if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
      seen.push_back(key);
      for (const auto& t : set.transforms) {
        const std::string name = std::to_string(spec.width_px) + "x" +
                                 std::to_string(spec.height_px) + "_" +
                                 avseld::transform_name(t) + ".avpm";
        avseld::write_pixel_map(avseld::build_pixel_map(t, spec), map_dir / name);
      }
    }
  }
  std::printf("expanded %zu clips into %zu\n", in.entries.size(), aug.entries.size());
  return 0;
}

int cmd_features_extract(const fs::path& audio_path, const fs::path& keypoints_path,
                         double sigma_h, double sigma_v, const fs::path& out) {
  const avseld::FoaClip clip = avseld::read_foa_wav(audio_path);
  const avseld::AudioFeature audio = avseld::extract_audio_features(clip);
  avseld::FeatureTensor tensor;
  if (keypoints_path.empty()) {
    tensor.dims = {static_cast<std::uint32_t>(audio.frames),
                   static_cast<std::uint32_t>(audio.channels),
                   static_cast<std::uint32_t>(audio.bands)};
    tensor.values = audio.data;
  } else {
    const avseld::KeypointDocument doc = avseld::read_keypoint_document(keypoints_path);
    avseld::VisualEncodingConfig vcfg;
    vcfg.sigma_h_frac = sigma_h;
    vcfg.sigma_v_frac = sigma_v;
    const avseld::VisualFeature visual =
        avseld::assemble_visual_features(doc.frames, doc.panorama, vcfg);
    const avseld::FusedFeature fused = avseld::upsample_and_fuse(visual, audio);
    tensor.dims = {static_cast<std::uint32_t>(fused.frames),
                   static_cast<std::uint32_t>(fused.channels),
                   static_cast<std::uint32_t>(fused.bands)};
    tensor.values = fused.data;
  }
  avseld::write_feature_tensor(tensor, out);
  std::printf("wrote %zux%zux%zu tensor to %s\n", static_cast<std::size_t>(tensor.dims[0]),
              static_cast<std::size_t>(tensor.dims[1]),
              static_cast<std::size_t>(tensor.dims[2]), out.string().c_str());
  return 0;
}

int cmd_fuse(const fs::path& preds_path, const fs::path& keypoints_path, double sigma,
             double min_confidence, const fs::path& out) {
  const auto preds = avseld::read_metadata_csv(preds_path);
  const avseld::KeypointDocument doc = avseld::read_keypoint_document(keypoints_path);
  avseld::FusionConfig cfg;
  cfg.sigma_deg = sigma;
  cfg.min_confidence = min_confidence;
  const auto fused = avseld::fuse_events(preds, doc.frames, avseld::default_class_keypoint_map(),
                                         cfg, doc.panorama);
  avseld::write_metadata_csv(fused, out);
  std::printf("fused %zu events to %s\n", fused.size(), out.string().c_str());
  return 0;
}

int cmd_score(const fs::path& pred_path, const fs::path& ref_path, const fs::path& out) {
  const auto preds = avseld::to_frame_events(avseld::read_metadata_csv(pred_path));
  const auto refs = avseld::to_frame_events(avseld::read_metadata_csv(ref_path));
  const avseld::MetricsReport report = avseld::compute_seld_metrics(preds, refs);
  const std::string text = report_to_json(report).dump(2) + "\n";
  std::fputs(text.c_str(), stdout);
  if (!out.empty()) write_text(out, text);
  return 0;
}

int cmd_loss_check(std::uint64_t seed, int instances) {
  const auto results = avseld::run_gradient_checks(seed, instances);
  bool all_pass = true;
  for (const auto& r : results) {
    std::printf("%-24s max_rel_err %.3e  %s\n", r.name.c_str(), r.max_rel_err,
                r.pass ? "ok" : "FAIL");
    all_pass = all_pass && r.pass;
  }
  return all_pass ? 0 : 1;
}

int cmd_pipeline_run(const fs::path& config_path, const fs::path& out, int workers) {
  const avseld::PipelineConfig cfg = avseld::read_pipeline_config(config_path);
  const avseld::PipelineResult result = avseld::run_pipeline(cfg, out, workers);
  std::printf("pipeline done: %zu files, config digest %s\n", result.digests.size(),
              result.config_digest_hex.c_str());
  std::printf("identity seld %.6f, estimated seld %.6f\n", result.identity_report.seld,
              result.estimated_report.seld);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"audio-visual SELD data toolkit"};
  app.set_version_flag("--version", std::string(avseld::kToolkitVersion));
  app.require_subcommand(1);

  auto* transforms = app.add_subcommand("transforms", "spatial transform group info");
  transforms->require_subcommand(1);
  transforms->add_subcommand("list", "list all 16 transforms");

  std::uint64_t sim_seed = 1;
  int sim_clips = 4;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "render seeded point-source clips");
  simulate->add_option("--clips", sim_clips, "number of 10 s clips")
      ->check(CLI::Range(1, 10000));
  simulate->add_option("--seed", sim_seed, "base seed");
  simulate->add_option("--out", sim_out, "output directory")->required();

  std::string aug_manifest, aug_out;
  std::vector<std::string> aug_set;
  bool aug_maps = false;
  auto* augment = app.add_subcommand("augment", "eightfold channel-swap/pixel-swap expansion");
  augment->add_option("--manifest", aug_manifest, "input dataset manifest")->required();
  augment->add_option("--acs-set", aug_set,
                      "8 transform names overriding the default set");
  augment->add_flag("--emit-pixel-maps", aug_maps, "also write panorama pixel remap files");
  augment->add_option("--out", aug_out, "output directory")->required();

  auto* features = app.add_subcommand("features", "feature extraction");
  features->require_subcommand(1);
  auto* extract = features->add_subcommand("extract", "audio (and optionally fused) features");
  std::string feat_audio, feat_keypoints, feat_out;
  double feat_sigma_h = avseld::VisualEncodingConfig{}.sigma_h_frac;
  double feat_sigma_v = avseld::VisualEncodingConfig{}.sigma_v_frac;
  extract->add_option("--audio", feat_audio, "4-channel 24 kHz WAV")->required();
  extract->add_option("--keypoints", feat_keypoints,
                      "keypoint document; adds the visual channels");
  extract->add_option("--sigma-h-frac", feat_sigma_h, "horizontal gaussian width fraction");
  extract->add_option("--sigma-v-frac", feat_sigma_v, "vertical gaussian width fraction");
  extract->add_option("--out", feat_out, "output tensor file")->required();

  std::string fuse_preds, fuse_keypoints, fuse_out;
  double fuse_sigma = avseld::FusionConfig{}.sigma_deg;
  double fuse_min_conf = avseld::FusionConfig{}.min_confidence;
  auto* fuse = app.add_subcommand("fuse", "keypoint-guided DOA correction of predictions");
  fuse->add_option("--preds", fuse_preds, "predicted events CSV")->required();
  fuse->add_option("--keypoints", fuse_keypoints, "keypoint document")->required();
  fuse->add_option("--sigma", fuse_sigma, "replacement radius in degrees");
  fuse->add_option("--min-confidence", fuse_min_conf, "ignore keypoints below this");
  fuse->add_option("--out", fuse_out, "corrected events CSV")->required();

  std::string score_pred, score_ref, score_out;
  auto* score = app.add_subcommand("score", "location-dependent detection metrics");
  score->add_option("--pred", score_pred, "predicted events CSV")->required();
  score->add_option("--ref", score_ref, "reference events CSV")->required();
  score->add_option("--out", score_out, "also write the report here");

  auto* loss = app.add_subcommand("loss", "loss kernel utilities");
  loss->require_subcommand(1);
  auto* loss_check = loss->add_subcommand("check", "finite-difference gradient audit");
  std::uint64_t loss_seed = 1;
  int loss_instances = 100;
  loss_check->add_option("--seed", loss_seed, "base seed");
  loss_check->add_option("--instances", loss_instances, "instances per loss")
      ->check(CLI::Range(1, 100000));

  auto* pipeline = app.add_subcommand("pipeline", "end-to-end runs");
  pipeline->require_subcommand(1);
  auto* run = pipeline->add_subcommand("run", "simulate/ingest, augment, extract, score");
  std::string run_config, run_out;
  int run_workers = 0;
  run->add_option("--config", run_config, "pipeline config JSON")->required();
  run->add_option("--out", run_out, "output directory")->required();
  run->add_option("--workers", run_workers,
                  "worker threads (default: AVSELD_WORKERS or 1)")
      ->check(CLI::Range(1, 1024));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (transforms->parsed()) return cmd_transforms_list();
    if (simulate->parsed()) return cmd_simulate(sim_clips, sim_seed, sim_out);
    if (augment->parsed()) return cmd_augment(aug_manifest, aug_set, aug_maps, aug_out);
    if (extract->parsed()) {
      return cmd_features_extract(feat_audio, feat_keypoints, feat_sigma_h, feat_sigma_v,
                                  feat_out);
    }
    if (fuse->parsed()) {
      return cmd_fuse(fuse_preds, fuse_keypoints, fuse_sigma, fuse_min_conf, fuse_out);
    }
    if (score->parsed()) return cmd_score(score_pred, score_ref, score_out);
    if (loss_check->parsed()) return cmd_loss_check(loss_seed, loss_instances);
    if (run->parsed()) {
      const int workers = run_workers > 0 ? run_workers : avseld::worker_count_from_env();
      return cmd_pipeline_run(run_config, run_out, workers);
    }
  } catch (const avseld::validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const avseld::data_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const avseld::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
