#include "avseld/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "avseld/audio_features.hpp"
#include "avseld/augmentation.hpp"
#include "avseld/decision_fusion.hpp"
#include "avseld/digest.hpp"
#include "avseld/errors.hpp"
#include "avseld/feature_io.hpp"
#include "avseld/keypoint_io.hpp"
#include "avseld/metadata_csv.hpp"
#include "avseld/parallel.hpp"
#include "avseld/random.hpp"
#include "avseld/version.hpp"
#include "avseld/visual_features.hpp"
#include "avseld/wav_io.hpp"

namespace avseld {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Scene stream tag, distinct from the per-clip rendering seeds.
constexpr std::uint64_t kSceneStream = 0x7363656e65ull;

std::string zero_pad(int value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw data_error(path.string() + ": cannot open for writing");
  os << text;
  if (!os) throw data_error(path.string() + ": write failed");
}

json report_to_json(const MetricsReport& r) {
  return json{{"error_rate", r.error_rate}, {"f_score", r.f_score},
              {"le_deg", r.le_deg},         {"le_defined", r.le_defined},
              {"lr", r.lr},                 {"seld", r.seld}};
}

// Per-event DOA predictions re-estimated from the audio itself: one estimate
// per maximal contiguous frame run of each (class, source) pair. Runs whose
// intensity carries no direction are dropped.
std::vector<EventAnnotation> estimate_events(const AvClipPair& pair) {
  std::map<std::pair<int, int>, std::vector<int>> group_frames;
  for (const auto& e : pair.annotations) {
    group_frames[{e.class_index, e.source_index}].push_back(e.frame_index);
  }
  std::vector<EventAnnotation> preds;
  for (auto& [key, frames] : group_frames) {
    std::sort(frames.begin(), frames.end());
    frames.erase(std::unique(frames.begin(), frames.end()), frames.end());
    std::size_t i = 0;
    while (i < frames.size()) {
      std::size_t j = i;
      while (j + 1 < frames.size() && frames[j + 1] == frames[j] + 1) ++j;
      try {
        const SphericalDoa doa = estimate_doa_iv(pair.audio, frames[i], frames[j] + 1);
        for (std::size_t k = i; k <= j; ++k) {
          EventAnnotation p;
          p.frame_index = frames[k];
          p.class_index = key.first;
          p.source_index = key.second;
          p.doa = doa;
          preds.push_back(p);
        }
      } catch (const estimate_error&) {
        // silent run: no prediction
      }
      i = j + 1;
    }
  }
  return preds;
}

}  // namespace

std::vector<SourceTrajectory> random_disjoint_scene(std::uint64_t seed) {
  // 6 events x 1 s inside a 10 s clip, gaps in between, one source per event.
  static constexpr int kEventClasses[6] = {1, 0, 2, 4, 6, 10};
  std::mt19937_64 rng(seed);
  std::vector<SourceTrajectory> sources;
  for (int k = 0; k < 6; ++k) {
    SourceTrajectory src;
    src.signal = (k % 2 == 0) ? SignalKind::noise : SignalKind::tone;
    src.tone_hz = 300.0 + 130.0 * k;
    src.gain = 0.4;
    TrajectorySegment seg;
    seg.start_frame = 15 * k + 5;
    seg.end_frame = seg.start_frame + 10;
    seg.doa = SphericalDoa(uniform_int(rng, -170, 170), uniform_int(rng, -60, 60));
    seg.class_index = kEventClasses[k];
    src.segments.push_back(seg);
    sources.push_back(std::move(src));
  }
  return sources;
}

ManifestEntry write_clip_pair(const AvClipPair& pair, const fs::path& dir,
                              const std::string& split) {
  if (pair.clip_id.empty()) throw validation_error("clip id must be non-empty");
  write_foa_wav(pair.audio, dir / (pair.clip_id + ".wav"));
  write_metadata_csv(pair.annotations, dir / (pair.clip_id + ".csv"));
  KeypointDocument doc;
  doc.frame_count = static_cast<int>(pair.keypoints.size());
  doc.panorama = pair.panorama;
  doc.frames = pair.keypoints;
  write_keypoint_document(doc, dir / (pair.clip_id + ".keypoints.json"));
  ManifestEntry entry;
  entry.clip_id = pair.clip_id;
  entry.audio = pair.clip_id + ".wav";
  entry.metadata = pair.clip_id + ".csv";
  entry.keypoints = pair.clip_id + ".keypoints.json";
  entry.split = split;
  return entry;
}

AvClipPair load_clip_pair(const Manifest& manifest, const ManifestEntry& entry) {
  AvClipPair pair;
  pair.clip_id = entry.clip_id;
  pair.audio = read_foa_wav(manifest.resolve(entry.audio));
  pair.annotations = read_metadata_csv(manifest.resolve(entry.metadata));
  const KeypointDocument doc = read_keypoint_document(manifest.resolve(entry.keypoints));
  pair.panorama = doc.panorama;
  pair.keypoints = doc.frames;
  return pair;
}

PipelineResult run_pipeline(const PipelineConfig& cfg, const fs::path& out_dir,
                            int workers) {
  if (workers < 1) throw validation_error("worker count must be at least 1");
  const AcsSet acs = acs_set_from_config(cfg);

  fs::create_directories(out_dir);
  write_text(out_dir / "config.json", config_canonical_json(cfg) + "\n");

  // Stage 1: originals, either simulated here or taken from a manifest.
  Manifest originals;
  if (cfg.manifest) {
    originals = read_manifest(*cfg.manifest);
    if (originals.entries.empty()) {
      throw validation_error(cfg.manifest->string() + ": manifest lists no clips");
    }
  } else {
    const fs::path sim_dir = out_dir / "sim";
    fs::create_directories(sim_dir);
    std::vector<ManifestEntry> entries(static_cast<std::size_t>(cfg.clip_count));
    parallel_for(entries.size(), workers, [&](std::size_t i) {
      const auto scene = random_disjoint_scene(derive_seed(cfg.seed, kSceneStream + i));
      const AvClipPair pair = simulate_clip(scene, derive_seed(cfg.seed, i),
                                            "clip_" + zero_pad(static_cast<int>(i), 3));
      entries[i] = write_clip_pair(pair, sim_dir, "dev-train");
    });
    Manifest m;
    m.root = sim_dir;
    m.entries = std::move(entries);
    write_manifest(m, sim_dir / "manifest.json");
    originals = read_manifest(sim_dir / "manifest.json");
  }
  const std::size_t n_clips = originals.entries.size();

  // Stage 2: eightfold expansion, one coherent audio/keypoint/label pair per
  // transform.
  const fs::path aug_dir = out_dir / "aug";
  fs::create_directories(aug_dir);
  std::vector<std::vector<ManifestEntry>> aug_entries(n_clips);
  std::vector<PanoramaSpec> panoramas(n_clips);
  parallel_for(n_clips, workers, [&](std::size_t i) {
    const AvClipPair pair = load_clip_pair(originals, originals.entries[i]);
    panoramas[i] = pair.panorama;
    for (const AvClipPair& out : acs_vps_expand(pair, acs)) {
      aug_entries[i].push_back(write_clip_pair(out, aug_dir, originals.entries[i].split));
    }
  });
  Manifest aug_manifest;
  aug_manifest.root = aug_dir;
  for (auto& group : aug_entries) {
    for (auto& e : group) aug_manifest.entries.push_back(std::move(e));
  }
  write_manifest(aug_manifest, aug_dir / "manifest.json");

  if (cfg.emit_pixel_maps) {
    const fs::path map_dir = aug_dir / "pixelmaps";
    fs::create_directories(map_dir);
    std::set<std::pair<int, int>> seen;
    for (const auto& spec : panoramas) {
      if (!seen.insert({spec.width_px, spec.height_px}).second) continue;
      for (const SpatialTransform& t : acs.transforms) {
        const std::string name = std::to_string(spec.width_px) + "x" +
                                 std::to_string(spec.height_px) + "_" +
                                 transform_name(t) + ".avpm";
        write_pixel_map(build_pixel_map(t, spec), map_dir / name);
      }
    }
  }

  // Stage 3: fused audio-visual features for the originals.
  const fs::path feat_dir = out_dir / "features";
  fs::create_directories(feat_dir);
  parallel_for(n_clips, workers, [&](std::size_t i) {
    const AvClipPair pair = load_clip_pair(originals, originals.entries[i]);
    const AudioFeature audio = extract_audio_features(pair.audio);
    const VisualFeature visual =
        assemble_visual_features(pair.keypoints, pair.panorama, cfg.visual);
    const FusedFeature fused = upsample_and_fuse(visual, audio);
    FeatureTensor tensor;
    tensor.dims = {static_cast<std::uint32_t>(fused.frames),
                   static_cast<std::uint32_t>(fused.channels),
                   static_cast<std::uint32_t>(fused.bands)};
    tensor.values = fused.data;
    write_feature_tensor(tensor, feat_dir / (pair.clip_id + ".avsf"));
  });

  // Stage 4: reports, reduced in manifest order.
  const fs::path rep_dir = out_dir / "reports";
  fs::create_directories(rep_dir);
  PipelineResult result;
  result.out_dir = out_dir;
  result.config_digest_hex = config_digest(cfg);

  SeldCounters identity;
  for (const auto& e : aug_manifest.entries) {
    const auto refs = to_frame_events(read_metadata_csv(aug_manifest.resolve(e.metadata)));
    identity.accumulate(refs, refs);
  }
  result.identity_report = identity.report();
  write_text(rep_dir / "identity_score.json",
             report_to_json(result.identity_report).dump(2) + "\n");

  const ClassKeypointMap kp_map = default_class_keypoint_map();
  SeldCounters estimated;
  for (const auto& e : originals.entries) {
    const AvClipPair pair = load_clip_pair(originals, e);
    std::vector<EventAnnotation> preds = estimate_events(pair);
    preds = fuse_events(preds, pair.keypoints, kp_map, cfg.fusion, pair.panorama);
    estimated.accumulate(to_frame_events(preds), to_frame_events(pair.annotations));
  }
  result.estimated_report = estimated.report();
  write_text(rep_dir / "estimated_score.json",
             report_to_json(result.estimated_report).dump(2) + "\n");

  json provenance{{"config_digest", result.config_digest_hex},
                  {"seed", cfg.seed},
                  {"toolkit_version", kToolkitVersion}};
  write_text(rep_dir / "provenance.json", provenance.dump(2) + "\n");

  // Stage 5: digest table over everything the run wrote.
  for (auto it = fs::recursive_directory_iterator(out_dir);
       it != fs::recursive_directory_iterator(); ++it) {
    if (!it->is_regular_file()) continue;
    const std::string rel = fs::relative(it->path(), out_dir).generic_string();
    if (rel == "digests.json") continue;
    result.digests[rel] = file_digest_hex(it->path());
  }
  json digests(result.digests);
  write_text(out_dir / "digests.json", digests.dump(2) + "\n");
  return result;
}

}  // namespace avseld
