#pragma once

#include <cstdint>
#include <vector>

#include "avseld/annotations.hpp"
#include "avseld/geometry.hpp"

namespace avseld {

// Location-dependent detection metrics over 1-second segments. Within each
// (segment, class) cell, predictions and references are paired by the exact
// minimum-total-angular-distance assignment; a pair counts as a true positive
// when its distance is at most kDoaThresholdDeg. Over-threshold pairs count
// as one false positive and one false negative; unpaired events count on
// their own side.
inline constexpr int kSegmentFrames = 10;  // 100 ms frames per segment
inline constexpr double kDoaThresholdDeg = 20.0;
inline constexpr double kLeSentinelDeg = 180.0;

struct FrameEvent {
  int frame_index = 0;
  int class_index = 0;
  CartesianDoa doa;
};

struct MetricsReport {
  double error_rate = 0.0;       // (S + D + I) / N_ref
  double f_score = 0.0;          // 2TP / (2TP + FP + FN)
  double le_deg = 0.0;           // mean paired distance, threshold-free
  double lr = 0.0;               // paired count / reference count
  double seld = 0.0;             // combined score, see seld_score
  bool le_defined = false;       // false -> le_deg holds the 180 deg sentinel
};

// Accumulates counts across clips; segments never span clips.
class SeldCounters {
 public:
  void accumulate(const std::vector<FrameEvent>& preds, const std::vector<FrameEvent>& refs);
  MetricsReport report() const;

  std::int64_t tp() const { return tp_; }
  std::int64_t fp() const { return fp_; }
  std::int64_t fn() const { return fn_; }
  std::int64_t substitutions() const { return s_; }
  std::int64_t deletions() const { return d_; }
  std::int64_t insertions() const { return i_; }
  std::int64_t paired() const { return paired_; }
  std::int64_t reference_count() const { return n_ref_; }

 private:
  std::int64_t tp_ = 0, fp_ = 0, fn_ = 0;
  std::int64_t s_ = 0, d_ = 0, i_ = 0;
  std::int64_t paired_ = 0, n_ref_ = 0, n_pred_ = 0;
  double paired_dist_sum_ = 0.0;
};

MetricsReport compute_seld_metrics(const std::vector<FrameEvent>& preds,
                                   const std::vector<FrameEvent>& refs);

// (ER + (1 - F) + LE/180 + (1 - LR)) / 4, LE in degrees.
double seld_score(double error_rate, double f_score, double le_deg, double lr);

std::vector<FrameEvent> to_frame_events(const std::vector<EventAnnotation>& events);

}  // namespace avseld
