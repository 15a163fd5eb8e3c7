#include "avseld/metrics.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "avseld/errors.hpp"

namespace avseld {

namespace {

// Hungarian algorithm with potentials; all rows are matched. Requires
// rows <= cols. Returns the matched column per row.
std::vector<int> solve_assignment(int rows, int cols, const std::vector<double>& cost) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
  std::vector<int> match(cols + 1, 0), way(cols + 1, 0);
  for (int i = 1; i <= rows; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(cols + 1, kInf);
    std::vector<char> used(cols + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * static_cast<std::size_t>(cols) + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(rows, -1);
  for (int j = 1; j <= cols; ++j) {
    if (match[j] > 0) row_to_col[match[j] - 1] = j - 1;
  }
  return row_to_col;
}

void check_events(const std::vector<FrameEvent>& events, const char* side) {
  for (const FrameEvent& e : events) {
    if (e.frame_index < 0) {
      throw validation_error(std::string(side) + " event has a negative frame index");
    }
    if (e.class_index < 0 || e.class_index >= kNumClasses) {
      throw validation_error(std::string(side) + " event class out of range");
    }
  }
}

}  // namespace

void SeldCounters::accumulate(const std::vector<FrameEvent>& preds,
                              const std::vector<FrameEvent>& refs) {
  check_events(preds, "predicted");
  check_events(refs, "reference");
  n_pred_ += static_cast<std::int64_t>(preds.size());

  // Bucket events by (segment, class); the map keeps segment iteration
  // ordered, which fixes the summation order.
  std::map<std::pair<int, int>, std::pair<std::vector<const FrameEvent*>,
                                          std::vector<const FrameEvent*>>>
      cells;
  for (const FrameEvent& e : preds) {
    cells[{e.frame_index / kSegmentFrames, e.class_index}].first.push_back(&e);
  }
  for (const FrameEvent& e : refs) {
    cells[{e.frame_index / kSegmentFrames, e.class_index}].second.push_back(&e);
  }

  std::map<int, std::pair<std::int64_t, std::int64_t>> segment_fp_fn;
  for (const auto& [key, cell] : cells) {
    const std::vector<const FrameEvent*>& p = cell.first;
    const std::vector<const FrameEvent*>& r = cell.second;
    n_ref_ += static_cast<std::int64_t>(r.size());
    auto& [seg_fp, seg_fn] = segment_fp_fn[key.first];

    const int np = static_cast<int>(p.size());
    const int nr = static_cast<int>(r.size());
    const int k = std::min(np, nr);
    if (k > 0) {
      // Cost matrix with the smaller side as rows so every row is paired.
      const bool preds_small = np <= nr;
      const int rows = preds_small ? np : nr;
      const int cols = preds_small ? nr : np;
      std::vector<double> cost(static_cast<std::size_t>(rows) * cols);
      for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
          const FrameEvent* a = preds_small ? p[i] : r[i];
          const FrameEvent* b = preds_small ? r[j] : p[j];
          cost[static_cast<std::size_t>(i) * cols + j] = angular_distance_deg(a->doa, b->doa);
        }
      }
      const std::vector<int> assign = solve_assignment(rows, cols, cost);
      for (int i = 0; i < rows; ++i) {
        const double dist = cost[static_cast<std::size_t>(i) * cols + assign[i]];
        paired_ += 1;
        paired_dist_sum_ += dist;
        if (dist <= kDoaThresholdDeg) {
          tp_ += 1;
        } else {
          fp_ += 1;
          fn_ += 1;
          seg_fp += 1;
          seg_fn += 1;
        }
      }
    }
    fp_ += np - k;
    seg_fp += np - k;
    fn_ += nr - k;
    seg_fn += nr - k;
  }

  for (const auto& [seg, fpfn] : segment_fp_fn) {
    (void)seg;
    s_ += std::min(fpfn.first, fpfn.second);
    d_ += std::max<std::int64_t>(0, fpfn.second - fpfn.first);
    i_ += std::max<std::int64_t>(0, fpfn.first - fpfn.second);
  }
}

MetricsReport SeldCounters::report() const {
  MetricsReport rep;
  rep.error_rate = static_cast<double>(s_ + d_ + i_) / static_cast<double>(std::max<std::int64_t>(1, n_ref_));
  const std::int64_t f_denom = 2 * tp_ + fp_ + fn_;
  rep.f_score = f_denom > 0 ? 2.0 * static_cast<double>(tp_) / static_cast<double>(f_denom) : 1.0;
  rep.le_defined = paired_ > 0;
  rep.le_deg = rep.le_defined ? paired_dist_sum_ / static_cast<double>(paired_) : kLeSentinelDeg;
  if (n_ref_ > 0) {
    rep.lr = static_cast<double>(paired_) / static_cast<double>(n_ref_);
  } else {
    rep.lr = n_pred_ == 0 ? 1.0 : 0.0;
  }
  rep.seld = seld_score(rep.error_rate, rep.f_score, rep.le_deg, rep.lr);
  return rep;
}

MetricsReport compute_seld_metrics(const std::vector<FrameEvent>& preds,
                                   const std::vector<FrameEvent>& refs) {
  SeldCounters counters;
  counters.accumulate(preds, refs);
  return counters.report();
}

double seld_score(double error_rate, double f_score, double le_deg, double lr) {
  return (error_rate + (1.0 - f_score) + le_deg / 180.0 + (1.0 - lr)) / 4.0;
}

std::vector<FrameEvent> to_frame_events(const std::vector<EventAnnotation>& events) {
  std::vector<FrameEvent> out;
  out.reserve(events.size());
  for (const EventAnnotation& e : events) {
    out.push_back(FrameEvent{e.frame_index, e.class_index, spherical_to_cartesian(e.doa)});
  }
  return out;
}

}  // namespace avseld
