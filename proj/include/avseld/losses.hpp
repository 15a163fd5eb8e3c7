#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "avseld/annotations.hpp"

namespace avseld {

// Predicted probabilities are clamped into [kProbEpsilon, 1 - kProbEpsilon]
// before any log or division.
inline constexpr double kProbEpsilon = 1e-7;

// Frame-by-class activity plus per-class DOA vectors. Layout: activity is
// [frame][class] row-major, doa is [frame][class][xyz]. Ground-truth activity
// is 0/1; mixup produces fractional values with the same layout.
struct SeldTargets {
  int frames = 0;
  int classes = 0;
  std::vector<double> activity;
  std::vector<double> doa;

  double& act(int f, int k) { return activity[static_cast<std::size_t>(f) * classes + k]; }
  double act(int f, int k) const { return activity[static_cast<std::size_t>(f) * classes + k]; }
  double& doa_at(int f, int k, int c) {
    return doa[(static_cast<std::size_t>(f) * classes + k) * 3 + c];
  }
  double doa_at(int f, int k, int c) const {
    return doa[(static_cast<std::size_t>(f) * classes + k) * 3 + c];
  }
};

// Model output in the same layout; activity holds probabilities in [0, 1].
struct SeldPredictions {
  int frames = 0;
  int classes = 0;
  std::vector<double> activity;
  std::vector<double> doa;

  double& act(int f, int k) { return activity[static_cast<std::size_t>(f) * classes + k]; }
  double act(int f, int k) const { return activity[static_cast<std::size_t>(f) * classes + k]; }
  double& doa_at(int f, int k, int c) {
    return doa[(static_cast<std::size_t>(f) * classes + k) * 3 + c];
  }
  double doa_at(int f, int k, int c) const {
    return doa[(static_cast<std::size_t>(f) * classes + k) * 3 + c];
  }
};

struct LossWeights {
  double beta1 = 0.1;   // detection term weight
  double beta2 = 1.0;   // localization term weight
  double gamma1 = 1.0;  // ground-truth loss weight
  double gamma2 = 0.5;  // distillation loss weight
};

// Scalar loss plus the gradient with respect to the first argument. The
// gradient vector matches the layout of the differentiated field (activity
// for detection losses, doa for localization losses). All reductions run in
// a fixed order, so values are bit-reproducible.
struct LossValueGrad {
  double value = 0.0;
  std::vector<double> grad;
};

// Mean binary cross-entropy over frames and classes; gradient w.r.t. the
// predicted activity.
LossValueGrad sed_bce(const SeldPredictions& pred, const SeldTargets& target);

// Mean squared DOA error masked by target activity; gradient w.r.t. the
// predicted DOA.
LossValueGrad doa_masked_mse(const SeldPredictions& pred, const SeldTargets& target);

// beta1 * detection + beta2 * localization.
double seld_loss(const SeldPredictions& pred, const SeldTargets& target, const LossWeights& w);

// Mean Bernoulli KL from teacher to student activity; gradient w.r.t. the
// student. Zero iff the clamped probabilities agree everywhere.
LossValueGrad tsl_sed_kl(const SeldPredictions& teacher, const SeldPredictions& student);

// Mean squared student-teacher DOA difference masked by the teacher's
// activity probability; gradient w.r.t. the student DOA.
LossValueGrad tsl_doa(const SeldPredictions& teacher, const SeldPredictions& student);

// gamma1 * seld_loss(student, target) + gamma2 * (beta1 * kl + beta2 * doa).
double total_tsl_loss(const SeldPredictions& student, const SeldTargets& target,
                      const SeldPredictions& teacher, const LossWeights& w);

// Dense 0/1 targets from frame-wise event annotations. Later duplicates of a
// (frame, class) pair overwrite earlier ones.
SeldTargets targets_from_annotations(const std::vector<EventAnnotation>& events,
                                     int frame_count, int num_classes = kNumClasses);

// Central finite-difference audit of every analytic gradient.
struct GradCheckResult {
  std::string name;
  double max_rel_err = 0.0;
  bool pass = false;
};
std::vector<GradCheckResult> run_gradient_checks(std::uint64_t seed, int instances = 100,
                                                 double tolerance = 1e-4);

}  // namespace avseld
