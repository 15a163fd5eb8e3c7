#include "avseld/losses.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "avseld/errors.hpp"
#include "avseld/geometry.hpp"
#include "avseld/random.hpp"

namespace avseld {

namespace {

inline double clamp_prob(double p) {
  return std::clamp(p, kProbEpsilon, 1.0 - kProbEpsilon);
}

void check_shapes(int fa, int ka, int fb, int kb) {
  if (fa != fb || ka != kb || fa <= 0 || ka <= 0) {
    throw validation_error("loss operands must share a positive frames x classes shape");
  }
}

std::size_t flat(const SeldPredictions& p) {
  return static_cast<std::size_t>(p.frames) * p.classes;
}

}  // namespace

LossValueGrad sed_bce(const SeldPredictions& pred, const SeldTargets& target) {
  check_shapes(pred.frames, pred.classes, target.frames, target.classes);
  const std::size_t kn = flat(pred);
  LossValueGrad out;
  out.grad.assign(kn, 0.0);
  const double inv = 1.0 / static_cast<double>(kn);
  double acc = 0.0;
  for (std::size_t i = 0; i < kn; ++i) {
    const double y = target.activity[i];
    const double p = clamp_prob(pred.activity[i]);
    acc += y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
    out.grad[i] = -inv * (y / p - (1.0 - y) / (1.0 - p));
  }
  out.value = -inv * acc;
  return out;
}

LossValueGrad doa_masked_mse(const SeldPredictions& pred, const SeldTargets& target) {
  check_shapes(pred.frames, pred.classes, target.frames, target.classes);
  const std::size_t kn = flat(pred);
  LossValueGrad out;
  out.grad.assign(kn * 3, 0.0);
  const double inv = 1.0 / static_cast<double>(kn);
  double acc = 0.0;
  for (std::size_t i = 0; i < kn; ++i) {
    const double y = target.activity[i];
    for (int c = 0; c < 3; ++c) {
      const double d = (pred.doa[i * 3 + c] - target.doa[i * 3 + c]) * y;
      acc += d * d;
      // d/dx of (x - o)^2 y^2; for 0/1 masks this equals the y-scaled form.
      out.grad[i * 3 + c] = inv * 2.0 * (pred.doa[i * 3 + c] - target.doa[i * 3 + c]) * y * y;
    }
  }
  out.value = inv * acc;
  return out;
}

double seld_loss(const SeldPredictions& pred, const SeldTargets& target, const LossWeights& w) {
  return w.beta1 * sed_bce(pred, target).value + w.beta2 * doa_masked_mse(pred, target).value;
}

LossValueGrad tsl_sed_kl(const SeldPredictions& teacher, const SeldPredictions& student) {
  check_shapes(teacher.frames, teacher.classes, student.frames, student.classes);
  const std::size_t kn = flat(teacher);
  LossValueGrad out;
  out.grad.assign(kn, 0.0);
  const double inv = 1.0 / static_cast<double>(kn);
  double acc = 0.0;
  for (std::size_t i = 0; i < kn; ++i) {
    const double t = clamp_prob(teacher.activity[i]);
    const double s = clamp_prob(student.activity[i]);
    acc += t * std::log(t / s) + (1.0 - t) * std::log((1.0 - t) / (1.0 - s));
    out.grad[i] = inv * (-t / s + (1.0 - t) / (1.0 - s));
  }
  out.value = inv * acc;
  return out;
}

LossValueGrad tsl_doa(const SeldPredictions& teacher, const SeldPredictions& student) {
  check_shapes(teacher.frames, teacher.classes, student.frames, student.classes);
  const std::size_t kn = flat(teacher);
  LossValueGrad out;
  out.grad.assign(kn * 3, 0.0);
  const double inv = 1.0 / static_cast<double>(kn);
  double acc = 0.0;
  for (std::size_t i = 0; i < kn; ++i) {
    const double m = teacher.activity[i];  // soft mask, not clamped
    for (int c = 0; c < 3; ++c) {
      const double d = (student.doa[i * 3 + c] - teacher.doa[i * 3 + c]) * m;
      acc += d * d;
      out.grad[i * 3 + c] = inv * 2.0 * (student.doa[i * 3 + c] - teacher.doa[i * 3 + c]) * m * m;
    }
  }
  out.value = inv * acc;
  return out;
}

double total_tsl_loss(const SeldPredictions& student, const SeldTargets& target,
                      const SeldPredictions& teacher, const LossWeights& w) {
  const double distill =
      w.beta1 * tsl_sed_kl(teacher, student).value + w.beta2 * tsl_doa(teacher, student).value;
  return w.gamma1 * seld_loss(student, target, w) + w.gamma2 * distill;
}

SeldTargets targets_from_annotations(const std::vector<EventAnnotation>& events,
                                     int frame_count, int num_classes) {
  if (frame_count <= 0 || num_classes <= 0) {
    throw validation_error("targets need positive frame and class counts");
  }
  SeldTargets t;
  t.frames = frame_count;
  t.classes = num_classes;
  t.activity.assign(static_cast<std::size_t>(frame_count) * num_classes, 0.0);
  t.doa.assign(static_cast<std::size_t>(frame_count) * num_classes * 3, 0.0);
  for (const EventAnnotation& e : events) {
    if (e.frame_index < 0 || e.frame_index >= frame_count) {
      throw validation_error("annotation frame outside target range");
    }
    if (e.class_index < 0 || e.class_index >= num_classes) {
      throw validation_error("annotation class outside target range");
    }
    const CartesianDoa d = spherical_to_cartesian(e.doa);
    t.act(e.frame_index, e.class_index) = 1.0;
    t.doa_at(e.frame_index, e.class_index, 0) = d.x();
    t.doa_at(e.frame_index, e.class_index, 1) = d.y();
    t.doa_at(e.frame_index, e.class_index, 2) = d.z();
  }
  return t;
}

namespace {

SeldPredictions random_predictions(std::mt19937_64& rng, int frames, int classes) {
  SeldPredictions p;
  p.frames = frames;
  p.classes = classes;
  const std::size_t kn = static_cast<std::size_t>(frames) * classes;
  p.activity.resize(kn);
  p.doa.resize(kn * 3);
  // Keep probabilities clear of the clamp so the loss is smooth at the
  // evaluation point.
  for (double& v : p.activity) v = uniform_in(rng, 0.05, 0.95);
  for (double& v : p.doa) v = uniform_in(rng, -1.0, 1.0);
  return p;
}

SeldTargets random_targets(std::mt19937_64& rng, int frames, int classes) {
  SeldTargets t;
  t.frames = frames;
  t.classes = classes;
  const std::size_t kn = static_cast<std::size_t>(frames) * classes;
  t.activity.resize(kn);
  t.doa.resize(kn * 3);
  for (double& v : t.activity) v = (rng() & 1) ? 1.0 : 0.0;
  for (double& v : t.doa) v = uniform_in(rng, -1.0, 1.0);
  return t;
}

// Max |analytic - numeric| over coordinates, relative to the gradient scale.
double fd_compare(std::vector<double>& x, const std::vector<double>& analytic,
                  const std::function<double()>& eval) {
  constexpr double h = 1e-5;
  double scale = 1e-8;
  for (double g : analytic) scale = std::max(scale, std::abs(g));
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + h;
    const double up = eval();
    x[i] = saved - h;
    const double dn = eval();
    x[i] = saved;
    const double numeric = (up - dn) / (2.0 * h);
    worst = std::max(worst, std::abs(analytic[i] - numeric) / scale);
  }
  return worst;
}

}  // namespace

std::vector<GradCheckResult> run_gradient_checks(std::uint64_t seed, int instances,
                                                 double tolerance) {
  std::mt19937_64 rng(seed);
  std::vector<GradCheckResult> results = {
      {"sed_bce", 0.0, false},
      {"doa_masked_mse", 0.0, false},
      {"tsl_sed_kl", 0.0, false},
      {"tsl_doa", 0.0, false},
  };
  for (int it = 0; it < instances; ++it) {
    const int frames = uniform_int(rng, 2, 4);
    const int classes = uniform_int(rng, 2, 3);
    SeldPredictions pred = random_predictions(rng, frames, classes);
    SeldPredictions teacher = random_predictions(rng, frames, classes);
    const SeldTargets target = random_targets(rng, frames, classes);

    {
      const LossValueGrad g = sed_bce(pred, target);
      const double err = fd_compare(pred.activity, g.grad,
                                    [&] { return sed_bce(pred, target).value; });
      results[0].max_rel_err = std::max(results[0].max_rel_err, err);
    }
    {
      const LossValueGrad g = doa_masked_mse(pred, target);
      const double err = fd_compare(pred.doa, g.grad,
                                    [&] { return doa_masked_mse(pred, target).value; });
      results[1].max_rel_err = std::max(results[1].max_rel_err, err);
    }
    {
      const LossValueGrad g = tsl_sed_kl(teacher, pred);
      const double err = fd_compare(pred.activity, g.grad,
                                    [&] { return tsl_sed_kl(teacher, pred).value; });
      results[2].max_rel_err = std::max(results[2].max_rel_err, err);
    }
    {
      const LossValueGrad g = tsl_doa(teacher, pred);
      const double err = fd_compare(pred.doa, g.grad,
                                    [&] { return tsl_doa(teacher, pred).value; });
      results[3].max_rel_err = std::max(results[3].max_rel_err, err);
    }
  }
  for (GradCheckResult& r : results) r.pass = r.max_rel_err <= tolerance;
  return results;
}

}  // namespace avseld
