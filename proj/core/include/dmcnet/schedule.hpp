#pragma once

#include <algorithm>
#include <limits>
#include <span>

#include "dmcnet/errors.hpp"

namespace dmcnet {

// Which training losses are enabled; the ablation switchboard.
struct LossFlags {
  bool use_cls = true;
  bool use_mse = true;
  bool use_adv = true;

  bool any() const { return use_cls || use_mse || use_adv; }
};

// Three-phase recipe: reconstruction warm-up with the classifier frozen,
// then joint classification + weighted reconstruction, then adversarial
// joint training with the full objective and alternating D/G updates.
struct TrainSchedule {
  int phase1_epochs = 1;
  int phase2_epochs = 49;
  int phase3_epochs = 20;
  double alpha = 10.0;   // reconstruction weight in the full objective
  double lambda = 1.0;   // adversarial weight in the full objective
  double base_lr = 0.01;
  double cls_body_lr_scale = 0.01;  // classifier layers except the head
  int batch_size = 16;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  int d_steps_per_g = 1;

  // learning-rate plateau rule: divide by 10 after `plateau_patience`
  // consecutive epochs without improving the phase's best epoch-mean loss
  // by more than `plateau_min_improve`; never below `lr_floor`.
  double plateau_min_improve = 1e-4;
  int plateau_patience = 3;
  double lr_floor = 1e-5;

  void validate() const {
    if (alpha < 0 || lambda < 0) throw DataError("schedule: alpha/lambda must be >= 0");
    if (phase1_epochs < 0 || phase2_epochs < 0 || phase3_epochs < 0)
      throw DataError("schedule: epoch counts must be >= 0");
    if (base_lr <= 0) throw DataError("schedule: base_lr must be > 0");
    if (batch_size < 1) throw DataError("schedule: batch_size must be >= 1");
    if (d_steps_per_g < 1) throw DataError("schedule: d_steps_per_g must be >= 1");
  }
};

// The learning rate to use for the epoch after the given history of
// epoch-mean losses within one phase. A pure function of the history, so
// learning-rate trajectories are reproducible from the loss log alone.
inline double lr_from_history(const TrainSchedule& s,
                              std::span<const double> epoch_losses) {
  double lr = s.base_lr;
  double best = std::numeric_limits<double>::infinity();
  int streak = 0;
  for (double loss : epoch_losses) {
    if (loss < best - s.plateau_min_improve) {
      best = loss;
      streak = 0;
    } else {
      ++streak;
      if (streak >= s.plateau_patience) {
        lr = std::max(lr / 10.0, s.lr_floor);
        streak = 0;
      }
    }
  }
  return lr;
}

}  // namespace dmcnet
