#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

namespace srf {

// Training configuration. Defaults target full-size runs; presets and the
// desk-scale tests override where noted.
struct SrfnConfig {
  double lambda_sn = 0.6;  // spectral-norm coefficient, in (0,1]
  double beta = 0.01;      // spectral-angle loss weight
  double gamma = 30.0;     // local-consistency loss weight
  double lr = 2e-4;
  int iterations = 2000;
  int scale = 4;          // spatial downsampling ratio s
  int n_blocks = 3;       // resblocks per stage network
  int features = 64;      // feature channels F
  int kernel_size = 14;   // learned blur kernel extent
  std::uint64_t seed = 0;
  std::string precision = "f64";  // "f32" | "f64"

  // Behaviour switches (ablations and recorded alternatives).
  bool use_softmax = true;        // simplex constraint on learned B/R
  bool use_sn = true;             // spectral normalization on resblock convs
  int sn_iters = 1;               // power iterations per forward
  bool sn_detach_sigma = false;   // treat the 1/sigma scale as constant
  int obs_fc_depth = 1;           // FC layers in the observation nets
  bool per_stage_losses = false;  // auxiliary losses on stages 1 and 2
  bool alternating_updates = false;  // alternate fusion/observation steps
  int lr_halving_interval = 0;       // halve lr every N iterations (0 = off)

  void validate() const;

  nlohmann::json to_json() const;
  static SrfnConfig from_json(const nlohmann::json& j);

  // Named ablation rungs: "baseline", "s", "sn", "snl", "snla" (= default).
  static SrfnConfig preset(const std::string& name);
};

}  // namespace srf
