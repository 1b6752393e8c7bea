#include "srf/srfn_config.hpp"

#include <set>

#include "srf/errors.hpp"

namespace srf {

void SrfnConfig::validate() const {
  if (!(lambda_sn > 0.0) || lambda_sn > 1.0) {
    throw ConfigError("lambda_sn must be in (0, 1], got " +
                      std::to_string(lambda_sn));
  }
  if (beta < 0.0) throw ConfigError("beta must be >= 0");
  if (gamma < 0.0) throw ConfigError("gamma must be >= 0");
  if (!(lr > 0.0)) throw ConfigError("lr must be positive");
  if (iterations < 0) throw ConfigError("iterations must be >= 0");
  if (scale < 1) throw ConfigError("scale must be >= 1");
  if (n_blocks < 1) throw ConfigError("n_blocks must be >= 1");
  if (features < 1) throw ConfigError("features must be >= 1");
  if (kernel_size < 1) throw ConfigError("kernel_size must be >= 1");
  if (precision != "f32" && precision != "f64") {
    throw ConfigError("precision must be \"f32\" or \"f64\", got \"" +
                      precision + "\"");
  }
  if (sn_iters < 1) throw ConfigError("sn_iters must be >= 1");
  if (obs_fc_depth < 1) throw ConfigError("obs_fc_depth must be >= 1");
  if (lr_halving_interval < 0) {
    throw ConfigError("lr_halving_interval must be >= 0");
  }
}

nlohmann::json SrfnConfig::to_json() const {
  return nlohmann::json{{"lambda_sn", lambda_sn},
                        {"beta", beta},
                        {"gamma", gamma},
                        {"lr", lr},
                        {"iterations", iterations},
                        {"scale", scale},
                        {"n_blocks", n_blocks},
                        {"features", features},
                        {"kernel_size", kernel_size},
                        {"seed", seed},
                        {"precision", precision},
                        {"use_softmax", use_softmax},
                        {"use_sn", use_sn},
                        {"sn_iters", sn_iters},
                        {"sn_detach_sigma", sn_detach_sigma},
                        {"obs_fc_depth", obs_fc_depth},
                        {"per_stage_losses", per_stage_losses},
                        {"alternating_updates", alternating_updates},
                        {"lr_halving_interval", lr_halving_interval}};
}

SrfnConfig SrfnConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {
      "lambda_sn",      "beta",
      "gamma",          "lr",
      "iterations",     "scale",
      "n_blocks",       "features",
      "kernel_size",    "seed",
      "precision",      "use_softmax",
      "use_sn",         "sn_iters",
      "sn_detach_sigma", "obs_fc_depth",
      "per_stage_losses", "alternating_updates",
      "lr_halving_interval", "preset"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) {
      throw ConfigError("unknown config key: \"" + it.key() + "\"");
    }
  }

  SrfnConfig c;
  if (j.contains("preset")) c = preset(j.at("preset").get<std::string>());
  try {
    if (j.contains("lambda_sn")) c.lambda_sn = j.at("lambda_sn").get<double>();
    if (j.contains("beta")) c.beta = j.at("beta").get<double>();
    if (j.contains("gamma")) c.gamma = j.at("gamma").get<double>();
    if (j.contains("lr")) c.lr = j.at("lr").get<double>();
    if (j.contains("iterations")) c.iterations = j.at("iterations").get<int>();
    if (j.contains("scale")) c.scale = j.at("scale").get<int>();
    if (j.contains("n_blocks")) c.n_blocks = j.at("n_blocks").get<int>();
    if (j.contains("features")) c.features = j.at("features").get<int>();
    if (j.contains("kernel_size"))
      c.kernel_size = j.at("kernel_size").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("precision")) c.precision = j.at("precision").get<std::string>();
    if (j.contains("use_softmax")) c.use_softmax = j.at("use_softmax").get<bool>();
    if (j.contains("use_sn")) c.use_sn = j.at("use_sn").get<bool>();
    if (j.contains("sn_iters")) c.sn_iters = j.at("sn_iters").get<int>();
    if (j.contains("sn_detach_sigma"))
      c.sn_detach_sigma = j.at("sn_detach_sigma").get<bool>();
    if (j.contains("obs_fc_depth"))
      c.obs_fc_depth = j.at("obs_fc_depth").get<int>();
    if (j.contains("per_stage_losses"))
      c.per_stage_losses = j.at("per_stage_losses").get<bool>();
    if (j.contains("alternating_updates"))
      c.alternating_updates = j.at("alternating_updates").get<bool>();
    if (j.contains("lr_halving_interval"))
      c.lr_halving_interval = j.at("lr_halving_interval").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config value: ") + e.what());
  }
  c.validate();
  return c;
}

SrfnConfig SrfnConfig::preset(const std::string& name) {
  SrfnConfig c;
  if (name == "snla") return c;
  if (name == "baseline") {
    c.use_softmax = false;
    c.use_sn = false;
    c.beta = 0.0;
    c.gamma = 0.0;
    return c;
  }
  if (name == "s") {
    c.use_sn = false;
    c.beta = 0.0;
    c.gamma = 0.0;
    return c;
  }
  if (name == "sn") {
    c.beta = 0.0;
    c.gamma = 0.0;
    return c;
  }
  if (name == "snl") {
    c.beta = 0.0;
    return c;
  }
  throw ConfigError("unknown preset: \"" + name +
                    "\" (expected baseline|s|sn|snl|snla)");
}

}  // namespace srf
