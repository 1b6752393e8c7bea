// Command-line surface: scene simulation, training, evaluation,
// checkpoint inspection, and the finite-difference self-check.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "srf/checkpoint.hpp"
#include "srf/cube_io.hpp"
#include "srf/errors.hpp"
#include "srf/gradcheck.hpp"
#include "srf/metrics.hpp"
#include "srf/scene.hpp"
#include "srf/self_regression.hpp"
#include "srf/tensor_ops.hpp"

namespace {

int cmd_simulate(int width, int height, int bands, int msi_bands, int scale,
                 int psf_size, double psf_sigma, std::uint64_t seed,
                 const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  srf::SyntheticScene scene = srf::generate_scene(
      width, height, bands, msi_bands, scale, psf_size, psf_sigma, seed);
  srf::write_cube(out_dir + "/X.hcube", scene.x);
  srf::write_cube(out_dir + "/Y.hcube", scene.y);
  srf::write_cube(out_dir + "/Z.hcube", scene.z);
  srf::write_model_json(out_dir + "/model.json",
                        {scene.psf, scene.srf, scene.scale});
  std::cout << "wrote X.hcube Y.hcube Z.hcube model.json to " << out_dir
            << "\n";
  return 0;
}

std::string loss_csv(const std::vector<srf::LossRow>& history) {
  std::string csv = "iteration,l_spa,l_spe,l_lc,total\n";
  char line[256];
  for (const srf::LossRow& row : history) {
    std::snprintf(line, sizeof(line), "%d,%.12g,%.12g,%.12g,%.12g\n",
                  row.iteration, row.l_spa, row.l_spe, row.l_lc, row.total);
    csv += line;
  }
  return csv;
}

template <typename T>
int run_training(const srf::SrfnConfig& cfg, const srf::Tensor& y,
                 const srf::Tensor& z, const std::string& out_dir) {
  const int hsi_bands = y.dim(0);
  const int msi_bands = z.dim(0);
  srf::SelfRegressionT<T> model(cfg, hsi_bands, msi_bands);
  srf::ParamStoreT<T> store;
  srf::TrainResultT<T> result = model.train(store, srf::tensor_cast<T>(y),
                                            srf::tensor_cast<T>(z));

  srf::write_cube(out_dir + "/xhat.hcube",
                  srf::tensor_cast<double>(result.xhat));
  srf::write_model_json(out_dir + "/learned_model.json",
                        {srf::tensor_cast<double>(result.bhat),
                         srf::tensor_cast<double>(result.rhat), cfg.scale});
  srf::save_checkpoint(out_dir + "/checkpoint.bin", cfg, hsi_bands, msi_bands,
                       result.iterations_run, store);
  srf::write_file_atomic(out_dir + "/loss.csv", loss_csv(result.history));

  const double initial =
      result.history.empty() ? 0.0 : result.history.front().total;
  std::printf("iterations=%d initial_loss=%.6g final_loss=%.6g\n",
              result.iterations_run, initial, result.final_loss);
  std::cout << "wrote xhat.hcube checkpoint.bin learned_model.json loss.csv to "
            << out_dir << "\n";
  return 0;
}

int cmd_train(const std::string& y_path, const std::string& z_path,
              const std::string& config_path, const std::string& out_dir) {
  srf::SrfnConfig cfg;
  if (!config_path.empty()) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(srf::read_file(config_path));
    } catch (const nlohmann::json::exception& e) {
      throw srf::ConfigError(std::string("malformed config JSON: ") + e.what());
    }
    cfg = srf::SrfnConfig::from_json(j);
  }
  srf::Tensor y = srf::read_cube(y_path);
  srf::Tensor z = srf::read_cube(z_path);
  std::filesystem::create_directories(out_dir);
  if (cfg.precision == "f32") {
    return run_training<float>(cfg, y, z, out_dir);
  }
  return run_training<double>(cfg, y, z, out_dir);
}

int cmd_eval(const std::string& pred_path, const std::string& gt_path,
             int scale, const std::string& out_path, int upsample_pred,
             double peak) {
  srf::Tensor pred = srf::read_cube(pred_path);
  srf::Tensor gt = srf::read_cube(gt_path);
  if (upsample_pred > 1) {
    srf::Tensor p4 = pred.reshaped({1, pred.dim(0), pred.dim(1), pred.dim(2)});
    srf::Tensor up = srf::upsample_bilinear(p4, upsample_pred);
    pred = up.reshaped({up.dim(1), up.dim(2), up.dim(3)});
  }
  srf::MetricsReport report = srf::evaluate(pred, gt, scale, peak);
  std::cout << report.to_kv();
  if (!out_path.empty()) {
    srf::write_file_atomic(out_path, report.to_json().dump(2) + "\n");
  }
  return 0;
}

int cmd_inspect(const std::string& checkpoint_path) {
  srf::CheckpointData data = srf::load_checkpoint(checkpoint_path);
  std::cout << "config: " << data.cfg.to_json().dump() << "\n";
  std::cout << "bands: " << data.hsi_bands << " cube / " << data.msi_bands
            << " observation\n";
  std::cout << "iteration: " << data.iteration << "\n";

  std::int64_t scalars = 0;
  for (const std::string& name : data.store.names())
    scalars += data.store.get(name)->value.numel();
  std::cout << "parameters: " << data.store.size() << " tensors, " << scalars
            << " scalars\n";

  srf::SelfRegression model(data.cfg, data.hsi_bands, data.msi_bands);
  const srf::Tensor kernel =
      model.observation().psf_forward(data.store)->value;
  const int k = kernel.dim(0);
  double cy = 0, cx = 0, entropy = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double p = kernel.at(i, j);
      cy += p * i;
      cx += p * j;
      if (p > 0) entropy -= p * std::log(p);
    }
  }
  std::printf("kernel %dx%d: center_of_mass=(%.4f, %.4f) entropy=%.4f nats\n",
              k, k, cy, cx, entropy);

  const srf::Tensor response =
      model.observation().srf_forward(data.store)->value;
  std::cout << "response rows:";
  for (int r = 0; r < response.dim(0); ++r) {
    double total = 0;
    for (int c = 0; c < response.dim(1); ++c) total += response.at(r, c);
    std::printf(" sum=%.9f", total);
  }
  std::cout << "\n";
  return 0;
}

int cmd_gradcheck(std::uint64_t seed, bool verbose) {
  srf::GradcheckOptions opts;
  opts.seed = seed;
  srf::GradcheckReport report = srf::run_full_gradcheck(opts);
  if (verbose) {
    for (const auto& [name, err] : report.per_param)
      std::printf("%-24s max_rel_err=%.3e\n", name.c_str(), err);
  }
  std::printf("checked %d parameters (%lld entries), worst %.3e in %s: %s\n",
              report.params_checked,
              static_cast<long long>(report.entries_checked),
              report.worst_rel_err, report.worst_param.c_str(),
              report.passed ? "pass" : "FAIL");
  return report.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"blind hyperspectral/multispectral fusion by self-regression"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a synthetic scene");
  int width = 32, height = 32, bands = 8, msi_bands = 3, scale = 4,
      psf_size = 8;
  double psf_sigma = 1.0;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  sim->add_option("--width", width);
  sim->add_option("--height", height);
  sim->add_option("--bands", bands);
  sim->add_option("--msi-bands", msi_bands);
  sim->add_option("--scale", scale);
  sim->add_option("--psf-size", psf_size);
  sim->add_option("--psf-sigma", psf_sigma);
  sim->add_option("--seed", seed);
  sim->add_option("--out", out_dir)->required();

  // train
  auto* tr = app.add_subcommand("train", "fit the model to one (Y, Z) pair");
  std::string y_path, z_path, config_path, train_out;
  tr->add_option("--y", y_path)->required();
  tr->add_option("--z", z_path)->required();
  tr->add_option("--config", config_path);
  tr->add_option("--out", train_out)->required();

  // eval
  auto* ev = app.add_subcommand("eval", "score a prediction against a truth cube");
  std::string pred_path, gt_path, report_path;
  int eval_scale = 4, upsample_pred = 1;
  double peak = 1.0;
  ev->add_option("--pred", pred_path)->required();
  ev->add_option("--gt", gt_path)->required();
  ev->add_option("--scale", eval_scale);
  ev->add_option("--out", report_path);
  ev->add_option("--upsample-pred", upsample_pred,
                 "bilinearly upsample the prediction by this factor first");
  ev->add_option("--peak", peak);

  // inspect
  auto* ins = app.add_subcommand("inspect", "summarize a checkpoint");
  std::string checkpoint_path;
  ins->add_option("--checkpoint", checkpoint_path)->required();

  // gradcheck
  auto* gc = app.add_subcommand("gradcheck",
                                "finite-difference check on a tiny scene");
  std::uint64_t gc_seed = 0;
  bool gc_verbose = false;
  gc->add_option("--seed", gc_seed);
  gc->add_flag("--verbose", gc_verbose);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      return cmd_simulate(width, height, bands, msi_bands, scale, psf_size,
                          psf_sigma, seed, out_dir);
    }
    if (tr->parsed()) {
      return cmd_train(y_path, z_path, config_path, train_out);
    }
    if (ev->parsed()) {
      return cmd_eval(pred_path, gt_path, eval_scale, report_path,
                      upsample_pred, peak);
    }
    if (ins->parsed()) {
      return cmd_inspect(checkpoint_path);
    }
    if (gc->parsed()) {
      return cmd_gradcheck(gc_seed, gc_verbose);
    }
  } catch (const srf::CubeIoError& e) {
    std::cerr << "error: io: " << e.what() << "\n";
    return 3;
  } catch (const srf::ShapeError& e) {
    std::cerr << "error: shape: " << e.what() << "\n";
    return 4;
  } catch (const srf::TrainError& e) {
    std::cerr << "error: train: " << e.what() << "\n";
    return 5;
  } catch (const srf::ConfigError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return 6;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
