#pragma once

// Versioned binary checkpoint: config echo, band counts, iteration
// counter, every named parameter with its Adam state, and the persistent
// power-iteration vectors. Contains no timestamps, so identical runs
// produce identical files.

#include <cstdint>
#include <string>

#include "srf/param_store.hpp"
#include "srf/srfn_config.hpp"

namespace srf {

template <typename T>
void save_checkpoint(const std::string& path, const SrfnConfig& cfg,
                     int hsi_bands, int msi_bands, std::int64_t iteration,
                     ParamStoreT<T>& store);

// Loaded parameters are widened to double regardless of the stored dtype.
struct CheckpointData {
  SrfnConfig cfg;
  int hsi_bands = 0;
  int msi_bands = 0;
  std::int64_t iteration = 0;
  ParamStore store;
};

CheckpointData load_checkpoint(const std::string& path);

extern template void save_checkpoint<float>(const std::string&,
                                            const SrfnConfig&, int, int,
                                            std::int64_t, ParamStoreT<float>&);
extern template void save_checkpoint<double>(const std::string&,
                                             const SrfnConfig&, int, int,
                                             std::int64_t,
                                             ParamStoreT<double>&);

}  // namespace srf
