#pragma once

// HCUBE file format: 7-byte magic "HCUBE1\n", one line of JSON header,
// then a little-endian band-major payload. Plus small JSON helpers for
// observation models and atomic file writing.

#include <cstdint>
#include <stdexcept>
#include <string>

#include "srf/tensor.hpp"

namespace srf {

enum class CubeIoCode {
  open_failed,
  bad_magic,
  bad_header,
  truncated_payload,
  length_mismatch,
  unsupported_dtype,
  write_failed,
};

class CubeIoError : public std::runtime_error {
 public:
  CubeIoError(CubeIoCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  CubeIoCode code() const { return code_; }

 private:
  CubeIoCode code_;
};

// Reads a cube as [bands, height, width], widening f32 payloads to double.
Tensor read_cube(const std::string& path);

// Writes a [bands, height, width] cube; dtype is "f64" or "f32".
// The write is atomic (temp file + rename).
void write_cube(const std::string& path, const Tensor& cube,
                const std::string& dtype = "f64");

// Whole-file helpers, also atomic.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// True observation model / learned model serialization. Values are
// rounded to six significant digits on write; the kernel and each
// response row are renormalized to sum 1 on read to absorb the rounding.
struct ObservationModel {
  Tensor psf;  // [k,k]
  Tensor srf;  // [c,C]
  int scale = 1;
};

void write_model_json(const std::string& path, const ObservationModel& model);
ObservationModel read_model_json(const std::string& path);

}  // namespace srf
