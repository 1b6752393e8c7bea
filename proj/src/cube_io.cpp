#include "srf/cube_io.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include "json.hpp"
#include "srf/errors.hpp"

namespace srf {

namespace {

constexpr char kMagic[] = "HCUBE1\n";
constexpr std::size_t kMagicLen = 7;

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double round6(double v) { return std::stod(fmt6(v)); }

}  // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw CubeIoError(CubeIoCode::write_failed,
                        "cannot open " + tmp + " for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      throw CubeIoError(CubeIoCode::write_failed, "short write to " + tmp);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw CubeIoError(CubeIoCode::write_failed,
                      "cannot rename " + tmp + " to " + path + ": " +
                          ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw CubeIoError(CubeIoCode::open_failed, "cannot open " + path);
  }
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  return content;
}

void write_cube(const std::string& path, const Tensor& cube,
                const std::string& dtype) {
  if (cube.rank() != 3) {
    throw ShapeError("write_cube: expected [bands,height,width], got " +
                     shape_str(cube.shape()));
  }
  if (dtype != "f64" && dtype != "f32") {
    throw CubeIoError(CubeIoCode::unsupported_dtype,
                      "unsupported dtype \"" + dtype + "\"");
  }
  const int bands = cube.dim(0), height = cube.dim(1), width = cube.dim(2);
  const std::size_t elem = dtype == "f64" ? 8 : 4;
  const std::size_t payload_len = elem * static_cast<std::size_t>(cube.numel());

  nlohmann::json header{{"width", width},
                        {"height", height},
                        {"bands", bands},
                        {"dtype", dtype},
                        {"layout", "band-major row-major"},
                        {"byte_length", payload_len}};
  std::string blob(kMagic, kMagicLen);
  blob += header.dump();
  blob += '\n';

  const std::size_t offset = blob.size();
  blob.resize(offset + payload_len);
  if (dtype == "f64") {
    std::memcpy(blob.data() + offset, cube.data(), payload_len);
  } else {
    std::vector<float> f(cube.numel());
    for (std::int64_t i = 0; i < cube.numel(); ++i)
      f[i] = static_cast<float>(cube[i]);
    std::memcpy(blob.data() + offset, f.data(), payload_len);
  }
  write_file_atomic(path, blob);
}

Tensor read_cube(const std::string& path) {
  const std::string blob = read_file(path);
  if (blob.size() < kMagicLen ||
      std::memcmp(blob.data(), kMagic, kMagicLen) != 0) {
    throw CubeIoError(CubeIoCode::bad_magic,
                      path + ": not an HCUBE file (magic mismatch)");
  }
  const std::size_t header_end = blob.find('\n', kMagicLen);
  if (header_end == std::string::npos) {
    throw CubeIoError(CubeIoCode::bad_header,
                      path + ": unterminated header line");
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(
        blob.substr(kMagicLen, header_end - kMagicLen));
  } catch (const nlohmann::json::exception& e) {
    throw CubeIoError(CubeIoCode::bad_header,
                      path + ": malformed header: " + e.what());
  }

  int width = 0, height = 0, bands = 0;
  std::string dtype, layout;
  std::size_t byte_length = 0;
  try {
    width = header.at("width").get<int>();
    height = header.at("height").get<int>();
    bands = header.at("bands").get<int>();
    dtype = header.at("dtype").get<std::string>();
    layout = header.at("layout").get<std::string>();
    byte_length = header.at("byte_length").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw CubeIoError(CubeIoCode::bad_header,
                      path + ": missing header key: " + e.what());
  }
  if (width < 1 || height < 1 || bands < 1) {
    throw CubeIoError(CubeIoCode::bad_header,
                      path + ": non-positive cube extents in header");
  }
  if (layout != "band-major row-major") {
    throw CubeIoError(CubeIoCode::bad_header,
                      path + ": unsupported layout \"" + layout + "\"");
  }
  std::size_t elem = 0;
  if (dtype == "f64") {
    elem = 8;
  } else if (dtype == "f32") {
    elem = 4;
  } else {
    throw CubeIoError(CubeIoCode::unsupported_dtype,
                      path + ": unsupported dtype \"" + dtype + "\"");
  }

  const std::size_t count = static_cast<std::size_t>(width) * height * bands;
  if (byte_length != count * elem) {
    throw CubeIoError(CubeIoCode::length_mismatch,
                      path + ": header byte_length " +
                          std::to_string(byte_length) +
                          " does not match extents (" +
                          std::to_string(count * elem) + " expected)");
  }
  const std::size_t payload_off = header_end + 1;
  if (blob.size() - payload_off < byte_length) {
    throw CubeIoError(CubeIoCode::truncated_payload,
                      path + ": truncated payload (" +
                          std::to_string(blob.size() - payload_off) + " of " +
                          std::to_string(byte_length) + " bytes)");
  }

  Tensor cube({bands, height, width});
  if (dtype == "f64") {
    std::memcpy(cube.data(), blob.data() + payload_off, byte_length);
  } else {
    std::vector<float> f(count);
    std::memcpy(f.data(), blob.data() + payload_off, byte_length);
    for (std::size_t i = 0; i < count; ++i)
      cube[static_cast<std::int64_t>(i)] = static_cast<double>(f[i]);
  }
  return cube;
}

void write_model_json(const std::string& path, const ObservationModel& model) {
  if (model.psf.rank() != 2 || model.srf.rank() != 2) {
    throw ShapeError("write_model_json: kernel and response must be rank-2");
  }
  nlohmann::json j;
  j["scale"] = model.scale;
  j["psf_size"] = model.psf.dim(0);
  j["msi_bands"] = model.srf.dim(0);
  j["hsi_bands"] = model.srf.dim(1);
  nlohmann::json psf = nlohmann::json::array();
  for (std::int64_t i = 0; i < model.psf.numel(); ++i)
    psf.push_back(round6(model.psf[i]));
  nlohmann::json srf = nlohmann::json::array();
  for (std::int64_t i = 0; i < model.srf.numel(); ++i)
    srf.push_back(round6(model.srf[i]));
  j["psf"] = std::move(psf);
  j["srf"] = std::move(srf);
  write_file_atomic(path, j.dump(2) + "\n");
}

ObservationModel read_model_json(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw CubeIoError(CubeIoCode::bad_header,
                      path + ": malformed model file: " + e.what());
  }
  ObservationModel m;
  try {
    m.scale = j.at("scale").get<int>();
    const int k = j.at("psf_size").get<int>();
    const int c = j.at("msi_bands").get<int>();
    const int bands = j.at("hsi_bands").get<int>();
    const auto psf = j.at("psf").get<std::vector<double>>();
    const auto srf = j.at("srf").get<std::vector<double>>();
    m.psf = Tensor({k, k}, psf);
    m.srf = Tensor({c, bands}, srf);
  } catch (const nlohmann::json::exception& e) {
    throw CubeIoError(CubeIoCode::bad_header,
                      path + ": missing model key: " + e.what());
  }

  // absorb six-digit rounding: renormalize to exact simplexes
  double ksum = 0;
  for (std::int64_t i = 0; i < m.psf.numel(); ++i) ksum += m.psf[i];
  if (ksum > 0) {
    for (std::int64_t i = 0; i < m.psf.numel(); ++i) m.psf[i] /= ksum;
  }
  for (int r = 0; r < m.srf.dim(0); ++r) {
    double rsum = 0;
    for (int c2 = 0; c2 < m.srf.dim(1); ++c2) rsum += m.srf.at(r, c2);
    if (rsum > 0) {
      for (int c2 = 0; c2 < m.srf.dim(1); ++c2) m.srf.at(r, c2) /= rsum;
    }
  }
  return m;
}

}  // namespace srf
