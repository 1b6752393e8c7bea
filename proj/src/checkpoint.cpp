#include "srf/checkpoint.hpp"

#include <cstring>
#include <vector>

#include "srf/cube_io.hpp"
#include "srf/errors.hpp"

namespace srf {

namespace {

constexpr char kMagic[] = "SRFNCKP1";
constexpr std::size_t kMagicLen = 8;
constexpr std::uint32_t kVersion = 1;

template <typename V>
void put(std::string& buf, const V& v) {
  const std::size_t off = buf.size();
  buf.resize(off + sizeof(V));
  std::memcpy(buf.data() + off, &v, sizeof(V));
}

void put_str(std::string& buf, const std::string& s) {
  put(buf, static_cast<std::uint32_t>(s.size()));
  buf += s;
}

template <typename T>
void put_data(std::string& buf, const T* data, std::size_t count) {
  const std::size_t off = buf.size();
  buf.resize(off + count * sizeof(T));
  std::memcpy(buf.data() + off, data, count * sizeof(T));
}

struct Reader {
  const std::string& blob;
  std::size_t pos = 0;
  const std::string& path;

  void need(std::size_t n) const {
    if (blob.size() - pos < n) {
      throw CubeIoError(CubeIoCode::truncated_payload,
                        path + ": truncated checkpoint");
    }
  }
  template <typename V>
  V get() {
    need(sizeof(V));
    V v;
    std::memcpy(&v, blob.data() + pos, sizeof(V));
    pos += sizeof(V);
    return v;
  }
  std::string get_str() {
    const std::uint32_t n = get<std::uint32_t>();
    need(n);
    std::string s = blob.substr(pos, n);
    pos += n;
    return s;
  }
  std::vector<double> get_values(std::size_t count, std::size_t elem) {
    need(count * elem);
    std::vector<double> out(count);
    if (elem == 8) {
      std::memcpy(out.data(), blob.data() + pos, count * 8);
    } else {
      std::vector<float> f(count);
      std::memcpy(f.data(), blob.data() + pos, count * 4);
      for (std::size_t i = 0; i < count; ++i) out[i] = f[i];
    }
    pos += count * elem;
    return out;
  }
};

}  // namespace

template <typename T>
void save_checkpoint(const std::string& path, const SrfnConfig& cfg,
                     int hsi_bands, int msi_bands, std::int64_t iteration,
                     ParamStoreT<T>& store) {
  std::string buf(kMagic, kMagicLen);
  put(buf, kVersion);
  put(buf, static_cast<std::uint8_t>(sizeof(T)));
  put(buf, static_cast<std::uint32_t>(hsi_bands));
  put(buf, static_cast<std::uint32_t>(msi_bands));
  put(buf, iteration);
  put_str(buf, cfg.to_json().dump());

  const std::vector<std::string> names = store.names();
  put(buf, static_cast<std::uint64_t>(names.size()));
  for (const std::string& name : names) {
    const NodeRef<T> p = store.get(name);
    const AdamSlotT<T>& slot = store.adam_slot(name);
    put_str(buf, name);
    put(buf, static_cast<std::uint8_t>(p->value.rank()));
    for (int d = 0; d < p->value.rank(); ++d)
      put(buf, static_cast<std::int32_t>(p->value.dim(d)));
    put(buf, static_cast<std::int64_t>(slot.t));
    const std::size_t n = static_cast<std::size_t>(p->value.numel());
    put_data(buf, p->value.data(), n);
    put_data(buf, slot.m.data(), n);
    put_data(buf, slot.v.data(), n);
  }

  const std::vector<std::string> u_names = store.u_state_names();
  put(buf, static_cast<std::uint64_t>(u_names.size()));
  for (const std::string& name : u_names) {
    const std::vector<T>& u = store.u_state_get(name);
    put_str(buf, name);
    put(buf, static_cast<std::uint64_t>(u.size()));
    put_data(buf, u.data(), u.size());
  }

  write_file_atomic(path, buf);
}

CheckpointData load_checkpoint(const std::string& path) {
  const std::string blob = read_file(path);
  if (blob.size() < kMagicLen ||
      std::memcmp(blob.data(), kMagic, kMagicLen) != 0) {
    throw CubeIoError(CubeIoCode::bad_magic,
                      path + ": not a checkpoint file (magic mismatch)");
  }
  Reader r{blob, kMagicLen, path};
  const std::uint32_t version = r.get<std::uint32_t>();
  if (version != kVersion) {
    throw CubeIoError(CubeIoCode::bad_header,
                      path + ": unsupported checkpoint version " +
                          std::to_string(version));
  }
  const std::uint8_t elem = r.get<std::uint8_t>();
  if (elem != 4 && elem != 8) {
    throw CubeIoError(CubeIoCode::bad_header,
                      path + ": unsupported element size " +
                          std::to_string(elem));
  }

  CheckpointData data;
  data.hsi_bands = static_cast<int>(r.get<std::uint32_t>());
  data.msi_bands = static_cast<int>(r.get<std::uint32_t>());
  data.iteration = r.get<std::int64_t>();
  try {
    data.cfg = SrfnConfig::from_json(nlohmann::json::parse(r.get_str()));
  } catch (const nlohmann::json::exception& e) {
    throw CubeIoError(CubeIoCode::bad_header,
                      path + ": malformed config echo: " + e.what());
  }

  const std::uint64_t param_count = r.get<std::uint64_t>();
  for (std::uint64_t i = 0; i < param_count; ++i) {
    const std::string name = r.get_str();
    const std::uint8_t rank = r.get<std::uint8_t>();
    if (rank > 4) {
      throw CubeIoError(CubeIoCode::bad_header,
                        path + ": parameter " + name + " has rank " +
                            std::to_string(rank));
    }
    Shape shape;
    for (int d = 0; d < rank; ++d) shape.push_back(r.get<std::int32_t>());
    const std::int64_t t = r.get<std::int64_t>();
    const std::size_t n = static_cast<std::size_t>(shape_numel(shape));
    Tensor value(shape, r.get_values(n, elem));
    data.store.add(name, std::move(value));
    AdamSlot& slot = data.store.adam_slot(name);
    slot.t = t;
    slot.m = r.get_values(n, elem);
    slot.v = r.get_values(n, elem);
  }

  const std::uint64_t u_count = r.get<std::uint64_t>();
  for (std::uint64_t i = 0; i < u_count; ++i) {
    const std::string name = r.get_str();
    const std::uint64_t len = r.get<std::uint64_t>();
    std::vector<double>& u = data.store.u_state(name, static_cast<int>(len));
    u = r.get_values(len, elem);
  }
  return data;
}

template void save_checkpoint<float>(const std::string&, const SrfnConfig&,
                                     int, int, std::int64_t,
                                     ParamStoreT<float>&);
template void save_checkpoint<double>(const std::string&, const SrfnConfig&,
                                      int, int, std::int64_t,
                                      ParamStoreT<double>&);

}  // namespace srf
