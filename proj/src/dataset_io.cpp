#include "shrinklearn/dataset_io.hpp"

#include <cstring>
#include <fstream>

#include "shrinklearn/errors.hpp"
#include "shrinklearn/rng.hpp"

namespace shrinklearn {

namespace {

constexpr char kMagic[4] = {'S', 'L', 'R', 'N'};

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(buf), 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(buf), 8);
}

void put_double(std::ostream& os, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  put_u64(os, bits);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char buf[4];
  is.read(reinterpret_cast<char*>(buf), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char buf[8];
  is.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

double get_double(std::istream& is) {
  const std::uint64_t bits = get_u64(is);
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

}  // namespace

void save_dataset(const std::string& path, const DatasetHeader& header,
                  const std::vector<Instance>& instances) {
  if (instances.size() != header.count)
    throw std::invalid_argument("save_dataset: count mismatch");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);

  os.write(kMagic, 4);
  put_u32(os, header.version);
  put_u32(os, header.n);
  put_u32(os, header.m);
  put_u32(os, header.count);
  put_u64(os, header.master_seed);

  for (const Instance& inst : instances) {
    if (inst.x_true.size() != header.n || inst.y.size() != header.m ||
        inst.H.rows() != header.m || inst.H.cols() != header.n)
      throw std::invalid_argument("save_dataset: instance dimension mismatch");
    for (Index i = 0; i < inst.x_true.size(); ++i) put_double(os, inst.x_true[i]);
    for (Index r = 0; r < inst.H.rows(); ++r)
      for (Index c = 0; c < inst.H.cols(); ++c) put_double(os, inst.H(r, c));
    for (Index i = 0; i < inst.y.size(); ++i) put_double(os, inst.y[i]);
    put_double(os, inst.noise_var);
  }
  if (!os) throw IoError("write failed: " + path);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open for reading: " + path);

  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw IoError("bad dataset magic: " + path);

  Dataset ds;
  ds.header.version = get_u32(is);
  if (ds.header.version != 1)
    throw IoError("unsupported dataset version in " + path);
  ds.header.n = get_u32(is);
  ds.header.m = get_u32(is);
  ds.header.count = get_u32(is);
  ds.header.master_seed = get_u64(is);

  ds.instances.reserve(ds.header.count);
  for (std::uint32_t k = 0; k < ds.header.count; ++k) {
    Instance inst;
    inst.x_true.resize(ds.header.n);
    for (Index i = 0; i < inst.x_true.size(); ++i) inst.x_true[i] = get_double(is);
    inst.H.resize(ds.header.m, ds.header.n);
    for (Index r = 0; r < inst.H.rows(); ++r)
      for (Index c = 0; c < inst.H.cols(); ++c) inst.H(r, c) = get_double(is);
    inst.y.resize(ds.header.m);
    for (Index i = 0; i < inst.y.size(); ++i) inst.y[i] = get_double(is);
    inst.noise_var = get_double(is);
    inst.seed = derive_seed(ds.header.master_seed, k);
    ds.instances.push_back(std::move(inst));
  }
  if (!is) throw IoError("truncated dataset file: " + path);
  return ds;
}

}  // namespace shrinklearn
