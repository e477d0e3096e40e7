#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shrinklearn/datagen.hpp"

namespace shrinklearn {

/// Binary dataset container. Little-endian layout:
///   magic "SLRN", u32 version=1, u32 N, u32 M, u32 count, u64 master_seed,
/// then per instance: x (N doubles), H (M*N doubles, row-major),
/// y (M doubles), noise_var (1 double).
struct DatasetHeader {
  std::uint32_t version = 1;
  std::uint32_t n = 0;
  std::uint32_t m = 0;
  std::uint32_t count = 0;
  std::uint64_t master_seed = 0;
};

void save_dataset(const std::string& path, const DatasetHeader& header,
                  const std::vector<Instance>& instances);

struct Dataset {
  DatasetHeader header;
  std::vector<Instance> instances;
};

Dataset load_dataset(const std::string& path);

}  // namespace shrinklearn
