#pragma once

#include <cstdint>
#include <filesystem>

#include "hbn/neural/dense_net.hpp"

namespace hbn::neural {

struct LoadedNet {
  DenseNet net;
  std::uint64_t seed = 0;
};

// Binary checkpoint: magic "HBNN", version u32, then per layer the weight
// matrix row-major and the bias vector as 64-bit floats. A JSON sidecar
// (same path with an extra .json suffix) records the architecture and seed.
void save_net(const DenseNet& net, std::uint64_t seed,
              const std::filesystem::path& bin_path);

LoadedNet load_net(const std::filesystem::path& bin_path);

}  // namespace hbn::neural
