#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dmcnet/tensor.hpp"

namespace dmcnet {

// Weight container: magic "DMCW", version u16 = 1, count u32, then per
// tensor {name length u16, name UTF-8, rank u8 = 4, dims u32 x4 (N,C,H,W),
// payload float32 little-endian}. Entries keep the order they were written
// in; reads round-trip bit-exactly.
void save_checkpoint(const std::string& path,
                     const std::vector<std::pair<std::string, const Tensor4f*>>& tensors);

std::map<std::string, Tensor4f> load_checkpoint(const std::string& path);

}  // namespace dmcnet
