#pragma once

#include <string>

#include "dmcnet/flow.hpp"

namespace dmcnet {

// Middlebury .flo interchange: float32 magic 202021.25 (bytes "PIEH"),
// width i32, height i32, then row-major interleaved (u, v) float32 pairs,
// all little-endian.
void write_flo(const std::string& path, const FlowField& field);
FlowField read_flo(const std::string& path);

}  // namespace dmcnet
