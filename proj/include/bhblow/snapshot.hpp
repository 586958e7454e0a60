#pragma once

#include <filesystem>

#include "bhblow/grid.hpp"

namespace bhblow {

/// A field together with its time stamp, as stored on disk.
struct Snapshot {
  double t;
  Field u;
};

// Binary layout, little-endian: "BHF1", n (u64), L (f64), t (f64), then n
// float64 samples.
void write_snapshot(const std::filesystem::path& path, const Field& u, double t);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace bhblow
