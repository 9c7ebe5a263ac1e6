#pragma once

#include <string>
#include <variant>

#include "ndlimit/field.hpp"

namespace ndlimit {

/// Field snapshot file ("DSPN"), bit-exact layout:
///   bytes 0..3   magic "DSPN"
///   u32 LE       format version (currently 1)
///   u32 LE       n (points per axis)
///   u32 LE       number of components (2 or 4)
///   f64 LE       half_width L
///   then per component, n^3 complex values in row-major order (x fastest),
///   each as real part then imaginary part, f64 LE.
constexpr std::uint32_t k_snapshot_version = 1;

void write_snapshot(const std::string& path, const TwoSpinorField& f);
void write_snapshot(const std::string& path, const SpinorField& f);

struct SnapshotInfo {
    std::uint32_t version = 0;
    std::uint32_t n = 0;
    std::uint32_t components = 0;
    double half_width = 0.0;
};

/// Reads only the header.
SnapshotInfo read_snapshot_info(const std::string& path);

using AnyField = std::variant<TwoSpinorField, SpinorField>;

/// Reads a 2- or 4-component snapshot.
AnyField read_snapshot(const std::string& path);

}  // namespace ndlimit
