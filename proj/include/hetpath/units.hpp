#pragma once

// Unit conventions used throughout the library: time in seconds, bandwidth in
// bits per second, sizes in bytes. The conversion factors (8, 1e3, 1e6) live
// here and nowhere else.

namespace hetpath {

inline constexpr double kBitsPerByte = 8.0;

constexpr double bytes_to_bits(double bytes) { return bytes * kBitsPerByte; }
constexpr double bits_to_bytes(double bits) { return bits / kBitsPerByte; }
constexpr double mbps_to_bps(double mbps) { return mbps * 1e6; }
constexpr double kbps_to_bps(double kbps) { return kbps * 1e3; }
constexpr double bps_to_kbps(double bps) { return bps / 1e3; }
constexpr double ms_to_s(double ms) { return ms / 1e3; }
constexpr double s_to_ms(double s) { return s * 1e3; }

}  // namespace hetpath
