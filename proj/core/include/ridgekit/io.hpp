#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ridgekit/ridge.hpp"
#include "ridgekit/tfa.hpp"

namespace ridgekit {

const char* library_version();

// Reads a signal from CSV. With a "t,value" header the rate comes from the
// time column unless `fs` is given; a headerless single column needs `fs`.
Signal read_signal_csv(const std::string& path, std::optional<double> fs = std::nullopt);
void write_signal_csv(const std::string& path, const Signal& s);

// Raw TFR: u32 N, u32 M, f64 dxi (little-endian), then N*M (re, im) f64 pairs, row-major.
void write_tfr_raw(const std::string& path, const Tfr& R);
Tfr read_tfr_raw(const std::string& path);

// Magnitudes, one row per time sample, header "time_s,<freq_hz>...".
void write_tfr_magnitude_csv(const std::string& path, const Tfr& R);

// Columns time_s, f1_hz, f2_hz, ...
void write_ridges_csv(const std::string& path, const RidgeSet& c);
// Reads ridges back onto the bin grid dxi (nearest bin); also accepts a single f1_hz column.
RidgeSet read_ridges_csv(const std::string& path, double dxi);

// 64-bit FNV-1a of a file's bytes, as 16 hex digits.
std::string fnv1a_file(const std::string& path);
std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace ridgekit
