#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace sensorium {

// FNV-1a, used for file digests in the manifest and for per-key RNG salting.
std::uint64_t fnv1a64(std::string_view data,
                      std::uint64_t seed = 14695981039346656037ull);
std::string fnv1a64_hex(std::string_view data);
std::uint64_t file_digest(const std::string& path);
std::string digest_hex(std::uint64_t digest);

// SplitMix64 step; combines a run seed with a salt into a stream seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

std::vector<std::string_view> split(std::string_view s, char delim);
std::string lower_ascii(std::string_view s);
bool valid_utf8(std::string_view s);

// Deterministic RNG wrapper. std::mt19937_64 has a fully specified output
// sequence; the helpers below avoid std distributions, whose results are
// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }
  // Uniform in [0,1) with 53 bits of precision.
  double next_unit() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }
  // Unbiased uniform integer in [0,n). n must be > 0.
  std::size_t next_below(std::size_t n);
  double next_range(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
  }
  double next_gaussian();

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Reads lines from a plain-text or gzip file (zlib's gzopen handles both).
// Lines are returned without the trailing newline; a final unterminated
// line is still returned.
class LineReader {
 public:
  explicit LineReader(const std::string& path);
  ~LineReader();
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  // Returns false at end of input.
  bool next(std::string& line);
  const std::string& path() const { return path_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string path_;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);
void ensure_dir(const std::string& path);

// Shortest representation that round-trips the exact double.
std::string format_double(double v);
std::string format_fixed(double v, int prec);

}  // namespace sensorium
