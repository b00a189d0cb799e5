#include "olap/datagen.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <numeric>
#include <string>

#include "olap/errors.hpp"
#include "olap/random.hpp"

namespace olap {

static_assert(std::endian::native == std::endian::little, "relation files assume a little-endian host");

FkPair generate_fk_pair(uint64_t build_cardinality, uint64_t probe_cardinality, uint64_t seed) {
  if (build_cardinality == 0) throw ConfigError("build cardinality must be at least 1");
  if (build_cardinality > UINT32_MAX) throw ConfigError("build cardinality exceeds the 32-bit key domain");

  FkPair pair;
  std::vector<uint32_t> keys(build_cardinality);
  std::iota(keys.begin(), keys.end(), 1u);
  SplitMix64 build_rng(derive_seed(seed, 0));
  shuffle(std::span<uint32_t>(keys), build_rng);

  pair.build.tuples.resize(build_cardinality);
  for (uint64_t i = 0; i < build_cardinality; ++i) pair.build.tuples[i] = {keys[i], keys[i]};

  SplitMix64 probe_rng(derive_seed(seed, 1));
  pair.probe.tuples.resize(probe_cardinality);
  for (auto& t : pair.probe.tuples) {
    const auto key = static_cast<uint32_t>(1 + probe_rng.below(build_cardinality));
    t = {key, key};
  }
  return pair;
}

Column8 generate_column(uint64_t length, uint64_t seed) {
  Column8 col(length);
  SplitMix64 rng(derive_seed(seed, 2));
  uint8_t* out = col.values.data();
  uint64_t i = 0;
  for (; i + 8 <= length; i += 8) {
    const uint64_t word = rng.next();
    std::memcpy(out + i, &word, 8);
  }
  if (i < length) {
    const uint64_t word = rng.next();
    std::memcpy(out + i, &word, length - i);
  }
  return col;
}

Column8 make_column(std::span<const uint8_t> bytes) {
  Column8 col(bytes.size());
  if (!bytes.empty()) std::memcpy(col.values.data(), bytes.data(), bytes.size());
  return col;
}

void write_relation(const std::filesystem::path& path, const Relation& rel) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  const uint64_t n = rel.cardinality();
  out.write(kRelationMagic, sizeof(kRelationMagic));
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  if (n != 0) out.write(reinterpret_cast<const char*>(rel.tuples.data()), static_cast<std::streamsize>(n * sizeof(Tuple)));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Relation read_relation(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  char header[kRelationHeaderBytes];
  in.read(header, sizeof(header));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(header))) {
    throw FormatError(path.string() + ": truncated header");
  }
  if (std::memcmp(header, kRelationMagic, sizeof(kRelationMagic)) != 0) {
    throw FormatError(path.string() + ": bad magic");
  }
  uint64_t n;
  std::memcpy(&n, header + 8, sizeof(n));

  const auto file_bytes = std::filesystem::file_size(path);
  if (file_bytes != kRelationHeaderBytes + n * sizeof(Tuple)) {
    throw FormatError(path.string() + ": expected " + std::to_string(n) + " tuples, file size " +
                      std::to_string(file_bytes));
  }

  Relation rel;
  rel.tuples.resize(n);
  if (n != 0) in.read(reinterpret_cast<char*>(rel.tuples.data()), static_cast<std::streamsize>(n * sizeof(Tuple)));
  if (!in) throw FormatError(path.string() + ": truncated body");
  return rel;
}

}  // namespace olap
