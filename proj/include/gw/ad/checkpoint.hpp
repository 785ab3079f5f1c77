#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gw/ad/parameters.hpp"

namespace gw::ad {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Layout (little-endian):
//   "GWCKPT1" u32 version
//   u32 len, kind bytes
//   u32 len, metadata JSON text
//   u32 count, then per tensor: u32 len, name, u32 rank, u64 dims[rank], u64 offset
//   u64 total, f32 payload[total]
// Offsets count floats from the start of the payload.
struct Checkpoint {
  std::string kind;
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<std::pair<std::string, Tensor>> tensors;

  const Tensor* find(const std::string& name) const;
};

Checkpoint make_checkpoint(std::string kind, nlohmann::json metadata, const ParameterStore& store);

void write_checkpoint(const Checkpoint& ckpt, std::ostream& out);
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Copies tensors into an already laid out store. Every store parameter must
// be present with the same shape, and the checkpoint may hold no extras.
void load_into(const Checkpoint& ckpt, ParameterStore& store);

// Fails with ConfigError unless ckpt.kind == kind.
void require_kind(const Checkpoint& ckpt, const std::string& kind);

}  // namespace gw::ad
