#include "gw/ad/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "gw/core/error.hpp"

namespace gw::ad {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little-endian");

namespace {

constexpr char kMagic[7] = {'G', 'W', 'C', 'K', 'P', 'T', '1'};
constexpr std::uint32_t kMaxString = 1u << 28;

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

void put_string(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

template <class T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw IoError("checkpoint truncated");
  return v;
}

std::string get_string(std::istream& in) {
  const auto n = get<std::uint32_t>(in);
  if (n > kMaxString) throw IoError("checkpoint string length out of range");
  std::string s(n, '\0');
  if (n && !in.read(s.data(), n)) throw IoError("checkpoint truncated");
  return s;
}

}  // namespace

const Tensor* Checkpoint::find(const std::string& name) const {
  for (const auto& [n, t] : tensors) {
    if (n == name) return &t;
  }
  return nullptr;
}

Checkpoint make_checkpoint(std::string kind, nlohmann::json metadata, const ParameterStore& store) {
  Checkpoint c;
  c.kind = std::move(kind);
  c.metadata = std::move(metadata);
  for (const Parameter* p : store.all()) c.tensors.emplace_back(p->name, p->value);
  return c;
}

void write_checkpoint(const Checkpoint& ckpt, std::ostream& out) {
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kCheckpointVersion);
  put_string(out, ckpt.kind);
  put_string(out, ckpt.metadata.dump());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.tensors.size()));
  std::uint64_t offset = 0;
  for (const auto& [name, t] : ckpt.tensors) {
    put_string(out, name);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.rank()));
    for (std::size_t d : t.shape()) put<std::uint64_t>(out, d);
    put<std::uint64_t>(out, offset);
    offset += t.size();
  }
  put<std::uint64_t>(out, offset);
  for (const auto& entry : ckpt.tensors) {
    for (double v : entry.second.values()) put<float>(out, static_cast<float>(v));
  }
  if (!out) throw IoError("checkpoint write failed");
}

Checkpoint read_checkpoint(std::istream& in) {
  char magic[sizeof kMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw IoError("not a checkpoint file (bad magic)");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw IoError("unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint c;
  c.kind = get_string(in);
  try {
    c.metadata = nlohmann::json::parse(get_string(in));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("checkpoint metadata: ") + e.what());
  }
  const auto count = get<std::uint32_t>(in);
  struct Entry {
    std::string name;
    Shape shape;
    std::uint64_t offset;
  };
  std::vector<Entry> dir;
  std::uint64_t expected = 0;
  for (std::uint32_t i = 0; i < count; ++i) {
    Entry e;
    e.name = get_string(in);
    const auto rank = get<std::uint32_t>(in);
    if (rank > 8) throw IoError("checkpoint tensor rank out of range");
    for (std::uint32_t r = 0; r < rank; ++r) e.shape.push_back(get<std::uint64_t>(in));
    e.offset = get<std::uint64_t>(in);
    if (e.offset != expected) throw IoError("checkpoint directory offsets are not contiguous");
    expected += element_count(e.shape);
    dir.push_back(std::move(e));
  }
  const auto total = get<std::uint64_t>(in);
  if (total != expected) throw IoError("checkpoint payload size disagrees with directory");
  for (auto& e : dir) {
    const std::size_t n = element_count(e.shape);
    std::vector<float> raw(n);
    if (n && !in.read(reinterpret_cast<char*>(raw.data()),
                      static_cast<std::streamsize>(n * sizeof(float)))) {
      throw IoError("checkpoint truncated");
    }
    c.tensors.emplace_back(e.name, Tensor(e.shape, std::vector<double>(raw.begin(), raw.end())));
  }
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_checkpoint(ckpt, out);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_checkpoint(in);
}

void load_into(const Checkpoint& ckpt, ParameterStore& store) {
  std::set<std::string> seen;
  for (Parameter* p : store.all()) {
    const Tensor* t = ckpt.find(p->name);
    if (!t) throw ConfigError("checkpoint lacks parameter '" + p->name + "'");
    if (t->shape() != p->value.shape()) {
      throw ConfigError("checkpoint parameter '" + p->name + "' has shape " +
                        to_string(t->shape()) + ", model expects " +
                        to_string(p->value.shape()));
    }
    p->value = *t;
    seen.insert(p->name);
  }
  for (const auto& entry : ckpt.tensors) {
    if (!seen.count(entry.first)) {
      throw ConfigError("checkpoint has unexpected parameter '" + entry.first + "'");
    }
  }
}

void require_kind(const Checkpoint& ckpt, const std::string& kind) {
  if (ckpt.kind != kind) {
    throw ConfigError("expected a '" + kind + "' checkpoint, got '" + ckpt.kind + "'");
  }
}

}  // namespace gw::ad
