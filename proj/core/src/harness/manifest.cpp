#include <fstream>
#include <iterator>

#include <json.hpp>

#include "shotlab/error.hpp"
#include "shotlab/harness.hpp"
#include "shotlab/rng.hpp"

namespace shotlab::harness {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = kFnvOffset) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[v & 0xf];
    v >>= 4;
  }
  return out;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<SeedTag> tags) {
  std::uint64_t h = mix64(master ^ 0x243f6a8885a308d3ULL);
  for (const auto& tag : tags) {
    std::uint64_t v = 0;
    if (const auto* s = std::get_if<std::string_view>(&tag)) {
      // Length and type are folded in so ("a", "b") and ("ab") differ.
      v = mix64(fnv1a(*s) ^ (s->size() * 0x9e3779b97f4a7c15ULL)) ^ 0x13198a2e03707344ULL;
    } else {
      v = mix64(std::get<std::uint64_t>(tag) ^ 0xa4093822299f31d0ULL);
    }
    h = mix64(h ^ v) + 0x082efa98ec4e6c89ULL;
  }
  return mix64(h);
}

std::string digest_bytes(std::string_view bytes) { return hex64(fnv1a(bytes)); }

std::string digest_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::uint64_t h = kFnvOffset;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    h = fnv1a(std::string_view(buf, static_cast<std::size_t>(in.gcount())), h);
  }
  return hex64(h);
}

const StageRecord* ArtifactManifest::find(std::string_view name) const {
  for (const auto& s : stages) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::string ArtifactManifest::to_json() const {
  nlohmann::ordered_json doc;
  doc["config"] = config;
  doc["stages"] = nlohmann::ordered_json::array();
  for (const auto& s : stages) {
    nlohmann::ordered_json j;
    j["name"] = s.name;
    j["input_digest"] = s.input_digest;
    j["outputs"] = nlohmann::ordered_json::object();
    for (const auto& [path, digest] : s.outputs) j["outputs"][path] = digest;
    doc["stages"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

ArtifactManifest ArtifactManifest::from_json(std::string_view text) {
  ArtifactManifest m;
  try {
    const auto doc = nlohmann::json::parse(text);
    m.config = doc.value("config", std::string());
    for (const auto& j : doc.at("stages")) {
      StageRecord s;
      s.name = j.at("name").get<std::string>();
      s.input_digest = j.at("input_digest").get<std::string>();
      for (const auto& [path, digest] : j.at("outputs").items()) s.outputs[path] = digest.get<std::string>();
      m.stages.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

ArtifactManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read manifest " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return ArtifactManifest::from_json(text);
}

}  // namespace shotlab::harness
