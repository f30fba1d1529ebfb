#include "fchlog/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <fstream>

#include <nlohmann/json.hpp>

#include "fchlog/errors.hpp"

namespace fchlog {

namespace {

std::filesystem::path strip(const std::filesystem::path& p) {
  auto ext = p.extension();
  if (ext == ".bin" || ext == ".json") {
    auto q = p;
    q.replace_extension();
    return q;
  }
  return p;
}

std::filesystem::path with_suffix(std::filesystem::path stem, const char* suffix) {
  stem += suffix;
  return stem;
}

void put_le(std::ostream& os, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xffu);
  os.write(reinterpret_cast<const char*>(bytes), 8);
}

double get_le(const unsigned char* bytes) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

std::pair<std::filesystem::path, std::filesystem::path> write_snapshot(
    const std::filesystem::path& stem_in, const ScalarField& u, double time,
    const std::string& label) {
  const auto stem = strip(stem_in);
  const auto bin = with_suffix(stem, ".bin");
  const auto side = with_suffix(stem, ".json");
  if (stem.has_parent_path()) std::filesystem::create_directories(stem.parent_path());

  std::ofstream os(bin, std::ios::binary);
  if (!os) throw Error("cannot open " + bin.string() + " for writing");
  for (double v : u.values()) put_le(os, v);

  const Grid& g = u.grid();
  nlohmann::ordered_json meta;
  meta["dim"] = g.dim();
  meta["counts"] = g.counts();
  meta["lengths"] = g.lengths();
  meta["bc"] = std::string(to_string(g.bc()));
  meta["time"] = time;
  meta["label"] = label;
  std::ofstream js(side);
  if (!js) throw Error("cannot open " + side.string() + " for writing");
  js << meta.dump(2) << '\n';
  return {bin, side};
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  const auto stem = strip(path);
  std::ifstream js(with_suffix(stem, ".json"));
  if (!js) throw Error("cannot open snapshot sidecar " + with_suffix(stem, ".json").string());
  const auto meta = nlohmann::json::parse(js);
  const auto counts = meta.at("counts").get<std::vector<std::size_t>>();
  const auto lengths = meta.at("lengths").get<std::vector<double>>();
  if (static_cast<int>(counts.size()) != meta.at("dim").get<int>()) {
    throw ShapeError("snapshot sidecar dim does not match counts");
  }
  Grid grid(counts, lengths, boundary_from_string(meta.at("bc").get<std::string>()));

  std::ifstream is(with_suffix(stem, ".bin"), std::ios::binary);
  if (!is) throw Error("cannot open snapshot data " + with_suffix(stem, ".bin").string());
  std::vector<unsigned char> raw((std::istreambuf_iterator<char>(is)), {});
  if (raw.size() != grid.size() * 8) {
    throw ShapeError("snapshot data has " + std::to_string(raw.size()) + " bytes, expected " +
                     std::to_string(grid.size() * 8));
  }
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = get_le(raw.data() + 8 * i);
  return {ScalarField(grid, std::move(values)), meta.at("time").get<double>(),
          meta.value("label", std::string{})};
}

}  // namespace fchlog
