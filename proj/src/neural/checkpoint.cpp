#include "hbn/neural/checkpoint.hpp"

#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace hbn::neural {

namespace {

constexpr char kMagic[4] = {'H', 'B', 'N', 'N'};
constexpr std::uint32_t kVersion = 1;

std::filesystem::path sidecar_path(const std::filesystem::path& bin_path) {
  std::filesystem::path p = bin_path;
  p += ".json";
  return p;
}

}  // namespace

void save_net(const DenseNet& net, std::uint64_t seed,
              const std::filesystem::path& bin_path) {
  std::ofstream out(bin_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + bin_path.string());
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&kVersion), sizeof(kVersion));
  for (const auto& layer : net.layers()) {
    out.write(reinterpret_cast<const char*>(layer.w.data.data()),
              static_cast<std::streamsize>(layer.w.data.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(layer.b.data()),
              static_cast<std::streamsize>(layer.b.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("write failed for " + bin_path.string());

  nlohmann::json arch = nlohmann::json::array();
  for (const auto& layer : net.layers())
    arch.push_back({{"in", layer.w.cols},
                    {"out", layer.w.rows},
                    {"activation", activation_name(layer.act)},
                    {"dropout", layer.dropout}});
  nlohmann::json sidecar = {
      {"format", "HBNN"}, {"version", kVersion}, {"seed", seed}, {"layers", arch}};
  std::ofstream js(sidecar_path(bin_path));
  if (!js) throw std::runtime_error("cannot write " + sidecar_path(bin_path).string());
  js << sidecar.dump(2) << "\n";
}

LoadedNet load_net(const std::filesystem::path& bin_path) {
  std::ifstream js(sidecar_path(bin_path));
  if (!js)
    throw std::runtime_error("missing checkpoint sidecar " +
                             sidecar_path(bin_path).string());
  nlohmann::json sidecar = nlohmann::json::parse(js);

  std::vector<LayerSpec> spec;
  for (const auto& l : sidecar.at("layers"))
    spec.push_back({l.at("in").get<std::size_t>(), l.at("out").get<std::size_t>(),
                    activation_from_name(l.at("activation").get<std::string>()),
                    l.at("dropout").get<double>()});

  std::ifstream in(bin_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + bin_path.string());
  char magic[4];
  std::uint32_t version = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  if (!in || std::string(magic, 4) != "HBNN")
    throw std::runtime_error(bin_path.string() + ": bad checkpoint magic");
  if (version != kVersion)
    throw std::runtime_error(bin_path.string() + ": unsupported checkpoint version " +
                             std::to_string(version));

  LoadedNet loaded;
  loaded.seed = sidecar.at("seed").get<std::uint64_t>();
  Rng dummy(0);
  loaded.net = DenseNet(spec, dummy);
  for (auto& layer : loaded.net.layers()) {
    in.read(reinterpret_cast<char*>(layer.w.data.data()),
            static_cast<std::streamsize>(layer.w.data.size() * sizeof(double)));
    in.read(reinterpret_cast<char*>(layer.b.data()),
            static_cast<std::streamsize>(layer.b.size() * sizeof(double)));
  }
  if (!in) throw std::runtime_error(bin_path.string() + ": truncated checkpoint");
  return loaded;
}

}  // namespace hbn::neural
