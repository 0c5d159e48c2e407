#include "cola/learn/checkpoint.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace cola::learn {
namespace {

using nlohmann::json;

json net_json(const Mlp& m) { return {{"output_dim", m.output_dim()}, {"params", m.params()}}; }

Mlp net_from(const json& j, int input_dim, const Architecture& arch) {
  Mlp m(input_dim, j.at("output_dim").get<int>(), arch);
  const auto params = j.at("params").get<std::vector<double>>();
  if (params.size() != m.num_params()) throw FormatError("checkpoint: parameter count mismatch");
  m.params() = params;
  return m;
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " to " + path);
  }
}

void save_checkpoint(const Checkpoint& c, const std::string& path) {
  const auto& arch = c.net.f1.architecture();
  json j = {{"format", "cola-checkpoint"},
            {"format_version", kCheckpointVersion},
            {"game", c.game},
            {"alpha", c.alpha},
            {"seed", c.seed},
            {"input_dim", c.net.f1.input_dim()},
            {"architecture", {{"hidden", arch.hidden}, {"activation", to_string(arch.activation)}}},
            {"nets", {net_json(c.net.f1), net_json(c.net.f2)}}};
  write_file_atomic(path, j.dump(1) + "\n");
}

Checkpoint load_checkpoint(const std::string& path, const games::Game* expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  Checkpoint c;
  try {
    const json j = json::parse(buf.str());
    if (j.at("format").get<std::string>() != "cola-checkpoint") {
      throw FormatError("checkpoint: not a cola checkpoint");
    }
    const int version = j.at("format_version").get<int>();
    if (version != kCheckpointVersion) {
      throw FormatError("checkpoint: format version " + std::to_string(version) + ", expected " +
                        std::to_string(kCheckpointVersion));
    }
    c.game = j.at("game").get<std::string>();
    c.alpha = j.at("alpha").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    const auto& a = j.at("architecture");
    Architecture arch{a.at("hidden").get<std::vector<int>>(),
                      parse_activation(a.at("activation").get<std::string>())};
    const int input_dim = j.at("input_dim").get<int>();
    const auto& nets = j.at("nets");
    if (!nets.is_array() || nets.size() != 2) throw FormatError("checkpoint: expected two networks");
    c.net = MlpPair{net_from(nets[0], input_dim, arch), net_from(nets[1], input_dim, arch)};
  } catch (const json::exception& e) {
    throw FormatError("checkpoint " + path + " is malformed: " + e.what());
  } catch (const UsageError& e) {
    throw FormatError("checkpoint " + path + " is malformed: " + e.what());
  }
  if (expected != nullptr) {
    if (c.net.f1.input_dim() != expected->dim() || c.net.f1.output_dim() != expected->d1 ||
        c.net.f2.output_dim() != expected->d2) {
      throw UsageError("checkpoint " + path + " has dimensions (" +
                       std::to_string(c.net.f1.output_dim()) + ", " + std::to_string(c.net.f2.output_dim()) +
                       ") but game " + expected->name + " needs (" + std::to_string(expected->d1) + ", " +
                       std::to_string(expected->d2) + ")");
    }
  }
  return c;
}

}  // namespace cola::learn
