#include "phylab/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include "phylab/version.hpp"
#include <json.hpp>

namespace phylab {

using nlohmann::json;

namespace {

json blocks_to_json(const std::vector<std::string>& names,
                    const std::vector<const std::vector<double>*>& values) {
  json arr = json::array();
  for (size_t i = 0; i < names.size(); ++i)
    arr.push_back({{"name", names[i]}, {"values", *values[i]}});
  return arr;
}

void blocks_from_json(const json& arr, const std::vector<std::string>& names,
                      const std::vector<std::vector<double>*>& values,
                      const char* what) {
  if (!arr.is_array() || arr.size() != names.size())
    throw std::runtime_error(std::string("checkpoint ") + what + " count mismatch: file has " +
                             std::to_string(arr.size()) + ", network has " +
                             std::to_string(names.size()));
  for (size_t i = 0; i < names.size(); ++i) {
    const json& b = arr.at(i);
    const std::string name = b.at("name").get<std::string>();
    if (name != names[i])
      throw std::runtime_error(std::string("checkpoint ") + what + " name mismatch at index " +
                               std::to_string(i) + ": file '" + name + "' vs network '" +
                               names[i] + "'");
    std::vector<double> v = b.at("values").get<std::vector<double>>();
    if (v.size() != values[i]->size())
      throw std::runtime_error("checkpoint block '" + name + "' has " +
                               std::to_string(v.size()) + " values, network expects " +
                               std::to_string(values[i]->size()));
    *values[i] = std::move(v);
  }
}

}  // namespace

void save_checkpoint(const std::string& path, Network& net, const CheckpointInfo& info) {
  std::vector<std::string> pnames, snames;
  std::vector<const std::vector<double>*> pvals, svals;
  for (const auto& pb : net.param_blocks()) {
    pnames.push_back(pb.name);
    pvals.push_back(pb.w);
  }
  for (const auto& sb : net.state_blocks()) {
    snames.push_back(sb.name);
    svals.push_back(sb.v);
  }
  json j;
  j["format_version"] = kCheckpointVersion;
  j["kind"] = info.kind;
  j["seed"] = info.seed;
  j["meta"] = info.meta;
  j["params"] = blocks_to_json(pnames, pvals);
  j["state"] = blocks_to_json(snames, svals);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(1) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

CheckpointInfo load_checkpoint(const std::string& path, Network& net) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("malformed checkpoint " + path + ": " + e.what());
  }
  if (!j.contains("format_version") || !j["format_version"].is_number_integer() ||
      j["format_version"].get<int>() != kCheckpointVersion)
    throw std::runtime_error("unsupported checkpoint format_version in " + path);

  std::vector<std::string> pnames, snames;
  std::vector<std::vector<double>*> pvals, svals;
  for (const auto& pb : net.param_blocks()) {
    pnames.push_back(pb.name);
    pvals.push_back(pb.w);
  }
  for (const auto& sb : net.state_blocks()) {
    snames.push_back(sb.name);
    svals.push_back(sb.v);
  }
  blocks_from_json(j.at("params"), pnames, pvals, "param");
  blocks_from_json(j.at("state"), snames, svals, "state");

  CheckpointInfo info;
  info.kind = j.value("kind", std::string{});
  info.seed = j.value("seed", uint64_t{0});
  if (j.contains("meta")) info.meta = j["meta"].get<std::map<std::string, double>>();
  return info;
}

}  // namespace phylab
