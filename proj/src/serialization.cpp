#include "alphatex/serialization.hpp"

#include <fstream>

namespace alphatex {

namespace {

const char* kind_name(StatisticDescriptor::Kind k) {
  switch (k) {
    case StatisticDescriptor::Kind::mean: return "mean";
    case StatisticDescriptor::Kind::covariance: return "covariance";
    case StatisticDescriptor::Kind::lowpass: return "lowpass";
  }
  return "unknown";
}

}  // namespace

nlohmann::json statistics_to_json(const StatisticsVector& stats, const IndexSet& set, const ModelConfig& config) {
  const auto descriptors = describe(set);
  if (descriptors.size() != stats.size()) throw Error("statistics do not match the index set");
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const auto& d = descriptors[i];
    entries.push_back({{"kind", kind_name(d.kind)},
                       {"j", d.first.j},
                       {"theta_idx", d.first.theta},
                       {"j2", d.second.j},
                       {"theta2_idx", d.second.theta},
                       {"alpha_idx", d.first.alpha},
                       {"alpha2_idx", d.second.alpha},
                       {"c", d.first.c},
                       {"c2", d.second.c},
                       {"tau", {d.tau.dx, d.tau.dy}},
                       {"value", stats.values[i]}});
  }
  nlohmann::json header = {{"config", to_json(config)},
                           {"config_hash", config_hash(config)},
                           {"layout_hash", std::to_string(stats.layout_hash)},
                           {"mean_count", stats.mean_count},
                           {"covariance_count", stats.covariance_count},
                           {"lowpass_count", stats.lowpass_count}};
  return {{"header", header}, {"entries", entries}};
}

StatisticsVector statistics_from_json(const nlohmann::json& j) {
  try {
    StatisticsVector out;
    const auto& h = j.at("header");
    out.mean_count = h.at("mean_count").get<std::size_t>();
    out.covariance_count = h.at("covariance_count").get<std::size_t>();
    out.lowpass_count = h.at("lowpass_count").get<std::size_t>();
    out.layout_hash = std::stoull(h.at("layout_hash").get<std::string>());
    for (const auto& e : j.at("entries")) out.values.push_back(e.at("value").get<double>());
    if (out.values.size() != out.mean_count + out.covariance_count + out.lowpass_count) {
      throw Error("entry count does not match the header");
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed statistics file: ") + e.what());
  }
}

nlohmann::json means_to_json(const PlaneMeans& means, const PlaneLayout& layout) {
  nlohmann::json out = nlohmann::json::array();
  for (int p = 0; p < layout.count(); ++p) {
    const Gamma g = layout.gamma(p);
    nlohmann::json levels = nlohmann::json::array();
    for (int l = 0; l < means.levels(); ++l) levels.push_back(means.at(p, l));
    out.push_back({{"j", g.j}, {"theta_idx", g.theta}, {"alpha_idx", g.alpha}, {"c", g.c}, {"mu", levels}});
  }
  return out;
}

nlohmann::json to_json(const HistoryRecord& h) {
  return {{"restart", h.restart}, {"iter", h.iter}, {"loss", h.loss}, {"grad_norm", h.grad_norm}, {"wall_ms", h.wall_ms}};
}

void write_history_jsonl(std::ostream& out, const std::vector<HistoryRecord>& history) {
  for (const auto& h : history) out << to_json(h).dump() << '\n';
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace alphatex
