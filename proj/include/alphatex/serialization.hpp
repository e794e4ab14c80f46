#pragma once

#include <filesystem>
#include <ostream>
#include <vector>

#include "alphatex/config.hpp"
#include "alphatex/statistics.hpp"
#include "alphatex/synthesis.hpp"
#include "json.hpp"

namespace alphatex {

/// {"header": {...}, "entries": [{kind, j, theta_idx, j2, theta2_idx,
/// alpha_idx, alpha2_idx, c, c2, tau: [dx, dy], value}, ...]}
nlohmann::json statistics_to_json(const StatisticsVector& stats, const IndexSet& set, const ModelConfig& config);
StatisticsVector statistics_from_json(const nlohmann::json& j);

nlohmann::json means_to_json(const PlaneMeans& means, const PlaneLayout& layout);

/// One JSON object per line: {restart, iter, loss, grad_norm, wall_ms}.
void write_history_jsonl(std::ostream& out, const std::vector<HistoryRecord>& history);
nlohmann::json to_json(const HistoryRecord& h);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace alphatex
