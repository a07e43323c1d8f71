#pragma once

#include <string>

#include "json.hpp"
#include "rbai/algorithms.hpp"
#include "rbai/design.hpp"
#include "rbai/instance.hpp"

namespace rbai {

nlohmann::json to_json(const Instance& instance);
Instance instance_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Design& design);
Design design_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RunResult& result);

Instance load_instance(const std::string& path);
void save_json(const nlohmann::json& j, const std::string& path);

}  // namespace rbai
