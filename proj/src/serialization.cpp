#include "rbai/serialization.hpp"

#include <fstream>
#include <stdexcept>
#include <vector>

namespace rbai {

namespace {

nlohmann::json vector_to_json(const Vector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Vector vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected a JSON array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  Eigen::Index i = 0;
  for (const auto& x : j) v(i++) = x.get<double>();
  return v;
}

}  // namespace

nlohmann::json to_json(const Instance& instance) {
  nlohmann::json j;
  j["dim"] = instance.dim();
  j["noise_std"] = instance.noise_std();
  j["feature_bound"] = instance.feature_bound();
  j["theta"] = vector_to_json(instance.theta());
  j["arms"] = nlohmann::json::array();
  for (const Arm& arm : instance.arms()) {
    j["arms"].push_back({{"id", arm.id}, {"features", vector_to_json(arm.features)}});
  }
  j["adversaries"] = nlohmann::json::array();
  for (const AdversarySet& adv : instance.adversaries()) {
    nlohmann::json actions = nlohmann::json::array();
    for (const Vector& y : adv.actions) actions.push_back(vector_to_json(y));
    j["adversaries"].push_back({{"arm_id", adv.arm_id}, {"actions", std::move(actions)}});
  }
  return j;
}

Instance instance_from_json(const nlohmann::json& j) {
  const int dim = j.at("dim").get<int>();
  const double noise_std = j.at("noise_std").get<double>();
  const Vector theta = vector_from_json(j.at("theta"));

  std::vector<Arm> arms;
  for (const auto& a : j.at("arms")) {
    arms.push_back({a.at("id").get<int>(), vector_from_json(a.at("features"))});
  }
  std::vector<AdversarySet> adversaries;
  for (const auto& a : j.at("adversaries")) {
    AdversarySet adv{a.at("arm_id").get<int>(), {}};
    for (const auto& y : a.at("actions")) adv.actions.push_back(vector_from_json(y));
    adversaries.push_back(std::move(adv));
  }

  if (j.contains("feature_bound")) {
    return Instance(dim, std::move(arms), std::move(adversaries), theta, noise_std,
                    j.at("feature_bound").get<double>());
  }
  return Instance(dim, std::move(arms), std::move(adversaries), theta, noise_std);
}

nlohmann::json to_json(const Design& design) {
  return {{"weights", vector_to_json(design.weights)}};
}

Design design_from_json(const nlohmann::json& j) {
  return Design{vector_from_json(j.at("weights"))};
}

nlohmann::json to_json(const RunResult& result) {
  nlohmann::json j;
  j["recommended_arm"] = result.recommended_arm;
  j["total_pulls"] = result.total_pulls;
  j["correct"] = result.correct;
  j["aborted"] = result.aborted;
  j["phases"] = nlohmann::json::array();
  for (const PhaseRecord& p : result.phases) {
    j["phases"].push_back({{"t", p.t},
                           {"active_arms", p.active_arms},
                           {"design_value", p.design_value},
                           {"n_t", p.n_t},
                           {"delta_t", p.delta_t}});
  }
  return j;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  nlohmann::json j;
  in >> j;
  return instance_from_json(j);
}

void save_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace rbai
