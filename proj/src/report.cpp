#include "tabmem/report.hpp"

namespace tabmem {

nlohmann::json to_json(const MemorizationReport& report) {
  return {
      {"threshold", report.threshold},
      {"mem_ratio", report.mem_ratio},
      {"mem_auc", report.mem_auc},
      {"n_generated", report.ratios.size()},
      {"normalizer", {{"d_min", report.normalizer.d_min()}, {"d_max", report.normalizer.d_max()}}},
      {"histogram", {{"bin_left", report.histogram.bin_left}, {"counts", report.histogram.counts}}},
      {"ratios", report.ratios},
  };
}

nlohmann::json to_json(const FidelityReport& report) {
  nlohmann::json j = {
      {"shape_score", report.shape_score},
      {"trend_score", report.trend_score},
      {"c2st_score", report.c2st_score},
      {"c2st_auc", report.c2st_auc},
      {"alpha_precision", report.alpha_precision},
      {"beta_recall", report.beta_recall},
  };
  if (report.dcr_probability) j["dcr_probability"] = *report.dcr_probability;
  return j;
}

nlohmann::json to_json(const FeatureClusters& clusters, const Schema& schema) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& c : clusters.clusters) {
    nlohmann::json names = nlohmann::json::array();
    for (auto f : c) names.push_back(schema.features().at(f).name);
    groups.push_back(std::move(names));
  }
  return {{"clusters", std::move(groups)}, {"threshold", clusters.threshold}};
}

nlohmann::json to_json(const ReplicationStudy& study) {
  return {
      {"replication_fraction", study.replication_fraction},
      {"mean_final_nn_distance", study.mean_final_nn_distance},
      {"pre_final_replication_fraction", study.pre_final_replication_fraction},
      {"mean_pre_final_nn_distance", study.mean_pre_final_nn_distance},
      {"latent_diameter", study.diameter},
      {"tolerance", study.tolerance},
      {"trajectories", study.samples.size()},
  };
}

}  // namespace tabmem
