#pragma once

#include "json.hpp"
#include "tabmem/association.hpp"
#include "tabmem/fidelity.hpp"
#include "tabmem/memorization.hpp"
#include "tabmem/scorelab.hpp"

namespace tabmem {

/// JSON forms of the module results. Doubles are written by nlohmann::json,
/// which emits the shortest representation that round-trips.
nlohmann::json to_json(const MemorizationReport& report);
nlohmann::json to_json(const FidelityReport& report);
nlohmann::json to_json(const FeatureClusters& clusters, const Schema& schema);
/// Summary only; per-trajectory states are exported separately as CSV.
nlohmann::json to_json(const ReplicationStudy& study);

}  // namespace tabmem
