#pragma once

// JSON schemas for every exchanged object. One schema version across all
// files; unknown fields are rejected with the offending path so drift shows
// up immediately. Serialization is deterministic (sorted keys).

#include <json.hpp>

#include "bilip/lattice_reduction.hpp"
#include "bilip/threading.hpp"
#include "bilip/verify.hpp"

namespace bilip {

inline constexpr const char* kSchemaVersion = "1";

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::json;

Json to_json(const Vec& v);
Json to_json(const Box& b);
Json to_json(const SeparatedNet& net);
Json to_json(const SwapFamily& fam);
Json to_json(const PointMap& pm);
Json to_json(const LatticePerm& perm);
Json to_json(const RoutingSchedule& sched);
Json to_json(const Region& region);
Json to_json(const MapExpr& map);
Json to_json(const LayeredPointMap& data);
Json to_json(const SlabSystem& system);
Json to_json(const AuditReport& rep);
Json to_json(const TileDecomposition& td);

Vec vec_from_json(const Json& j, int expect_dim = 0);
Box box_from_json(const Json& j);
SeparatedNet net_from_json(const Json& j);
SwapFamily swap_family_from_json(const Json& j);
PointMap point_map_from_json(const Json& j);
LatticePerm lattice_perm_from_json(const Json& j);
RoutingSchedule schedule_from_json(const Json& j);
Region region_from_json(const Json& j);
MapExpr map_from_json(const Json& j);
LayeredPointMap layered_from_json(const Json& j);
SlabSystem slab_system_from_json(const Json& j);

// File helpers; dump uses 2-space indentation and sorted keys.
std::string dump_json(const Json& j);
Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

}  // namespace bilip
