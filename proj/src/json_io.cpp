#include "bilip/json_io.hpp"

#include <fstream>

namespace bilip {

namespace {

void expect_fields(const Json& j, const std::string& where, std::initializer_list<const char*> required,
                   std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) throw IoError(where + ": expected an object");
  for (const char* f : required)
    if (!j.contains(f)) throw IoError(where + ": missing field '" + f + "'");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* f : required) known |= it.key() == f;
    for (const char* f : optional) known |= it.key() == f;
    if (!known) throw IoError(where + ": unknown field '" + it.key() + "'");
  }
}

void expect_version(const Json& j, const std::string& where) {
  if (j.at("version").get<std::string>() != kSchemaVersion)
    throw IoError(where + ": unsupported schema version");
}

Json ivec_to_json(const IVec& v) {
  Json a = Json::array();
  for (int i = 0; i < v.dim(); ++i) a.push_back(v[i]);
  return a;
}

IVec ivec_from_json(const Json& j, const std::string& where, int expect_dim = 0) {
  if (!j.is_array() || j.empty()) throw IoError(where + ": expected a coordinate array");
  IVec v(static_cast<int>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) throw IoError(where + ": expected integer coordinates");
    v[static_cast<int>(i)] = j[i].get<long long>();
  }
  if (expect_dim && v.dim() != expect_dim) throw IoError(where + ": dimension mismatch");
  return v;
}

double num(const Json& j, const std::string& where) {
  if (!j.is_number()) throw IoError(where + ": expected a number");
  return j.get<double>();
}

}  // namespace

Json to_json(const Vec& v) {
  Json a = Json::array();
  for (int i = 0; i < v.dim(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const Json& j, int expect_dim) {
  if (!j.is_array() || j.empty() || j.size() > kMaxDim) throw IoError("point: expected 1-4 coordinates");
  Vec v(static_cast<int>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = num(j[i], "point");
  if (expect_dim && v.dim() != expect_dim) throw IoError("point: dimension mismatch");
  return v;
}

Json to_json(const Box& b) { return Json{{"lo", to_json(b.lo)}, {"hi", to_json(b.hi)}}; }

Box box_from_json(const Json& j) {
  expect_fields(j, "box", {"lo", "hi"});
  return Box(vec_from_json(j.at("lo")), vec_from_json(j.at("hi")));
}

Json to_json(const SeparatedNet& net) {
  Json pts = Json::array();
  for (const Vec& p : net.points) pts.push_back(to_json(p));
  return Json{{"version", kSchemaVersion}, {"dim", net.dim},       {"points", pts},
              {"sep", net.sep},            {"cover", net.cover},   {"window", to_json(net.window)}};
}

SeparatedNet net_from_json(const Json& j) {
  expect_fields(j, "net", {"version", "dim", "points", "sep", "cover", "window"});
  expect_version(j, "net");
  SeparatedNet net;
  net.dim = j.at("dim").get<int>();
  for (const Json& p : j.at("points")) net.points.push_back(vec_from_json(p, net.dim));
  net.sep = num(j.at("sep"), "net.sep");
  net.cover = num(j.at("cover"), "net.cover");
  net.window = box_from_json(j.at("window"));
  net.validate();
  return net;
}

Json to_json(const SwapFamily& fam) {
  Json swaps = Json::array();
  for (const SwapSpec& s : fam.specs)
    swaps.push_back(Json{{"x", to_json(s.x)}, {"y", to_json(s.y)}, {"r", s.r}});
  return Json{{"version", kSchemaVersion}, {"dim", fam.dim}, {"swaps", swaps}};
}

SwapFamily swap_family_from_json(const Json& j) {
  expect_fields(j, "swap family", {"version", "dim", "swaps"});
  expect_version(j, "swap family");
  SwapFamily fam;
  fam.dim = j.at("dim").get<int>();
  for (const Json& sj : j.at("swaps")) {
    expect_fields(sj, "swap", {"x", "y", "r"});
    SwapSpec s;
    s.x = vec_from_json(sj.at("x"), fam.dim);
    s.y = vec_from_json(sj.at("y"), fam.dim);
    s.r = num(sj.at("r"), "swap.r");
    fam.specs.push_back(s);
  }
  return fam;
}

Json to_json(const PointMap& pm) {
  Json pairs = Json::array();
  for (const auto& [s, im] : pm.pairs) pairs.push_back(Json::array({to_json(s), to_json(im)}));
  return Json{{"version", kSchemaVersion}, {"dim", pm.dim}, {"declared_L", pm.declared_L}, {"pairs", pairs}};
}

PointMap point_map_from_json(const Json& j) {
  expect_fields(j, "point map", {"version", "dim", "declared_L", "pairs"});
  expect_version(j, "point map");
  PointMap pm;
  pm.dim = j.at("dim").get<int>();
  pm.declared_L = num(j.at("declared_L"), "point map.declared_L");
  for (const Json& pr : j.at("pairs")) {
    if (!pr.is_array() || pr.size() != 2) throw IoError("point map: each pair must be [source, image]");
    pm.pairs.push_back({vec_from_json(pr[0], pm.dim), vec_from_json(pr[1], pm.dim)});
  }
  pm.validate();
  return pm;
}

Json to_json(const LatticePerm& perm) {
  Json pairs = Json::array();
  for (const auto& [s, d] : perm.pairs) pairs.push_back(Json::array({ivec_to_json(s), ivec_to_json(d)}));
  return Json{{"version", kSchemaVersion}, {"dim", perm.dim}, {"scale_N", perm.N}, {"pairs", pairs}};
}

LatticePerm lattice_perm_from_json(const Json& j) {
  expect_fields(j, "lattice permutation", {"version", "dim", "scale_N", "pairs"});
  expect_version(j, "lattice permutation");
  LatticePerm perm;
  perm.dim = j.at("dim").get<int>();
  perm.N = j.at("scale_N").get<long long>();
  for (const Json& pr : j.at("pairs")) {
    if (!pr.is_array() || pr.size() != 2) throw IoError("lattice permutation: each pair must be [src, dst]");
    perm.pairs.push_back({ivec_from_json(pr[0], "perm", perm.dim), ivec_from_json(pr[1], "perm", perm.dim)});
  }
  perm.validate();
  return perm;
}

Json to_json(const RoutingSchedule& sched) {
  Json rounds = Json::array();
  for (const auto& round : sched.rounds) {
    Json r = Json::array();
    for (const auto& [a, b] : round) r.push_back(Json::array({ivec_to_json(a), ivec_to_json(b)}));
    rounds.push_back(r);
  }
  return Json{{"version", kSchemaVersion}, {"dim", sched.dim}, {"scale_N", sched.N}, {"rounds", rounds}};
}

RoutingSchedule schedule_from_json(const Json& j) {
  expect_fields(j, "schedule", {"version", "dim", "scale_N", "rounds"});
  expect_version(j, "schedule");
  RoutingSchedule sched;
  sched.dim = j.at("dim").get<int>();
  sched.N = j.at("scale_N").get<long long>();
  for (const Json& rj : j.at("rounds")) {
    std::vector<std::pair<IVec, IVec>> round;
    for (const Json& pr : rj) {
      if (!pr.is_array() || pr.size() != 2) throw IoError("schedule: each pair must be [a, b]");
      round.push_back({ivec_from_json(pr[0], "schedule", sched.dim), ivec_from_json(pr[1], "schedule", sched.dim)});
    }
    sched.rounds.push_back(std::move(round));
  }
  return sched;
}

Json to_json(const Region& region) {
  switch (region.kind) {
    case RegionKind::HalfSpace:
      return Json{{"kind", "half-space"}, {"normal", to_json(region.normal)}, {"offset", region.offset_c}};
    case RegionKind::AxisSlab:
      return Json{{"kind", "axis-slab"}, {"dim", region.dim}, {"axis", region.axis},
                  {"lo", region.lo_c},   {"hi", region.hi_c}};
    case RegionKind::Tube:
      return Json{{"kind", "tube"}, {"a", to_json(region.a)}, {"b", to_json(region.b)}, {"r", region.r}};
    case RegionKind::TileColumn:
      return Json{{"kind", "tile-column"}, {"lo", to_json(region.lo)}, {"hi", to_json(region.hi)}};
    case RegionKind::Box:
      return Json{{"kind", "box"}, {"lo", to_json(region.lo)}, {"hi", to_json(region.hi)}};
  }
  throw IoError("region: unknown kind");
}

Region region_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw IoError("region: expected an object with 'kind'");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "half-space") {
    expect_fields(j, "region", {"kind", "normal", "offset"});
    return Region::half_space(vec_from_json(j.at("normal")), num(j.at("offset"), "region.offset"));
  }
  if (kind == "axis-slab") {
    expect_fields(j, "region", {"kind", "dim", "axis", "lo", "hi"});
    return Region::axis_slab(j.at("dim").get<int>(), j.at("axis").get<int>(), num(j.at("lo"), "region.lo"),
                             num(j.at("hi"), "region.hi"));
  }
  if (kind == "tube") {
    expect_fields(j, "region", {"kind", "a", "b", "r"});
    return Region::tube(vec_from_json(j.at("a")), vec_from_json(j.at("b")), num(j.at("r"), "region.r"));
  }
  if (kind == "tile-column") {
    expect_fields(j, "region", {"kind", "lo", "hi"});
    return Region::tile_column(vec_from_json(j.at("lo")), vec_from_json(j.at("hi")));
  }
  if (kind == "box") {
    expect_fields(j, "region", {"kind", "lo", "hi"});
    return Region::box(vec_from_json(j.at("lo")), vec_from_json(j.at("hi")));
  }
  throw IoError("region: unknown kind '" + kind + "'");
}

namespace {

Json profile_to_json(const PiecewiseLinear& pl) {
  Json a = Json::array();
  for (const auto& [t, v] : pl.pts) a.push_back(Json::array({t, v}));
  return a;
}

PiecewiseLinear profile_from_json(const Json& j) {
  PiecewiseLinear pl;
  for (const Json& p : j) {
    if (!p.is_array() || p.size() != 2) throw IoError("profile: expected [t, value] pairs");
    pl.pts.push_back({num(p[0], "profile.t"), num(p[1], "profile.value")});
  }
  pl.validate();
  return pl;
}

Json node_to_json(const MapExpr& m) {
  Json j;
  j["dim"] = m->dim;
  j["bound_log2"] = m->bound.bilip_log2();
  j["lip_log2"] = m->bound.lip_log2;
  j["inv_lip_log2"] = m->bound.inv_log2;
  switch (m->kind) {
    case NodeKind::Identity:
      j["kind"] = "identity";
      break;
    case NodeKind::Affine: {
      j["kind"] = "affine";
      const auto& a = std::get<AffineData>(m->data);
      switch (a.kind) {
        case AffineKind::Translation:
          j["affine_kind"] = "translation";
          j["offset"] = to_json(a.offset);
          break;
        case AffineKind::UniformScale:
          j["affine_kind"] = "uniform-scale";
          j["scale"] = a.scale;
          break;
        case AffineKind::DiagonalScale:
          j["affine_kind"] = "diagonal-scale";
          j["diag"] = to_json(a.diag);
          break;
        case AffineKind::OrthFrame: {
          j["affine_kind"] = "orthogonal-frame";
          Json rows = Json::array();
          for (const Vec& r : a.rows) rows.push_back(to_json(r));
          j["rows"] = rows;
          break;
        }
      }
      break;
    }
    case NodeKind::Spin: {
      j["kind"] = "spin";
      const auto& s = std::get<SpinData>(m->data);
      j["center"] = to_json(s.center);
      j["axis_u"] = to_json(s.u);
      j["axis_v"] = to_json(s.v);
      j["profile"] = profile_to_json(s.profile);
      j["t0"] = s.t0;
      j["inverted"] = s.inverted;
      break;
    }
    case NodeKind::Swap: {
      j["kind"] = "swap";
      const auto& s = std::get<SwapData>(m->data);
      j["x"] = to_json(s.x);
      j["y"] = to_json(s.y);
      j["r"] = s.r;
      j["inverted"] = s.inverted;
      break;
    }
    case NodeKind::Glued: {
      j["kind"] = "glued";
      const auto& g = std::get<GluedData>(m->data);
      Json entries = Json::array();
      for (const GlueEntry& e : g.entries)
        entries.push_back(Json{{"region", to_json(e.region)}, {"map", node_to_json(e.map)}});
      j["entries"] = entries;
      break;
    }
    case NodeKind::Compose: {
      j["kind"] = "compose";
      const auto& c = std::get<ComposeData>(m->data);
      Json maps = Json::array();
      for (const MapExpr& child : c.children) maps.push_back(node_to_json(child));
      j["maps"] = maps;
      break;
    }
  }
  return j;
}

MapExpr node_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw IoError("map: expected an object with 'kind'");
  std::string kind = j.at("kind").get<std::string>();
  int dim = j.at("dim").get<int>();
  auto common = {"kind", "dim", "bound_log2", "lip_log2", "inv_lip_log2"};
  auto with_common = [&](std::initializer_list<const char*> extra) {
    std::vector<const char*> all(common);
    all.insert(all.end(), extra);
    if (!j.is_object()) throw IoError("map: expected an object");
    for (const char* f : all)
      if (!j.contains(f) && std::string(f) != "bound_log2" && std::string(f) != "lip_log2" &&
          std::string(f) != "inv_lip_log2")
        throw IoError("map: missing field '" + std::string(f) + "'");
    for (auto it = j.begin(); it != j.end(); ++it) {
      bool known = false;
      for (const char* f : all) known |= it.key() == f;
      if (!known) throw IoError("map: unknown field '" + it.key() + "'");
    }
  };
  MapExpr out;
  if (kind == "identity") {
    with_common({});
    out = identity_map(dim);
  } else if (kind == "affine") {
    std::string ak = j.at("affine_kind").get<std::string>();
    if (ak == "translation") {
      with_common({"affine_kind", "offset"});
      out = translation(vec_from_json(j.at("offset"), dim));
    } else if (ak == "uniform-scale") {
      with_common({"affine_kind", "scale"});
      out = uniform_scale(dim, num(j.at("scale"), "map.scale"));
    } else if (ak == "diagonal-scale") {
      with_common({"affine_kind", "diag"});
      out = diagonal_scale(vec_from_json(j.at("diag"), dim));
    } else if (ak == "orthogonal-frame") {
      with_common({"affine_kind", "rows"});
      std::vector<Vec> rows;
      for (const Json& r : j.at("rows")) rows.push_back(vec_from_json(r, dim));
      out = orth_frame(std::move(rows));
    } else {
      throw IoError("map: unknown affine kind '" + ak + "'");
    }
  } else if (kind == "spin") {
    with_common({"center", "axis_u", "axis_v", "profile", "t0", "inverted"});
    SpinData s;
    s.center = vec_from_json(j.at("center"), dim);
    s.u = vec_from_json(j.at("axis_u"), dim);
    s.v = vec_from_json(j.at("axis_v"), dim);
    s.profile = profile_from_json(j.at("profile"));
    s.t0 = num(j.at("t0"), "map.t0");
    s.inverted = false;
    MapExpr base = spin_map(s);
    out = j.at("inverted").get<bool>() ? invert(base) : base;
  } else if (kind == "swap") {
    with_common({"x", "y", "r", "inverted"});
    MapExpr base = make_swap_node(vec_from_json(j.at("x"), dim), vec_from_json(j.at("y"), dim),
                                  num(j.at("r"), "map.r"));
    out = j.at("inverted").get<bool>() ? invert(base) : base;
  } else if (kind == "glued") {
    with_common({"entries"});
    std::vector<GlueEntry> entries;
    for (const Json& e : j.at("entries")) {
      expect_fields(e, "glue entry", {"region", "map"});
      entries.push_back({region_from_json(e.at("region")), node_from_json(e.at("map"))});
    }
    out = glue(std::move(entries), dim);
  } else if (kind == "compose") {
    with_common({"maps"});
    std::vector<MapExpr> children;
    for (const Json& c : j.at("maps")) children.push_back(node_from_json(c));
    out = compose(dim, std::move(children));
  } else {
    throw IoError("map: unknown kind '" + kind + "'");
  }
  return out;
}

}  // namespace

Json to_json(const MapExpr& map) {
  Json j = node_to_json(map);
  j["version"] = kSchemaVersion;
  return j;
}

MapExpr map_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("version")) throw IoError("map: missing version");
  expect_version(j, "map");
  Json body = j;
  body.erase("version");
  return node_from_json(body);
}

Json to_json(const LayeredPointMap& data) {
  Json layers = Json::object();
  for (int m = 1; m <= data.H; ++m) {
    Json lst = Json::array();
    for (const auto& [x, img] : data.layers[static_cast<size_t>(m - 1)])
      lst.push_back(Json::array({ivec_to_json(x), to_json(img)}));
    layers[std::to_string(m)] = lst;
  }
  return Json{{"version", kSchemaVersion}, {"dim", data.dim},       {"H", data.H},
              {"L", data.L},               {"layers", layers},      {"window", to_json(data.window)}};
}

LayeredPointMap layered_from_json(const Json& j) {
  expect_fields(j, "layered map", {"version", "dim", "H", "L", "layers", "window"});
  expect_version(j, "layered map");
  LayeredPointMap data;
  data.dim = j.at("dim").get<int>();
  data.H = j.at("H").get<int>();
  data.L = num(j.at("L"), "layered map.L");
  data.window = box_from_json(j.at("window"));
  data.layers.resize(static_cast<size_t>(data.H));
  for (auto it = j.at("layers").begin(); it != j.at("layers").end(); ++it) {
    int m = std::stoi(it.key());
    if (m < 1 || m > data.H) throw IoError("layered map: layer index out of range");
    for (const Json& pr : it.value()) {
      if (!pr.is_array() || pr.size() != 2) throw IoError("layered map: each entry must be [src, image]");
      data.layers[static_cast<size_t>(m - 1)].push_back(
          {ivec_from_json(pr[0], "layered map", data.dim - 1), vec_from_json(pr[1], data.dim)});
    }
  }
  data.validate();
  return data;
}

Json to_json(const SlabSystem& system) {
  Json slabs = Json::array();
  for (const SlabData& s : system.slabs) {
    Json layers = Json::object();
    for (size_t jdx = 0; jdx < s.layers.size(); ++jdx) {
      Json lst = Json::array();
      for (const auto& [x, img] : s.layers[jdx]) lst.push_back(Json::array({ivec_to_json(x), to_json(img)}));
      layers[std::to_string(jdx + 1)] = lst;
    }
    slabs.push_back(Json{{"k", s.k}, {"layers", layers}, {"window", to_json(s.window)}});
  }
  return Json{{"version", kSchemaVersion}, {"dim", system.dim}, {"T", system.T},  {"M1", system.M1},
              {"M2", system.M2},           {"G", to_json(system.G)},              {"slabs", slabs}};
}

SlabSystem slab_system_from_json(const Json& j) {
  expect_fields(j, "slab system", {"version", "dim", "T", "M1", "M2", "G", "slabs"});
  expect_version(j, "slab system");
  SlabSystem sys;
  sys.dim = j.at("dim").get<int>();
  sys.T = j.at("T").get<long long>();
  sys.M1 = num(j.at("M1"), "slab system.M1");
  sys.M2 = num(j.at("M2"), "slab system.M2");
  sys.G = map_from_json(j.at("G"));
  for (const Json& sj : j.at("slabs")) {
    expect_fields(sj, "slab", {"k", "layers", "window"});
    SlabData s;
    s.k = sj.at("k").get<long long>();
    s.window = box_from_json(sj.at("window"));
    s.layers.resize(static_cast<size_t>(sys.T));
    for (auto it = sj.at("layers").begin(); it != sj.at("layers").end(); ++it) {
      long long m = std::stoll(it.key());
      if (m < 1 || m > sys.T) throw IoError("slab: layer index out of range");
      for (const Json& pr : it.value()) {
        if (!pr.is_array() || pr.size() != 2) throw IoError("slab: each entry must be [src, image]");
        s.layers[static_cast<size_t>(m - 1)].push_back(
            {ivec_from_json(pr[0], "slab", sys.dim - 1), vec_from_json(pr[1], sys.dim)});
      }
    }
    sys.slabs.push_back(std::move(s));
  }
  return sys;
}

Json to_json(const AuditReport& rep) {
  return Json{{"version", kSchemaVersion},
              {"map_id", rep.map_id},
              {"sampled_expansion_log2", rep.sampled_expansion_log2},
              {"sampled_contraction_log2", rep.sampled_contraction_log2},
              {"certified_log2", rep.certified_log2},
              {"pairs", rep.pairs},
              {"seed", rep.seed},
              {"max_designated_residual", rep.max_designated_residual},
              {"designated_count", rep.designated_count},
              {"max_support_violation", rep.max_support_violation},
              {"support_samples", rep.support_samples},
              {"bound_ok", rep.bound_ok},
              {"designated_ok", rep.designated_ok},
              {"support_ok", rep.support_ok},
              {"pass", rep.pass()}};
}

Json to_json(const TileDecomposition& td) {
  Json pieces = Json::array();
  for (size_t k = 0; k < td.pieces.size(); ++k)
    pieces.push_back(Json{{"offset", ivec_to_json(td.offsets[k])}, {"piece", to_json(td.pieces[k])}});
  return Json{{"version", kSchemaVersion}, {"l", td.l}, {"T", td.T}, {"pieces", pieces}};
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw IoError("cannot parse '" + path + "': " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << dump_json(j);
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace bilip
