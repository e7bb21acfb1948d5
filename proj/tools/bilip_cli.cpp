// Command-line surface: point-set generation, the construction pipelines,
// verification and SVG rendering. All I/O uses the JSON schemas from
// json_io; exit codes: 0 success, 1 validation failure, 2 I/O failure.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "bilip/json_io.hpp"
#include "bilip/rng.hpp"
#include "bilip/svg.hpp"
#include "bilip/verify.hpp"

namespace {

using namespace bilip;

Box parse_window(const std::string& text, int dim) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
  require(static_cast<int>(vals.size()) == 2 * dim, "window must list lo then hi coordinates (2*dim values)");
  Vec lo(dim), hi(dim);
  for (int i = 0; i < dim; ++i) {
    lo[i] = vals[static_cast<size_t>(i)];
    hi[i] = vals[static_cast<size_t>(i + dim)];
  }
  return Box(lo, hi);
}

SeparatedNet generate_net(int dim, double sep, const Box& window, uint64_t seed) {
  require(sep > 0, "gen-net: separation must be positive");
  Rng rng(seed);
  std::vector<Vec> pts;
  int failures = 0;
  const int max_failures = 2000;
  while (failures < max_failures) {
    Vec cand = rng.in_box(window);
    bool ok = true;
    for (const Vec& p : pts)
      if (p.dist(cand) < sep) {
        ok = false;
        break;
      }
    if (ok) {
      pts.push_back(cand);
      failures = 0;
    } else {
      ++failures;
    }
  }
  require(pts.size() >= 2, "gen-net: window too small for the requested separation");
  NetConstants nc = net_constants(pts, window, sep / 8.0);
  SeparatedNet net;
  net.dim = dim;
  net.points = std::move(pts);
  net.sep = nc.sep;
  net.cover = nc.cover;
  net.window = window;
  net.validate();
  return net;
}

int run(int argc, char** argv) {
  CLI::App app{"constructive bilipschitz transformations with certified distortion bounds"};
  app.require_subcommand(1);

  // gen-net
  auto* gen = app.add_subcommand("gen-net", "sample a separated net over a window");
  int gen_dim = 2;
  double gen_sep = 1.0;
  std::string gen_window = "0,0,10,10";
  uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--dim", gen_dim, "ambient dimension")->check(CLI::Range(2, kMaxDim));
  gen->add_option("--sep", gen_sep, "minimum separation");
  gen->add_option("--window", gen_window, "lo coords then hi coords, comma separated");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--out", gen_out, "output file (stdout when omitted)");

  // round-net
  auto* rn = app.add_subcommand("round-net", "round a separated net into the integer lattice");
  std::string rn_in, rn_out, rn_cert;
  rn->add_option("--in", rn_in, "SeparatedNet JSON")->required();
  rn->add_option("--out", rn_out, "output MapExpr JSON")->required();
  rn->add_option("--cert", rn_cert, "optional certificate JSON");

  // extend-lattice
  auto* ex = app.add_subcommand("extend-lattice", "extend a lattice point map to a window");
  std::string ex_in, ex_out, ex_window;
  double ex_lambda = 1.0;
  ex->add_option("--in", ex_in, "PointMap JSON on a subset of Z^d")->required();
  ex->add_option("--lambda", ex_lambda, "covering radius of the sources")->required();
  ex->add_option("--window", ex_window, "lattice window, lo then hi")->required();
  ex->add_option("--out", ex_out, "output PointMap JSON")->required();

  // route-perm
  auto* rp = app.add_subcommand("route-perm", "route a grid permutation into transposition rounds");
  std::string rp_in, rp_out;
  long long rp_S = 0;
  rp->add_option("--in", rp_in, "LatticePerm JSON with coordinates in [1, S]^l")->required();
  rp->add_option("--grid-size", rp_S, "side length S")->required();
  rp->add_option("--out", rp_out, "output RoutingSchedule JSON")->required();

  // decompose-perm
  auto* dp = app.add_subcommand("decompose-perm", "tile-decompose a bounded-displacement permutation");
  std::string dp_in, dp_out;
  long long dp_T = 0;
  dp->add_option("--in", dp_in, "LatticePerm JSON on Z^l")->required();
  dp->add_option("--tile", dp_T, "tile size T (>= displacement)")->required();
  dp->add_option("--out", dp_out, "output decomposition JSON")->required();

  // build-upsilon
  auto* bu = app.add_subcommand("build-upsilon", "realize a lattice permutation inside a slab");
  std::string bu_in, bu_out;
  long long bu_T = 0;
  double bu_m = 0.0;
  bu->add_option("--in", bu_in, "LatticePerm JSON (scale_N taken from the file)")->required();
  bu->add_option("--T", bu_T, "displacement bound")->required();
  bu->add_option("--height", bu_m, "designated hyperplane height m");
  bu->add_option("--out", bu_out, "output MapExpr JSON")->required();

  // thread
  auto* th = app.add_subcommand("thread", "interpolate layered grid data through a slab");
  std::string th_in, th_out;
  th->add_option("--in", th_in, "LayeredPointMap JSON")->required();
  th->add_option("--out", th_out, "output MapExpr JSON")->required();

  // glue-slabs
  auto* gs = app.add_subcommand("glue-slabs", "thread and glue a periodic slab system");
  std::string gs_in, gs_out;
  gs->add_option("--system", gs_in, "SlabSystem JSON")->required();
  gs->add_option("--out", gs_out, "output MapExpr JSON")->required();

  // verify
  auto* vf = app.add_subcommand("verify", "sampled distortion audit of a map");
  std::string vf_map, vf_region, vf_out, vf_designated;
  int vf_pairs = 10000;
  uint64_t vf_seed = 7;
  vf->add_option("--map", vf_map, "MapExpr JSON")->required();
  vf->add_option("--region", vf_region, "sample box, lo then hi")->required();
  vf->add_option("--pairs", vf_pairs, "number of sampled pairs");
  vf->add_option("--seed", vf_seed, "sampling seed");
  vf->add_option("--designated", vf_designated, "optional PointMap JSON of designated pairs");
  vf->add_option("--out", vf_out, "report file (stdout when omitted)");

  // render
  auto* rd = app.add_subcommand("render", "render a planar map as an SVG grid deformation");
  std::string rd_map, rd_out, rd_viewport, rd_designated;
  double rd_pitch = 1.0;
  rd->add_option("--map", rd_map, "MapExpr JSON (d = 2)")->required();
  rd->add_option("--pitch", rd_pitch, "reference grid spacing");
  rd->add_option("--viewport", rd_viewport, "view box, lo then hi")->required();
  rd->add_option("--designated", rd_designated, "optional PointMap JSON drawn as arrows");
  rd->add_option("--out", rd_out, "output SVG file (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  auto emit = [](const std::string& path, const std::string& text) {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
  };

  if (gen->parsed()) {
    Box window = parse_window(gen_window, gen_dim);
    SeparatedNet net = generate_net(gen_dim, gen_sep, window, gen_seed);
    emit(gen_out, dump_json(to_json(net)));
  } else if (rn->parsed()) {
    SeparatedNet net = net_from_json(load_json_file(rn_in));
    RoundNetResult res = round_net_to_lattice(net);
    save_json_file(rn_out, to_json(res.phi));
    if (!rn_cert.empty()) {
      Json cert{{"version", kSchemaVersion},
                {"K", res.cert.K},
                {"scale_used", res.cert.scale_used},
                {"images", to_json(res.images)},
                {"swap_family", to_json(res.cert.swap_family)}};
      save_json_file(rn_cert, cert);
    }
  } else if (ex->parsed()) {
    PointMap f = point_map_from_json(load_json_file(ex_in));
    Box window = parse_window(ex_window, f.dim);
    ExtendResult res = extend_to_lattice(f, ex_lambda, window);
    save_json_file(ex_out, to_json(res.F));
  } else if (rp->parsed()) {
    LatticePerm perm = lattice_perm_from_json(load_json_file(rp_in));
    std::vector<std::pair<IVec, IVec>> moved(perm.pairs.begin(), perm.pairs.end());
    RoutingSchedule sched = route_grid(perm.dim, rp_S, moved);
    sched.N = perm.N;
    std::string why;
    require(schedule_oracle(perm, sched, &why), "internal: schedule fails its oracle: " + why);
    save_json_file(rp_out, to_json(sched));
  } else if (dp->parsed()) {
    LatticePerm perm = lattice_perm_from_json(load_json_file(dp_in));
    TileDecomposition td = tile_decompose(perm, dp_T);
    save_json_file(dp_out, to_json(td));
  } else if (bu->parsed()) {
    LatticePerm perm = lattice_perm_from_json(load_json_file(bu_in));
    UpsilonResult res = build_upsilon(perm, bu_T, bu_m);
    save_json_file(bu_out, to_json(res.map));
  } else if (th->parsed()) {
    LayeredPointMap data = layered_from_json(load_json_file(th_in));
    ThreadResult res = thread_extension(data);
    save_json_file(th_out, to_json(res.map));
  } else if (gs->parsed()) {
    SlabSystem system = slab_system_from_json(load_json_file(gs_in));
    GlueSlabsResult res = glue_slabs(system);
    save_json_file(gs_out, to_json(res.map));
  } else if (vf->parsed()) {
    MapExpr m = map_from_json(load_json_file(vf_map));
    Box region = parse_window(vf_region, m->dim);
    std::vector<Vec> anchors;
    std::vector<PointMapPair> designated;
    if (!vf_designated.empty()) {
      PointMap pm = point_map_from_json(load_json_file(vf_designated));
      for (const auto& [s, img] : pm.pairs) {
        anchors.push_back(s);
        designated.push_back({s, img});
      }
    }
    AuditReport rep = sampled_bilip(m, region, vf_pairs, vf_seed, anchors);
    rep.map_id = vf_map;
    if (!designated.empty()) audit_designated(rep, m, designated);
    emit(vf_out, dump_json(to_json(rep)));
    if (!rep.pass()) return 1;
  } else if (rd->parsed()) {
    RenderSpec spec;
    spec.map = map_from_json(load_json_file(rd_map));
    spec.pitch = rd_pitch;
    spec.viewport = parse_window(rd_viewport, 2);
    if (!rd_designated.empty()) {
      PointMap pm = point_map_from_json(load_json_file(rd_designated));
      spec.designated = pm.pairs;
    }
    emit(rd_out, render_grid(spec));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const bilip::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const bilip::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
