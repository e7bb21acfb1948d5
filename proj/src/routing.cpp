#include "bilip/routing.hpp"

#include <algorithm>
#include <set>

#include "bilip/swaps.hpp"

namespace bilip {

namespace {
using PairList = std::vector<std::pair<IVec, IVec>>;

__int128 sq_units(const IVec& a, const IVec& b) {
  __int128 s = 0;
  for (int i = 0; i < a.dim(); ++i) {
    __int128 d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

long long ipow(long long base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) {
    internal_assert(r <= (1ll << 62) / std::max(base, 1ll), "tile capacity count overflows");
    r *= base;
  }
  return r;
}
}  // namespace

void LatticePerm::validate() const {
  require(dim >= 1 && dim <= kMaxDim, "lattice permutation: dimension out of range");
  require(N >= 1, "lattice permutation: N must be a positive integer");
  std::set<IVec> src, dst;
  for (const auto& [s, d] : pairs) {
    require(s.dim() == dim && d.dim() == dim, "lattice permutation: pair dimension mismatch");
    require(src.insert(s).second, "lattice permutation: duplicate source");
    require(dst.insert(d).second, "lattice permutation: duplicate image");
  }
  require(src == dst, "lattice permutation: not a bijection of its support");
}

double LatticePerm::displacement() const {
  double m = 0;
  for (const auto& [s, d] : pairs) m = std::max(m, (d - s).norm() / static_cast<double>(N));
  return m;
}

long long LatticePerm::displacement_units_sq_max() const {
  __int128 m = 0;
  for (const auto& [s, d] : pairs) m = std::max(m, sq_units(s, d));
  internal_assert(m <= (__int128)1 << 126, "displacement overflow");
  return static_cast<long long>(std::min<__int128>(m, (__int128)9223372036854775807ll));
}

std::map<IVec, IVec> LatticePerm::as_map() const {
  std::map<IVec, IVec> m;
  for (const auto& [s, d] : pairs)
    if (s != d) m[s] = d;
  return m;
}

// ---------------------------------------------------------------------------
// Path routing (odd-even transposition)

RoutingSchedule route_path(long long S, const std::vector<std::pair<long long, long long>>& moved) {
  require(S >= 1, "route_path: S must be positive");
  {
    std::set<long long> src, dst;
    for (const auto& [s, d] : moved) {
      require(s >= 1 && s <= S && d >= 1 && d <= S, "route_path: position out of range");
      require(src.insert(s).second, "route_path: not a bijection (duplicate source)");
      require(dst.insert(d).second, "route_path: not a bijection (duplicate image)");
    }
    require(src == dst, "route_path: not a bijection of [S]");
  }

  // Sparse arrangement: key(j) = destination of the pebble at slot j;
  // positions not in the map carry their own index.
  std::map<long long, long long> key;
  std::set<long long> active;
  for (const auto& [s, d] : moved) {
    if (s == d) continue;
    key[s] = d;
    active.insert(s);
  }
  auto key_at = [&](long long j) {
    auto it = key.find(j);
    return it == key.end() ? j : it->second;
  };
  auto set_key = [&](long long j, long long v) {
    if (v == j) {
      key.erase(j);
      active.erase(j);
    } else {
      key[j] = v;
      active.insert(j);
    }
  };

  RoutingSchedule sched;
  sched.dim = 1;
  sched.N = 1;
  long long round = 0;
  size_t last_nonempty = 0;
  while (!active.empty()) {
    ++round;
    internal_assert(round <= S, "odd-even routing exceeded S rounds");
    long long parity = round % 2 == 1 ? 1 : 0;  // first slot of compared pairs
    std::set<long long> starts;
    for (long long j : active) {
      for (long long a : {j - 1, j}) {
        if (a >= 1 && a + 1 <= S && (a % 2) == parity) starts.insert(a);
      }
    }
    std::vector<std::pair<IVec, IVec>> swaps;
    for (long long a : starts) {
      long long ka = key_at(a), kb = key_at(a + 1);
      if (ka > kb) {
        set_key(a, kb);
        set_key(a + 1, ka);
        swaps.push_back({IVec{a}, IVec{a + 1}});
      }
    }
    sched.rounds.push_back(std::move(swaps));
    if (!sched.rounds.back().empty()) last_nonempty = sched.rounds.size();
  }
  sched.rounds.resize(last_nonempty);
  return sched;
}

// ---------------------------------------------------------------------------
// Edge coloring of regular bipartite multigraphs

std::vector<std::vector<int>> edge_color_regular_bipartite(const BipartiteMultigraph& g, int k) {
  require(g.n >= 1, "edge coloring: empty vertex set");
  require(k >= 1, "edge coloring: degree must be positive");
  require(static_cast<long long>(g.edges.size()) == static_cast<long long>(g.n) * k,
          "edge coloring: edge count does not match a k-regular graph");
  std::vector<int> degL(static_cast<size_t>(g.n), 0), degR(static_cast<size_t>(g.n), 0);
  for (const auto& [u, v] : g.edges) {
    require(u >= 0 && u < g.n && v >= 0 && v < g.n, "edge coloring: vertex out of range");
    ++degL[static_cast<size_t>(u)];
    ++degR[static_cast<size_t>(v)];
  }
  for (int i = 0; i < g.n; ++i)
    require(degL[static_cast<size_t>(i)] == k && degR[static_cast<size_t>(i)] == k,
            "edge coloring: graph is not k-regular");

  std::vector<bool> used(g.edges.size(), false);
  std::vector<std::vector<int>> adj(static_cast<size_t>(g.n));  // remaining edge indices per left vertex
  for (size_t e = 0; e < g.edges.size(); ++e) adj[static_cast<size_t>(g.edges[e].first)].push_back(static_cast<int>(e));

  std::vector<std::vector<int>> classes;
  for (int c = 0; c < k; ++c) {
    std::vector<int> matchL(static_cast<size_t>(g.n), -1);  // left -> edge index
    std::vector<int> matchR(static_cast<size_t>(g.n), -1);  // right -> edge index
    // Seed with available diagonal edges; keeps untouched columns untouched.
    for (int u = 0; u < g.n; ++u) {
      for (int e : adj[static_cast<size_t>(u)]) {
        if (used[static_cast<size_t>(e)]) continue;
        int v = g.edges[static_cast<size_t>(e)].second;
        if (v == u && matchR[static_cast<size_t>(v)] < 0) {
          matchL[static_cast<size_t>(u)] = e;
          matchR[static_cast<size_t>(v)] = e;
          break;
        }
      }
    }
    // Augment the rest (Kuhn's algorithm).
    std::vector<char> visited(static_cast<size_t>(g.n), 0);
    auto try_augment = [&](auto&& self, int u) -> bool {
      for (int e : adj[static_cast<size_t>(u)]) {
        if (used[static_cast<size_t>(e)]) continue;
        int v = g.edges[static_cast<size_t>(e)].second;
        if (visited[static_cast<size_t>(v)]) continue;
        visited[static_cast<size_t>(v)] = 1;
        int other = matchR[static_cast<size_t>(v)];
        if (other < 0 || self(self, g.edges[static_cast<size_t>(other)].first)) {
          matchL[static_cast<size_t>(u)] = e;
          matchR[static_cast<size_t>(v)] = e;
          return true;
        }
      }
      return false;
    };
    for (int u = 0; u < g.n; ++u) {
      if (matchL[static_cast<size_t>(u)] >= 0) continue;
      std::fill(visited.begin(), visited.end(), 0);
      bool ok = try_augment(try_augment, u);
      internal_assert(ok, "regular bipartite multigraph admits a perfect matching (Hall)");
    }
    std::vector<int> cls;
    cls.reserve(static_cast<size_t>(g.n));
    for (int u = 0; u < g.n; ++u) {
      int e = matchL[static_cast<size_t>(u)];
      used[static_cast<size_t>(e)] = true;
      cls.push_back(e);
    }
    classes.push_back(std::move(cls));
  }
  return classes;
}

// ---------------------------------------------------------------------------
// Grid routing

namespace {
IVec drop_last(const IVec& p) {
  IVec r(p.dim() - 1);
  for (int i = 0; i + 1 < p.dim(); ++i) r[i] = p[i];
  return r;
}

IVec with_last(const IVec& p, long long last) {
  IVec r(p.dim() + 1);
  for (int i = 0; i < p.dim(); ++i) r[i] = p[i];
  r[p.dim()] = last;
  return r;
}
}  // namespace

RoutingSchedule route_grid(int l, long long S, const PairList& moved) {
  require(l >= 1 && l <= kMaxDim, "route_grid: dimension out of range");
  require(S >= 1, "route_grid: S must be positive");
  {
    std::set<IVec> src, dst;
    for (const auto& [s, d] : moved) {
      require(s.dim() == l && d.dim() == l, "route_grid: pair dimension mismatch");
      for (int i = 0; i < l; ++i)
        require(s[i] >= 1 && s[i] <= S && d[i] >= 1 && d[i] <= S, "route_grid: coordinate out of range");
      require(src.insert(s).second, "route_grid: not a bijection (duplicate source)");
      require(dst.insert(d).second, "route_grid: not a bijection (duplicate image)");
    }
    require(src == dst, "route_grid: not a bijection of [S]^l");
  }

  RoutingSchedule sched;
  sched.dim = l;
  sched.N = 1;
  if (l == 1) {
    std::vector<std::pair<long long, long long>> m1;
    for (const auto& [s, d] : moved) m1.push_back({s[0], d[0]});
    return route_path(S, m1);
  }

  std::map<IVec, IVec> dest;
  for (const auto& [s, d] : moved)
    if (s != d) dest[s] = d;
  if (dest.empty()) return sched;

  // Dirty columns: those sending or receiving any moved pebble. Clean
  // columns never appear in any phase.
  std::set<IVec> dirty_set;
  for (const auto& [s, d] : dest) {
    dirty_set.insert(drop_last(s));
    dirty_set.insert(drop_last(d));
  }
  std::vector<IVec> dirty(dirty_set.begin(), dirty_set.end());
  std::map<IVec, int> col_index;
  for (size_t i = 0; i < dirty.size(); ++i) col_index[dirty[i]] = static_cast<int>(i);
  const int D = static_cast<int>(dirty.size());

  // Column-destination multigraph: one edge per pebble of a dirty column.
  struct Pebble {
    IVec src;
    IVec dst;
  };
  BipartiteMultigraph graph;
  graph.n = D;
  std::vector<Pebble> pebbles;
  for (const IVec& u : dirty) {
    for (long long i = 1; i <= S; ++i) {
      IVec p = with_last(u, i);
      auto it = dest.find(p);
      IVec q = it == dest.end() ? p : it->second;
      graph.edges.push_back({col_index[u], col_index[drop_last(q)]});
      pebbles.push_back({p, q});
    }
  }
  require(S <= (1 << 20), "route_grid: S too large for multi-axis routing");
  std::vector<std::vector<int>> classes = edge_color_regular_bipartite(graph, static_cast<int>(S));

  // Assign colors to pebbles: within each (source column, destination
  // column) group the class colors are interchangeable, so give a pebble its
  // own position as color whenever possible (fixed pebbles then never move).
  std::vector<int> color(pebbles.size(), -1);
  std::map<std::pair<int, int>, std::vector<int>> group_colors;  // (u,v) -> colors
  for (size_t c = 0; c < classes.size(); ++c)
    for (int e : classes[c]) group_colors[{graph.edges[static_cast<size_t>(e)].first,
                                            graph.edges[static_cast<size_t>(e)].second}]
        .push_back(static_cast<int>(c));
  std::map<std::pair<int, int>, std::vector<int>> group_pebbles;
  for (size_t i = 0; i < pebbles.size(); ++i) {
    int u = col_index[drop_last(pebbles[i].src)];
    int v = col_index[drop_last(pebbles[i].dst)];
    group_pebbles[{u, v}].push_back(static_cast<int>(i));
  }
  for (auto& [key, cols] : group_colors) {
    auto& pebs = group_pebbles[key];
    internal_assert(cols.size() == pebs.size(), "group color count mismatch");
    std::sort(cols.begin(), cols.end());
    std::vector<char> col_used(cols.size(), 0);
    std::vector<int> unplaced;
    for (int pi : pebs) {
      long long pos = pebbles[static_cast<size_t>(pi)].src[l - 1];  // 1-based
      auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<int>(pos - 1));
      if (it != cols.end() && *it == pos - 1 && !col_used[static_cast<size_t>(it - cols.begin())]) {
        col_used[static_cast<size_t>(it - cols.begin())] = 1;
        color[static_cast<size_t>(pi)] = static_cast<int>(pos - 1);
      } else {
        unplaced.push_back(pi);
      }
    }
    size_t next = 0;
    for (int pi : unplaced) {
      while (col_used[next]) ++next;
      col_used[next] = 1;
      color[static_cast<size_t>(pi)] = cols[next];
    }
  }

  // Phase 1: inside each column, send the pebble with color c to slot c+1.
  std::vector<std::vector<std::pair<IVec, IVec>>> phase1;
  for (const IVec& u : dirty) {
    std::vector<std::pair<long long, long long>> m1;
    for (long long i = 1; i <= S; ++i) {
      size_t pid = static_cast<size_t>(col_index[u]) * static_cast<size_t>(S) + static_cast<size_t>(i - 1);
      long long target = color[pid] + 1;
      if (target != i) m1.push_back({i, target});
    }
    RoutingSchedule rs = route_path(S, m1);
    if (rs.rounds.size() > phase1.size()) phase1.resize(rs.rounds.size());
    for (size_t t = 0; t < rs.rounds.size(); ++t)
      for (const auto& [a, b] : rs.rounds[t])
        phase1[t].push_back({with_last(u, a[0]), with_last(u, b[0])});
  }
  internal_assert(static_cast<long long>(phase1.size()) <= S, "phase 1 exceeded S rounds");

  // Phase 2: inside each slice {last = c+1}, send each pebble to its
  // destination column. Recurses on l-1 dimensions.
  std::vector<std::vector<std::pair<IVec, IVec>>> phase2;
  for (long long c = 0; c < S; ++c) {
    PairList m2;
    for (int ui = 0; ui < D; ++ui) {
      // after phase 1 the pebble with color c in column ui sits at slot c+1
      size_t base = static_cast<size_t>(ui) * static_cast<size_t>(S);
      int pid = -1;
      for (long long i = 0; i < S; ++i) {
        if (color[base + static_cast<size_t>(i)] == c) {
          pid = static_cast<int>(base + static_cast<size_t>(i));
          break;
        }
      }
      internal_assert(pid >= 0, "color missing from column");
      IVec from = dirty[static_cast<size_t>(ui)];
      IVec to = drop_last(pebbles[static_cast<size_t>(pid)].dst);
      if (!(from == to)) m2.push_back({from, to});
    }
    RoutingSchedule rs = route_grid(l - 1, S, m2);
    if (rs.rounds.size() > phase2.size()) phase2.resize(rs.rounds.size());
    for (size_t t = 0; t < rs.rounds.size(); ++t)
      for (const auto& [a, b] : rs.rounds[t])
        phase2[t].push_back({with_last(a, c + 1), with_last(b, c + 1)});
  }
  internal_assert(static_cast<long long>(phase2.size()) <= routing_round_bound(l - 1, S),
                  "phase 2 exceeded its round bound");

  // Phase 3: inside each column, place pebbles at their final slots.
  std::vector<std::vector<std::pair<IVec, IVec>>> phase3;
  std::map<std::pair<IVec, long long>, long long> final_slot;  // (dest column, color) -> final last coord
  for (size_t i = 0; i < pebbles.size(); ++i)
    final_slot[{drop_last(pebbles[i].dst), color[i]}] = pebbles[i].dst[l - 1];
  for (const IVec& u : dirty) {
    std::vector<std::pair<long long, long long>> m3;
    for (long long c = 0; c < S; ++c) {
      auto it = final_slot.find({u, static_cast<long long>(c)});
      internal_assert(it != final_slot.end(), "destination column misses a color");
      if (it->second != c + 1) m3.push_back({c + 1, it->second});
    }
    RoutingSchedule rs = route_path(S, m3);
    if (rs.rounds.size() > phase3.size()) phase3.resize(rs.rounds.size());
    for (size_t t = 0; t < rs.rounds.size(); ++t)
      for (const auto& [a, b] : rs.rounds[t])
        phase3[t].push_back({with_last(u, a[0]), with_last(u, b[0])});
  }
  internal_assert(static_cast<long long>(phase3.size()) <= S, "phase 3 exceeded S rounds");

  for (auto& ph : {std::ref(phase1), std::ref(phase2), std::ref(phase3)})
    for (auto& round : ph.get()) sched.rounds.push_back(std::move(round));
  internal_assert(static_cast<long long>(sched.rounds.size()) <= routing_round_bound(l, S),
                  "grid routing exceeded (2l-1)S rounds");
  return sched;
}

// ---------------------------------------------------------------------------
// Tile decomposition

IVec TileDecomposition::apply(const IVec& doubled) const {
  IVec p = doubled;
  for (const LatticePerm& piece : pieces) {
    for (const auto& [s, d] : piece.pairs) {
      if (s == p) {
        p = d;
        break;
      }
    }
  }
  return p;
}

TileDecomposition tile_decompose(const LatticePerm& phi, long long T) {
  phi.validate();
  require(phi.N == 1, "tile_decompose expects an integer lattice permutation");
  require(T >= 1, "tile_decompose: T must be a positive integer");
  const int l = phi.dim;
  {
    __int128 t2 = static_cast<__int128>(T) * T;
    for (const auto& [s, d] : phi.pairs)
      require(sq_units(s, d) <= t2, "tile_decompose: displacement exceeds T");
  }

  auto tile_of_int = [&](const IVec& a) {
    IVec z(l);
    for (int i = 0; i < l; ++i) z[i] = floor_div(a[i], T);
    return z;
  };
  auto tile_of_doubled = [&](const IVec& b) {
    IVec z(l);
    for (int i = 0; i < l; ++i) z[i] = floor_div(b[i], 2 * T);
    return z;
  };

  // Lexicographic enumeration of the offsets {-1,0,1}^l.
  const int npieces = static_cast<int>(ipow(3, l));
  std::vector<IVec> offsets;
  for (int k = 0; k < npieces; ++k) {
    IVec p(l);
    int rem = k;
    for (int i = l - 1; i >= 0; --i) {
      p[i] = rem % 3 - 1;
      rem /= 3;
    }
    offsets.push_back(p);
  }
  auto piece_of_tile = [&](const IVec& z) {
    // z = 3w + p with p in {-1,0,1}^l; recover the lexicographic index of p.
    int k = 0;
    for (int i = 0; i < l; ++i) {
      long long r = ((z[i] % 3) + 3) % 3;
      long long pi = r == 2 ? -1 : r;
      k = k * 3 + static_cast<int>(pi + 1);
    }
    return k;
  };

  std::map<IVec, IVec> moved = phi.as_map();

  // Bookkeeping for the capacity inequality and the parking groups.
  std::map<IVec, long long> moved_into, moved_src_in;
  std::map<IVec, std::vector<IVec>> park;  // tile z -> domain points of iota
  for (const auto& [src, dst] : moved) {
    IVec z = tile_of_int(dst);
    ++moved_into[z];
    ++moved_src_in[tile_of_int(src)];
    if (tile_of_int(src) != z) park[z].push_back(src);
  }
  // Capacity: half-lattice spots minus integer points of a tile must cover
  // |Delta^{-1}(z)| = (moved points landing in z) + (unmoved points of z).
  {
    const long long cap = ipow(2 * T, l) - ipow(T, l);
    const long long tile_points = ipow(T, l);
    std::set<IVec> touched;
    for (const auto& kv : moved_into) touched.insert(kv.first);
    for (const auto& kv : moved_src_in) touched.insert(kv.first);
    for (const IVec& z : touched) {
      long long into = moved_into.count(z) ? moved_into[z] : 0;
      long long out_src = moved_src_in.count(z) ? moved_src_in[z] : 0;
      internal_assert(into == out_src, "bijection tile balance violated");
      long long delta_preimage = into + (tile_points - out_src);
      internal_assert(cap >= delta_preimage, "tile capacity inequality violated");
      long long parked = park.count(z) ? static_cast<long long>(park[z].size()) : 0;
      internal_assert(parked <= cap, "parking spots would be exhausted");
    }
  }

  TileDecomposition td;
  td.l = l;
  td.T = T;
  td.offsets = offsets;
  td.pieces.assign(static_cast<size_t>(npieces), LatticePerm{});
  for (auto& piece : td.pieces) {
    piece.dim = l;
    piece.N = 2;
  }

  // Parking pieces: swap each domain point with an unused half-lattice spot
  // of its destination tile, in lexicographic order.
  for (auto& [z, dom] : park) {
    std::sort(dom.begin(), dom.end());
    int k = piece_of_tile(z);
    LatticePerm& piece = td.pieces[static_cast<size_t>(k)];
    // Lex-ordered generator over the doubled tile skipping integer points.
    IVec lo(l), cur(l);
    for (int i = 0; i < l; ++i) lo[i] = 2 * T * z[i];
    cur = lo;
    auto advance = [&]() {
      int ax = l - 1;
      while (ax >= 0) {
        if (++cur[ax] <= lo[ax] + 2 * T - 1) return true;
        cur[ax] = lo[ax];
        --ax;
      }
      return false;
    };
    auto is_integer_point = [&](const IVec& b) {
      for (int i = 0; i < l; ++i)
        if (b[i] % 2 != 0) return false;
      return true;
    };
    bool have = true;
    for (const IVec& src : dom) {
      while (have && is_integer_point(cur)) have = advance();
      internal_assert(have, "parking spots exhausted");
      IVec spot = cur;
      have = advance();
      IVec dsrc(l);
      for (int i = 0; i < l; ++i) dsrc[i] = 2 * src[i];
      piece.pairs.push_back({dsrc, spot});
      piece.pairs.push_back({spot, dsrc});
    }
  }

  // Where each moved point sits after the parking pieces.
  std::map<IVec, IVec> after;  // doubled src -> doubled position
  for (const auto& [src, dst] : moved) {
    IVec b(l);
    for (int i = 0; i < l; ++i) b[i] = 2 * src[i];
    IVec pos = b;
    for (const LatticePerm& piece : td.pieces) {
      for (const auto& [s, d] : piece.pairs) {
        if (s == pos) {
          pos = d;
          break;
        }
      }
    }
    internal_assert(tile_of_doubled(pos) == tile_of_int(dst), "parked point missed its destination tile");
    after[b] = pos;
  }

  // Fix-up permutation inside each destination tile, composed onto the last
  // parking piece.
  std::map<IVec, IVec> tau;
  {
    std::map<IVec, std::vector<std::pair<IVec, IVec>>> per_tile;  // z -> (current, target) doubled
    for (const auto& [src, dst] : moved) {
      IVec b(l), t(l);
      for (int i = 0; i < l; ++i) {
        b[i] = 2 * src[i];
        t[i] = 2 * dst[i];
      }
      per_tile[tile_of_int(dst)].push_back({after[b], t});
    }
    for (auto& [z, lst] : per_tile) {
      std::set<IVec> cur_set, tgt_set;
      for (const auto& [c, t] : lst) {
        cur_set.insert(c);
        tgt_set.insert(t);
      }
      for (const auto& [c, t] : lst)
        if (c != t) tau[c] = t;
      // Leftover targets displaced by tau map back to leftover sources.
      std::vector<IVec> lhs, rhs;
      for (const IVec& t : tgt_set)
        if (!cur_set.count(t)) lhs.push_back(t);
      for (const IVec& c : cur_set)
        if (!tgt_set.count(c)) rhs.push_back(c);
      internal_assert(lhs.size() == rhs.size(), "tile fix-up is not balanced");
      std::sort(lhs.begin(), lhs.end());
      std::sort(rhs.begin(), rhs.end());
      for (size_t i = 0; i < lhs.size(); ++i)
        if (lhs[i] != rhs[i]) tau[lhs[i]] = rhs[i];
    }
  }
  {
    LatticePerm& last = td.pieces[static_cast<size_t>(npieces - 1)];
    std::map<IVec, IVec> sig = last.as_map();
    std::map<IVec, IVec> comp;
    std::set<IVec> supp;
    for (const auto& [s, d] : sig) supp.insert(s);
    for (const auto& [s, d] : tau) supp.insert(s);
    for (const IVec& s : supp) {
      IVec mid = sig.count(s) ? sig[s] : s;
      IVec out = tau.count(mid) ? tau[mid] : mid;
      if (out != s) comp[s] = out;
    }
    last.pairs.clear();
    for (const auto& [s, d] : comp) last.pairs.push_back({s, d});
  }

  // Validations: each piece is a permutation, local to its coarse tiling.
  for (int k = 0; k < npieces; ++k) {
    const LatticePerm& piece = td.pieces[static_cast<size_t>(k)];
    piece.validate();
    const IVec& p = offsets[static_cast<size_t>(k)];
    for (const auto& [a, b] : piece.pairs) {
      IVec wa(l), wb(l);
      for (int i = 0; i < l; ++i) {
        wa[i] = floor_div(a[i] - 2 * T * p[i] + 2 * T, 6 * T);
        wb[i] = floor_div(b[i] - 2 * T * p[i] + 2 * T, 6 * T);
      }
      internal_assert(wa == wb, "piece moves a point across coarse tiles");
    }
  }
  // Composition restricted to Z^l equals phi.
  for (const auto& [src, dst] : moved) {
    IVec b(l), t(l);
    for (int i = 0; i < l; ++i) {
      b[i] = 2 * src[i];
      t[i] = 2 * dst[i];
    }
    internal_assert(td.apply(b) == t, "tile decomposition does not compose to phi");
  }
  return td;
}

// ---------------------------------------------------------------------------
// Bilipschitz realizers

RealizedTilePerm realize_tile_perm(const LatticePerm& sigma, long long S) {
  sigma.validate();
  require(sigma.N == 1, "realize_tile_perm expects an integer lattice permutation");
  require(S >= 1, "realize_tile_perm: S must be positive");
  const int l = sigma.dim;
  const int d = l + 1;
  require(d >= 2 && d <= kMaxDim, "realize_tile_perm: ambient dimension out of range");

  auto tile_of = [&](const IVec& a) {
    IVec z(l);
    for (int i = 0; i < l; ++i) z[i] = floor_div(a[i], S);
    return z;
  };
  std::map<IVec, PairList> per_tile;
  for (const auto& [s, dpt] : sigma.pairs) {
    if (s == dpt) continue;
    require(tile_of(s) == tile_of(dpt), "realize_tile_perm: tile-locality violation");
    per_tile[tile_of(s)].push_back({s, dpt});
  }

  RealizedTilePerm out;
  out.cert_log2 = 4.0 * static_cast<double>(routing_round_bound(l, S));
  if (per_tile.empty()) {
    out.map = identity_map(d);
    return out;
  }

  std::vector<GlueEntry> entries;
  for (const auto& [z, pairs] : per_tile) {
    PairList local;
    for (const auto& [a, b] : pairs) {
      IVec la(l), lb(l);
      for (int i = 0; i < l; ++i) {
        la[i] = a[i] - S * z[i] + 1;
        lb[i] = b[i] - S * z[i] + 1;
      }
      local.push_back({la, lb});
    }
    RoutingSchedule rs = route_grid(l, S, local);
    out.max_rounds = std::max<long long>(out.max_rounds, static_cast<long long>(rs.rounds.size()));

    std::vector<MapExpr> gammas;
    for (const auto& round : rs.rounds) {
      if (round.empty()) continue;
      SwapFamily fam;
      fam.dim = d;
      for (const auto& [a, b] : round) {
        SwapSpec spec;
        spec.x = Vec(d);
        spec.y = Vec(d);
        for (int i = 0; i < l; ++i) {
          spec.x[i] = static_cast<double>(a[i] + S * z[i] - 1);
          spec.y[i] = static_cast<double>(b[i] + S * z[i] - 1);
        }
        spec.x[l] = 0.0;
        spec.y[l] = 0.0;
        spec.r = 0.5;
        fam.specs.push_back(spec);
      }
      gammas.push_back(simultaneous_swaps(fam));
    }
    if (gammas.empty()) continue;
    MapExpr tile_map = compose(d, std::move(gammas));
    Vec lo(l), hi(l);
    for (int i = 0; i < l; ++i) {
      lo[i] = static_cast<double>(S * z[i]) - 0.5;
      hi[i] = static_cast<double>(S * z[i] + S) - 0.5;
    }
    entries.push_back({Region::tile_column(lo, hi), tile_map});
  }
  if (entries.empty()) {
    out.map = identity_map(d);
    return out;
  }
  out.map = glue(std::move(entries), d);
  internal_assert(out.map->bound.bilip_log2() <= out.cert_log2 + 1e-9,
                  "realized tile permutation exceeds its certified bound");

  // Designated-point exactness.
  for (const auto& [s, dpt] : sigma.pairs) {
    Vec p(d), q(d);
    for (int i = 0; i < l; ++i) {
      p[i] = static_cast<double>(s[i]);
      q[i] = static_cast<double>(dpt[i]);
    }
    p[l] = 0.0;
    q[l] = 0.0;
    internal_assert(evaluate(out.map, p).dist(q) <= 1e-9, "realized tile permutation misses a designated point");
  }
  return out;
}

UpsilonResult build_upsilon(const LatticePerm& sigma, long long T, double m) {
  sigma.validate();
  require(T >= 1, "build_upsilon: T must be a positive integer");
  require(std::isfinite(m), "build_upsilon: non-finite height");
  const int l = sigma.dim;
  const int d = l + 1;
  require(d >= 2 && d <= kMaxDim, "build_upsilon: ambient dimension out of range");
  const long long N = sigma.N;
  {
    __int128 lim = static_cast<__int128>(N) * T;
    lim *= lim;
    for (const auto& [s, dpt] : sigma.pairs)
      require(sq_units(s, dpt) <= lim, "build_upsilon: permutation displacement exceeds T");
  }

  UpsilonResult out;
  out.cert_log2 = std::log2(static_cast<double>(N)) +
                  static_cast<double>(ipow(3, l)) * 8.0 * d * (6.0 * static_cast<double>(N) * static_cast<double>(T));
  for (const auto& [s, dpt] : sigma.pairs) {
    Vec p(d), q(d);
    for (int i = 0; i < l; ++i) {
      p[i] = static_cast<double>(s[i]) / static_cast<double>(N);
      q[i] = static_cast<double>(dpt[i]) / static_cast<double>(N);
    }
    p[l] = m;
    q[l] = m;
    out.designated.push_back({p, q});
  }

  if (sigma.pairs.empty()) {
    out.map = identity_map(d);
    return out;
  }

  // Scale to the integer lattice: phi(u) = N sigma(u / N).
  LatticePerm phi;
  phi.dim = l;
  phi.N = 1;
  phi.pairs = sigma.pairs;
  const long long Tp = N * T;  // displacement bound of phi
  TileDecomposition td = tile_decompose(phi, Tp);

  std::vector<MapExpr> pieces;
  for (size_t k = 0; k < td.pieces.size(); ++k) {
    const LatticePerm& piece = td.pieces[k];
    if (piece.pairs.empty()) continue;
    const IVec& pk = td.offsets[k];
    // Conjugate the half-lattice piece to Z^l: tau_k(x) = x/2 + Tp (p_k - 1).
    LatticePerm conj;
    conj.dim = l;
    conj.N = 1;
    for (const auto& [a, b] : piece.pairs) {
      IVec ca(l), cb(l);
      for (int i = 0; i < l; ++i) {
        long long shift = 2 * Tp * (pk[i] - 1);
        ca[i] = a[i] - shift;
        cb[i] = b[i] - shift;
      }
      conj.pairs.push_back({ca, cb});
    }
    RealizedTilePerm realized = realize_tile_perm(conj, 6 * Tp);

    Vec shift(d);
    for (int i = 0; i < l; ++i) shift[i] = static_cast<double>(Tp) * static_cast<double>(pk[i] - 1);
    shift[l] = 0.0;
    MapExpr tau_hat = compose(d, {uniform_scale(d, 0.5), translation(shift)});
    pieces.push_back(compose(d, {invert(tau_hat), realized.map, tau_hat}));
  }
  MapExpr upsilon_std = compose(d, std::move(pieces));

  if (N == 1 && m == 0.0) {
    out.map = upsilon_std;
  } else {
    Vec diag(d);
    for (int i = 0; i < l; ++i) diag[i] = static_cast<double>(N);
    diag[l] = 1.0;
    Vec drop(d);
    drop[l] = -m;
    MapExpr rho = compose(d, {diagonal_scale(diag), translation(drop)});
    out.map = compose(d, {rho, upsilon_std, invert(rho)});
  }
  internal_assert(out.map->bound.bilip_log2() <= out.cert_log2 + 1e-9,
                  "slab realizer exceeds its certified bound");
  return out;
}

}  // namespace bilip
