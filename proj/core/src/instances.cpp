#include "physarum/instances.hpp"

#include <algorithm>
#include <numeric>

#include "physarum/errors.hpp"
#include "physarum/oracle.hpp"

namespace physarum {

std::string to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::ShortestPath: return "shortest_path";
    case GeneratorKind::Transshipment: return "transshipment";
    case GeneratorKind::RandomPositiveLp: return "random_positive_lp";
    case GeneratorKind::ThmOne: return "thm_one";
    case GeneratorKind::ZeroCostDemo: return "zero_cost_demo";
  }
  return "unknown";
}

GeneratorKind parse_generator_kind(const std::string& text) {
  for (auto k : {GeneratorKind::ShortestPath, GeneratorKind::Transshipment, GeneratorKind::RandomPositiveLp,
                 GeneratorKind::ThmOne, GeneratorKind::ZeroCostDemo})
    if (to_string(k) == text) return k;
  throw Error(ErrorKind::InvalidArgument, "unknown generator kind '" + text + "'");
}

long uniform_int(std::mt19937_64& rng, long lo, long hi) {
  if (hi < lo) throw Error(ErrorKind::InvalidArgument, "uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (span == 0) return static_cast<long>(rng());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t v;
  do v = rng();
  while (v >= limit);
  return lo + static_cast<long>(v % span);
}

double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

namespace {

MatrixQ incidence(const Graph& g, std::size_t drop) {
  MatrixQ A(g.nodes - 1, g.arcs.size());
  auto row = [&](std::size_t v) { return v < drop ? v : v - 1; };
  for (std::size_t k = 0; k < g.arcs.size(); ++k) {
    const auto [u, v] = g.arcs[k];
    if (u != drop) A(row(u), k) += 1;
    if (v != drop) A(row(v), k) -= 1;
  }
  return A;
}

std::vector<bool> reach(const Graph& g, std::size_t from, bool directed) {
  std::vector<bool> seen(g.nodes, false);
  std::vector<std::size_t> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    for (const auto& [a, b] : g.arcs) {
      std::size_t next = g.nodes;
      if (a == u) next = b;
      else if (!directed && b == u) next = a;
      if (next < g.nodes && !seen[next]) {
        seen[next] = true;
        stack.push_back(next);
      }
    }
  }
  return seen;
}

void check_graph(const Graph& g) {
  if (g.nodes < 2) throw Error(ErrorKind::DegenerateGraph, "graph needs at least two nodes");
  if (g.cost.size() != g.arcs.size()) throw Error(ErrorKind::InvalidArgument, "one cost per arc");
  for (const auto& [u, v] : g.arcs)
    if (u >= g.nodes || v >= g.nodes || u == v) throw Error(ErrorKind::DegenerateGraph, "bad arc");
}

VecQ costs(const Graph& g) {
  VecQ c;
  for (long v : g.cost) c.emplace_back(v);
  return c;
}

}  // namespace

LpInstance shortest_path_instance(const Graph& g, std::size_t source, std::size_t sink, Mode mode) {
  check_graph(g);
  if (source >= g.nodes || sink >= g.nodes || source == sink) throw Error(ErrorKind::DegenerateGraph, "bad terminals");
  if (!reach(g, source, mode == Mode::Directed)[sink])
    throw Error(ErrorKind::DegenerateGraph, "sink is not reachable from the source");
  LpInstance inst;
  inst.mode = mode;
  inst.A = incidence(g, sink);
  inst.b.assign(g.nodes - 1, Rational(0));
  inst.b[source < sink ? source : source - 1] = 1;
  inst.c = costs(g);
  return inst;
}

LpInstance transshipment_instance(const Graph& g, const std::vector<long>& supply, Mode mode) {
  check_graph(g);
  if (supply.size() != g.nodes) throw Error(ErrorKind::InvalidArgument, "one supply per node");
  if (std::accumulate(supply.begin(), supply.end(), 0L) != 0) throw Error(ErrorKind::InvalidArgument, "supplies must sum to zero");
  const auto seen = reach(g, 0, false);
  if (!std::all_of(seen.begin(), seen.end(), [](bool s) { return s; }))
    throw Error(ErrorKind::DegenerateGraph, "graph is disconnected");
  LpInstance inst;
  inst.mode = mode;
  inst.A = incidence(g, g.nodes - 1);
  for (std::size_t v = 0; v + 1 < g.nodes; ++v) inst.b.emplace_back(supply[v]);
  inst.c = costs(g);
  return inst;
}

LpInstance triangle_instance(Mode mode) {
  LpInstance inst;
  inst.mode = mode;
  inst.A = MatrixQ{{1, 0, 1}, {-1, 1, 0}};
  inst.b = {1, 0};
  inst.c = {1, 1, 3};
  return inst;
}

LpInstance thm_one_instance(const Rational& opt, const Rational& phi) {
  if (opt <= 0 || phi <= 0) throw Error(ErrorKind::InvalidArgument, "opt and phi must be positive");
  LpInstance inst;
  inst.A = MatrixQ{{1, 1}};
  inst.b = {1};
  inst.c = {opt, opt + phi};
  inst.x0 = VecQ{Rational(1, 2), Rational(1, 2)};
  return inst;
}

LpInstance zero_cost_demo_instance() {
  LpInstance inst = triangle_instance(Mode::Undirected);
  inst.c = {1, 1, 0};
  return inst;
}

namespace {

Graph random_graph(std::mt19937_64& rng, const GeneratorSpec& spec) {
  Graph g;
  g.nodes = spec.nodes;
  // Random spanning tree first, so the incidence matrix has full row rank.
  for (std::size_t v = 1; v < g.nodes; ++v) {
    const auto u = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(v) - 1));
    if (uniform_int(rng, 0, 1)) g.arcs.emplace_back(u, v);
    else g.arcs.emplace_back(v, u);
  }
  while (g.arcs.size() < spec.arcs) {
    const auto u = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(g.nodes) - 1));
    const auto v = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(g.nodes) - 1));
    if (u != v) g.arcs.emplace_back(u, v);
  }
  for (std::size_t k = 0; k < g.arcs.size(); ++k) g.cost.push_back(uniform_int(rng, 1, spec.max_cost));
  return g;
}

bool has_feasible_bfs(const LpInstance& inst) {
  try {
    enumerate_bfs(inst);
    return true;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Infeasible) return false;
    throw;
  }
}

constexpr int kMaxRejections = 1000;

}  // namespace

LpInstance generate(const GeneratorSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  switch (spec.kind) {
    case GeneratorKind::ThmOne: return validate(thm_one_instance(spec.opt, spec.phi));
    case GeneratorKind::ZeroCostDemo: return validate(zero_cost_demo_instance());
    case GeneratorKind::ShortestPath:
    case GeneratorKind::Transshipment:
      if (spec.nodes < 2 || spec.arcs + 1 < spec.nodes)
        throw Error(ErrorKind::InvalidArgument, "need nodes >= 2 and arcs >= nodes - 1");
      break;
    case GeneratorKind::RandomPositiveLp:
      if (spec.rows == 0 || spec.cols < spec.rows) throw Error(ErrorKind::InvalidArgument, "need 1 <= rows <= cols");
      break;
  }
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    try {
      LpInstance inst;
      if (spec.kind == GeneratorKind::ShortestPath) {
        inst = shortest_path_instance(random_graph(rng, spec), 0, spec.nodes - 1, spec.mode);
      } else if (spec.kind == GeneratorKind::Transshipment) {
        Graph g = random_graph(rng, spec);
        std::vector<long> supply(g.nodes);
        long total = 0;
        for (std::size_t v = 0; v + 1 < g.nodes; ++v) total += supply[v] = uniform_int(rng, -spec.max_demand, spec.max_demand);
        supply.back() = -total;
        inst = transshipment_instance(g, supply, spec.mode);
      } else {
        inst.mode = spec.mode;
        inst.A = MatrixQ(spec.rows, spec.cols);
        for (std::size_t i = 0; i < spec.rows; ++i)
          for (std::size_t j = 0; j < spec.cols; ++j) inst.A(i, j) = uniform_int(rng, -spec.max_entry, spec.max_entry);
        for (std::size_t i = 0; i < spec.rows; ++i) inst.b.emplace_back(uniform_int(rng, -spec.max_demand, spec.max_demand));
        for (std::size_t j = 0; j < spec.cols; ++j) inst.c.emplace_back(uniform_int(rng, 1, spec.max_cost));
      }
      LpInstance valid = validate(std::move(inst));
      if (spec.kind == GeneratorKind::RandomPositiveLp && valid.n() != spec.rows) continue;
      if (!has_feasible_bfs(valid)) continue;
      return valid;
    } catch (const Error& e) {
      switch (e.kind()) {
        case ErrorKind::DegenerateGraph:
        case ErrorKind::ZeroDemand:
        case ErrorKind::Infeasible:
        case ErrorKind::InfeasibleShape:
          continue;
        default:
          throw;
      }
    }
  }
  throw Error(ErrorKind::Infeasible, "no valid instance after " + std::to_string(kMaxRejections) + " draws");
}

}  // namespace physarum
