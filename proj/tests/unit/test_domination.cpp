#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "physarum/domination.hpp"
#include "physarum/instances.hpp"
#include "physarum/oracle.hpp"

using namespace physarum;
using testing_oracles::error_kind;

namespace {

Graph random_graph(std::mt19937_64& rng, std::size_t nodes, std::size_t extra) {
  Graph g;
  g.nodes = nodes;
  for (std::size_t v = 1; v < nodes; ++v) {
    const auto u = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(v) - 1));
    if (uniform_int(rng, 0, 1))
      g.arcs.emplace_back(u, v);
    else
      g.arcs.emplace_back(v, u);
  }
  for (std::size_t k = 0; k < extra; ++k) {
    const auto u = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(nodes) - 1));
    auto v = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(nodes) - 2));
    if (v >= u) ++v;
    g.arcs.emplace_back(u, v);
  }
  for (std::size_t k = 0; k < g.arcs.size(); ++k) g.cost.push_back(uniform_int(rng, 1, 4));
  return g;
}

struct Cuts {
  Rational directed_out;  // min over cuts of x(δ⁺S)
  Rational undirected;    // min over cuts of x(δ(S))
};

// Every S with the source inside and the sink outside.
Cuts enumerate_cuts(const Graph& g, const VecQ& x, std::size_t s, std::size_t t) {
  Cuts best{-1, -1};
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << g.nodes); ++mask) {
    if (!(mask >> s & 1) || (mask >> t & 1)) continue;
    Rational out = 0, both = 0;
    for (std::size_t e = 0; e < g.arcs.size(); ++e) {
      const bool in_u = mask >> g.arcs[e].first & 1, in_v = mask >> g.arcs[e].second & 1;
      if (in_u && !in_v) out += x[e];
      if (in_u != in_v) both += x[e];
    }
    if (best.directed_out < 0 || out < best.directed_out) best.directed_out = out;
    if (best.undirected < 0 || both < best.undirected) best.undirected = both;
  }
  return best;
}

VecQ random_capacity(std::mt19937_64& rng, std::size_t m) {
  VecQ x;
  for (std::size_t e = 0; e < m; ++e) x.emplace_back(uniform_int(rng, 1, 30), uniform_int(rng, 1, 10));
  for (auto& v : x) v.canonicalize();
  return x;
}

}  // namespace

TEST_SUITE("domination") {
  TEST_CASE("one-row instance") {
    const LpInstance t = validate(thm_one_instance(1, 2));
    const DualVertexSet Y = enumerate_dual_vertices(t, Mode::Directed);
    REQUIRE(Y.vertices.size() == 1);
    CHECK(Y.vertices[0].y == VecQ{1});
    CHECK(Y.vertices[0].d == VecQ{1, 1});
    CHECK(alpha_of(t, Y, VecQ{Rational(1, 2), Rational(1, 2)}).alpha == 1);
    CHECK(alpha_of(t, Y, VecQ{Rational(1, 10), Rational(1, 5)}).alpha == Rational(3, 10));
    const DualVertexSet Yu = enumerate_dual_vertices(t, Mode::Undirected);
    REQUIRE(Yu.vertices.size() == 1);
    CHECK(Yu.vertices[0].y == VecQ{-1});
  }

  TEST_CASE("triangle cut capacity") {
    const LpInstance t = validate(triangle_instance());
    for (Mode mode : {Mode::Directed, Mode::Undirected}) {
      const DualVertexSet Y = enumerate_dual_vertices(t, mode);
      const auto cert = alpha_of(t, Y, VecQ{1, 1, 1});
      CHECK(cert.alpha == 2);
      REQUIRE(cert.witness.size() == 3);
      CHECK(t.A * cert.witness == VecQ{2, 0});
      for (const auto& v : cert.witness) CHECK(abs(v) <= 1);
    }
  }

  TEST_CASE("feasible capacities have alpha one") {
    const LpInstance t = validate(triangle_instance());
    const DualVertexSet Y = enumerate_dual_vertices(t, Mode::Directed);
    const VecQ half{Rational(1, 2), Rational(1, 2), Rational(1, 2)};
    REQUIRE(t.A * half == t.b);
    CHECK(alpha_of(t, Y, half).alpha == 1);
    CHECK(alpha_of(t, Y, VecQ{Rational(1, 3), Rational(1, 3), Rational(2, 3)}).alpha == 1);
  }

  TEST_CASE("vertices are vertices and respect the D_S bound") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      GeneratorSpec spec;
      spec.kind = GeneratorKind::RandomPositiveLp;
      spec.seed = seed;
      spec.rows = 1 + seed % 3;
      spec.cols = 5;
      const LpInstance inst = generate(spec);
      const DeterminantInfo& di = require_det_info(inst);
      for (Mode mode : {Mode::Directed, Mode::Undirected}) {
        const DualVertexSet Y = enumerate_dual_vertices(inst, mode);
        CHECK(!Y.vertices.empty());
        for (const auto& v : Y.vertices) {
          CHECK(is_dual_vertex(inst, v, mode));
          CHECK(dot(inst.b, v.y) == (mode == Mode::Directed ? 1 : -1));
          CHECK(norm_inf(v.y) <= norm_1(inst.b) * di.D_S);
        }
      }
    }
  }

  TEST_CASE("duality against cut enumeration on graphs") {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t nodes = static_cast<std::size_t>(uniform_int(rng, 3, 6));
      const Graph g = random_graph(rng, nodes, static_cast<std::size_t>(uniform_int(rng, 0, 4)));
      LpInstance inst;
      try {
        inst = validate(shortest_path_instance(g, 0, nodes - 1, Mode::Undirected));
      } catch (const Error&) {
        continue;
      }
      const VecQ x = random_capacity(rng, inst.m());
      const Cuts cuts = enumerate_cuts(g, x, 0, nodes - 1);
      const DualVertexSet Yu = enumerate_dual_vertices(inst, Mode::Undirected);
      CHECK(alpha_of(inst, Yu, x).alpha == cuts.undirected);
      CHECK(max_capacity_flow(inst, x, Mode::Undirected).t == cuts.undirected);
      CHECK(max_capacity_flow(inst, x, Mode::Directed).t == cuts.directed_out);
      const DualVertexSet Yd = enumerate_dual_vertices(inst, Mode::Directed);
      Rational dual = -1;
      for (const auto& v : Yd.vertices) {
        const Rational val = dot(v.d, x);
        if (dual < 0 || val < dual) dual = val;
      }
      CHECK(dual == cuts.directed_out);
    }
  }

  TEST_CASE("duality on random instances, exact") {
    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 100; ++trial) {
      GeneratorSpec spec;
      spec.kind = GeneratorKind::RandomPositiveLp;
      spec.seed = static_cast<std::uint64_t>(trial % 20 + 1);
      spec.rows = 2;
      spec.cols = 4;
      const LpInstance inst = generate(spec);
      const VecQ x = random_capacity(rng, inst.m());
      for (Mode mode : {Mode::Directed, Mode::Undirected}) {
        const DualVertexSet Y = enumerate_dual_vertices(inst, mode);
        Rational dual = -1;
        for (const auto& v : Y.vertices) {
          const Rational val = dot(v.d, x);
          if (dual < 0 || val < dual) dual = val;
        }
        const CapacityFlow primal = max_capacity_flow(inst, x, mode);
        CHECK(primal.t == dual);
        CHECK(inst.A * primal.f == VecQ{primal.t * inst.b[0], primal.t * inst.b[1]});
        for (std::size_t e = 0; e < inst.m(); ++e) {
          CHECK(abs(primal.f[e]) <= x[e]);
          if (mode == Mode::Directed) CHECK(primal.f[e] >= 0);
        }
      }
    }
  }

  TEST_CASE("dominating sets are nested") {
    // x is accepted at level a when a·x carries a feasible flow.
    std::mt19937_64 rng(53);
    const LpInstance t = validate(triangle_instance());
    for (int trial = 0; trial < 50; ++trial) {
      const VecQ x = random_capacity(rng, 3);
      const Rational a = ratio(uniform_int(rng, 1, 20), 10), b = a + ratio(uniform_int(rng, 0, 10), 10);
      auto accepted = [&](const Rational& level) {
        VecQ s = x;
        for (auto& v : s) v *= level;
        return max_capacity_flow(t, s, Mode::Directed).t >= 1;
      };
      if (accepted(a)) CHECK(accepted(b));
    }
  }

  TEST_CASE("preconditioning the one-row instance") {
    const LpInstance t = validate(thm_one_instance(1, 1));
    const Preconditioned p = precondition(t, VecQ{Rational(1, 2), Rational(1, 2)});
    CHECK(p.extended.A == MatrixQ{{1, 1, 1}});
    CHECK(p.c_prime == 6);
    CHECK(p.z0 == 2);
    CHECK(p.x0 == VecQ{Rational(1, 2), Rational(1, 2), 2});
    const OracleReport r = enumerate_bfs(p.extended);
    for (const auto& s : r.optimal_set()) CHECK(s.values[2] == 0);
    const DualVertexSet Y = enumerate_dual_vertices(p.extended, Mode::Directed);
    CHECK(alpha_of(p.extended, Y, p.x0).alpha >= 1);
  }

  TEST_CASE("preconditioning never lowers alpha") {
    std::mt19937_64 rng(54);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      GeneratorSpec spec;
      spec.kind = GeneratorKind::RandomPositiveLp;
      spec.seed = seed;
      spec.rows = 2;
      spec.cols = 4;
      const LpInstance inst = generate(spec);
      const VecQ x = random_capacity(rng, inst.m());
      const Preconditioned p = precondition(inst, x);
      const DualVertexSet Y = enumerate_dual_vertices(p.extended, Mode::Directed);
      for (const auto& v : Y.vertices) CHECK(dot(v.Aty, p.x0) >= 1);
    }
  }
}
