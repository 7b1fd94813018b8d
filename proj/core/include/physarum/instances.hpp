#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "physarum/lp_model.hpp"

namespace physarum {

enum class GeneratorKind { ShortestPath, Transshipment, RandomPositiveLp, ThmOne, ZeroCostDemo };

std::string to_string(GeneratorKind k);
GeneratorKind parse_generator_kind(const std::string& text);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::ShortestPath;
  std::uint64_t seed = 1;
  Mode mode = Mode::Directed;
  // graph kinds
  std::size_t nodes = 4;
  std::size_t arcs = 6;
  // random_positive_lp
  std::size_t rows = 2;
  std::size_t cols = 4;
  long max_entry = 3;
  long max_demand = 3;
  // all random kinds
  long max_cost = 5;
  // thm_one
  Rational opt = 1;
  Rational phi = 1;
};

struct Graph {
  std::size_t nodes = 0;
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  std::vector<long> cost;
};

// Column per arc u→v: +1 in row u, −1 in row v; the sink row is dropped and
// b = e_source. Throws DegenerateGraph when the sink is unreachable (directed)
// or disconnected (undirected).
LpInstance shortest_path_instance(const Graph& g, std::size_t source, std::size_t sink, Mode mode);

// supply sums to zero; the last node's row is dropped.
LpInstance transshipment_instance(const Graph& g, const std::vector<long>& supply, Mode mode);

// s→a, a→t, s→t with costs (1, 1, 3).
LpInstance triangle_instance(Mode mode = Mode::Directed);
// A = [1, 1], b = 1, c = (opt, opt + phi), x0 = (1/2, 1/2).
LpInstance thm_one_instance(const Rational& opt, const Rational& phi);
// The triangle with c = (1, 1, 0), undirected.
LpInstance zero_cost_demo_instance();

// Deterministic per seed. Random kinds rejection-sample up to 1000 times
// against validation and the oracle.
LpInstance generate(const GeneratorSpec& spec);

// Uniform in [lo, hi] from raw mt19937_64 output, identical on every platform.
long uniform_int(std::mt19937_64& rng, long lo, long hi);
double uniform_real(std::mt19937_64& rng, double lo, double hi);

}  // namespace physarum
