#pragma once

// Fixtures shared by the unit tests and the acceptance runner.

#include "lpa/algebra.hpp"
#include "lpa/trails.hpp"

#include <random>
#include <string>
#include <vector>

namespace lpa::testkit {

using Rng = std::mt19937_64;

/// loop, rose2, line3, sink, lasso, exit, isolated, and lineN for any N >= 1.
GraphPtr named_graph(const std::string& name);
/// The six graphs the property suites sweep.
const std::vector<std::string>& six_graphs();

AlgebraPtr algebra(const std::string& graph_name, const std::string& ring = "Z");
AlgebraPtr algebra(const GraphPtr& g, const std::string& ring = "Z");

/// Element from text; a thin wrapper so tests read like the CLI.
Element ex(const AlgebraPtr& alg, const std::string& text);
Path path(const AlgebraPtr& alg, const std::string& text);

Scalar random_scalar(const Ring& r, Rng& rng);
/// alpha beta^* with r(alpha) = r(beta), l(alpha), l(beta) <= max_len.
Monomial random_monomial(const Graph& g, Rng& rng, std::size_t max_len);
/// Sum of 1..max_terms random monomials with small nonzero coefficients.
Element random_element(const AlgebraPtr& alg, Rng& rng, std::size_t max_terms,
                       std::size_t max_len);

/// Random graph with 1..max_vertices vertices. A third of the draws are
/// unions of isolated vertices and loops, so commutative shapes are common.
Graph random_graph(Rng& rng, std::size_t max_vertices);

/// Every monomial alpha beta^* (basis or not) with l(alpha), l(beta) <= max_len.
std::vector<Monomial> all_monomials(const Graph& g, std::size_t max_len);

/// Trails to build test vectors from: discrete trails with head <= 2, the
/// trail found from each vertex, and those prefixed by paths of length <= 2.
std::vector<Trail> sample_trails(const GraphPtr& g);

} // namespace lpa::testkit
