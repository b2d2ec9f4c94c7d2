#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "volta/concentration.hpp"
#include "volta/graph.hpp"
#include "volta/harmonic.hpp"
#include "volta/network.hpp"
#include "volta/properness.hpp"
#include "volta/walk.hpp"

// Text formats. Vertex labels are 1-based everywhere outside the library.
//
//   graph:    "n m" then m lines "i j"
//   network:  "n m" then m lines "i j c_ij" (c_ij with 17 significant digits)
//   field:    CSV "vertex,potential,defined"; undefined potentials are empty
//   boundary: "1:1.0,251:0.3,..." or "spread:1.0,0.3,..." (K vertices at
//             1 + floor(k n / K), k = 0..K-1)
namespace volta::io {

Graph read_graph(std::istream& in);
Graph read_graph(const std::filesystem::path& path);
void write_graph(std::ostream& out, const Graph& g);
std::string format_graph(const Graph& g);

Network read_network(std::istream& in);
Network read_network(const std::filesystem::path& path);
void write_network(std::ostream& out, const Network& net);
std::string format_network(const Network& net);

BoundaryCondition parse_boundary(std::string_view text, std::size_t vertex_count);
std::string format_boundary(const BoundaryCondition& bc);

std::string format_field_csv(const PotentialField& field);
PotentialField read_field_csv(std::istream& in);
PotentialField read_field_csv(const std::filesystem::path& path);

// "vertex,estimate,stderr,walks,estimated,hit_<x_1>,...": hit columns hold
// P_i^k for each boundary vertex, labeled 1-based.
// only_estimated drops the rows of vertices that were not walked.
std::string format_estimates_csv(const HittingEstimate& est, const BoundaryCondition& bc,
                                 bool only_estimated = false);

nlohmann::json to_json(const ConcentrationStats& stats);
nlohmann::json to_json(const MixingReport& report);
nlohmann::json to_json(const PropernessReport& report);

// "%.17g"
std::string format_double(double x);

// Writes via a sibling temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace volta::io
