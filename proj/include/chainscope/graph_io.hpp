#pragma once

// File formats.
//
// .adj text graph:
//   chainscope-adj 1
//   N <n> eps <eps> rho <rho> mode <outer|inner> lipschitz <c> exact <0|1> eps_lo <lo> eps_hi <hi>
//   system <description>
//   <successors of vertex 0, space separated>
//   ... one line per vertex
//
// binary graph: "CSGRAPH1", then the same header fields, then per vertex a
// LEB128 degree followed by LEB128 gaps between sorted successors.
//
// .cov cover:
//   chainscope-cov 1
//   cells <n> rho <rho> exact <0|1>
//   config <key> = <value>     (the system, one line per key)
//   centers
//   <coordinates then symbols of cell 0>
//   ... one line per cell

#include <iosfwd>
#include <string>
#include <utility>

#include "chainscope/chain_graph.hpp"

namespace chainscope {

void write_graph_text(std::ostream& out, const ChainGraph& g);
ChainGraph read_graph_text(std::istream& in);

void write_graph_binary(std::ostream& out, const ChainGraph& g);
ChainGraph read_graph_binary(std::istream& in);

// Chooses the format from the file contents on read; on write, paths ending
// in ".bin" or ".adjb" get the binary format.
void save_graph(const std::string& path, const ChainGraph& g);
ChainGraph load_graph(const std::string& path);

void write_cover(std::ostream& out, const Cover& cover, const SystemSpec& system);
std::pair<SystemSpec, Cover> read_cover(std::istream& in);
void save_cover(const std::string& path, const Cover& cover, const SystemSpec& system);
std::pair<SystemSpec, Cover> load_cover(const std::string& path);

}  // namespace chainscope
