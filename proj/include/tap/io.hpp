#pragma once

#include <string>

#include "tap/instance.hpp"

namespace tap {

// Instance file schema:
//   {"nodes": [...], "tree_edges": [["u","v"],...],
//    "links": [{"u":..,"v":..,"cost":"p/q"},...], "root": "u"}
// Costs accept integer literals or "p/q" strings.
InstanceData instance_from_json(const std::string& text);
std::string instance_to_json(const InstanceData& data);
InstanceData load_instance_file(const std::string& path);
void save_instance_file(const InstanceData& data, const std::string& path);
InstanceData to_data(const TapInstance& inst);

// Solution file schema: {"links":[{"u":..,"v":..,"value":"p/q"},...]}.
// Entries are matched to link indices by endpoints in file order, so
// parallel links resolve deterministically; an optional "id" field pins the
// index exactly.
FractionalSolution solution_from_json(const TapInstance& inst, const std::string& text);
std::string solution_to_json(const TapInstance& inst, const FractionalSolution& x);
std::string solution_to_json(const TapInstance& inst, const IntegralSolution& a);
FractionalSolution load_solution_file(const TapInstance& inst, const std::string& path);
IntegralSolution integral_from_fractional(const FractionalSolution& x);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace tap
