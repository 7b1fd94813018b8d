#pragma once

#include <string>

#include "physarum/lp_model.hpp"

namespace physarum {

// JSON fields: n, m, A (array of integer rows), b, c, optional x0 (positive
// decimals or fraction strings), optional mode ("directed" | "undirected").
// The result is not validated.
LpInstance parse_instance_json(const std::string& text);

LpInstance load_instance(const std::string& path);

// x0 entries are written as JSON numbers when they are exact doubles and as
// fraction strings otherwise.
std::string instance_to_json(const LpInstance& inst, int indent = 2);

void save_instance(const LpInstance& inst, const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace physarum
