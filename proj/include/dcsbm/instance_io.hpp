#pragma once

#include <string>

#include "dcsbm/graph.hpp"

namespace dcsbm {

// Shortest-exact and fixed-significance decimal formatting used by all file
// writers; identical input bits always produce identical bytes.
std::string format_real(double x);        // %.17g, round-trips exactly
std::string format_real12(double x);      // %.12g, solution objectives

// Writes content to path via a temp file + rename so failures never leave a
// partial file behind.
void atomic_write_file(const std::string& path, const std::string& content);

// Instance text format, version "dcsbm-instance v1". Degrees and m are
// recomputed from the edge section; a header m that disagrees is an error.
Instance read_instance(const std::string& path);
void write_instance(const Instance& inst, const std::string& path);
std::string instance_to_string(const Instance& inst);
Instance instance_from_string(const std::string& text, const std::string& origin = "<string>");

// Solution text format, version "dcsbm-solution v1".
struct Solution {
    double objective = 0.0;               // negative log-likelihood incl. constant
    std::string status;                   // optimal | feasible | time-limit
    Assignment assignment;
    AffinityMatrix omega;
};

void write_solution(const Solution& sol, const std::string& path);
std::string solution_to_string(const Solution& sol);
Solution read_solution(const std::string& path);

} // namespace dcsbm
