#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "drinf/applications.hpp"
#include "drinf/numkernel.hpp"

namespace drinf::io {

struct Table {
    std::vector<std::string> header;  // empty when the file had none
    Matrix values;                    // one observation per row
};

/// Comma-separated numbers, one observation per row. A first row that does
/// not parse as numbers is taken as the header. Empty fields, ragged rows and
/// non-numeric cells are ParseError.
Table read_csv(std::istream& in);
Table read_csv_file(const std::string& path);

// Writes every value with 17 significant digits so that re-reading is exact.
void write_csv(std::ostream& out, const Matrix& values, const std::vector<std::string>& header = {});

/// Whitespace-separated undirected edge list, one "i j" pair per line; '#'
/// starts a comment. Ids are 0-based when any id is 0 and 1-based otherwise.
/// The node count is the largest id seen (after rebasing) plus one, or
/// `min_nodes` if that is larger.
app::Graph read_edge_list(std::istream& in, std::size_t min_nodes = 0);
app::Graph read_edge_list_file(const std::string& path, std::size_t min_nodes = 0);

}  // namespace drinf::io
