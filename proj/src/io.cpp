#include "drinf/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

namespace drinf::io {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        fields.push_back(trim(field));
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

std::optional<double> parse_number(const std::string& s) {
    if (s.empty()) {
        return std::nullopt;
    }
    const char* first = s.data();
    if (*first == '+') {
        ++first;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::ifstream open(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path);
    }
    return in;
}

}  // namespace

Table read_csv(std::istream& in) {
    Table table;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_fields(line);
        std::vector<double> row;
        row.reserve(fields.size());
        bool numeric = true;
        for (const auto& f : fields) {
            const auto v = parse_number(f);
            if (!v) {
                numeric = false;
                break;
            }
            row.push_back(*v);
        }
        if (!numeric) {
            if (rows.empty() && table.header.empty()) {
                for (const auto& f : fields) {
                    if (f.empty()) {
                        throw ParseError("empty header field on line " + std::to_string(line_no));
                    }
                }
                table.header = fields;
                width = fields.size();
                continue;
            }
            throw ParseError("missing or non-numeric value on line " + std::to_string(line_no));
        }
        if (width == 0) {
            width = row.size();
        }
        if (row.size() != width) {
            throw ParseError("line " + std::to_string(line_no) + " has " + std::to_string(row.size()) +
                             " fields, expected " + std::to_string(width));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw ParseError("no data rows");
    }
    table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t k = 0; k < width; ++k) {
            table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
        }
    }
    return table;
}

Table read_csv_file(const std::string& path) {
    auto in = open(path);
    return read_csv(in);
}

void write_csv(std::ostream& out, const Matrix& values, const std::vector<std::string>& header) {
    if (!header.empty()) {
        for (std::size_t k = 0; k < header.size(); ++k) {
            out << (k ? "," : "") << header[k];
        }
        out << '\n';
    }
    char buf[32];
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index k = 0; k < values.cols(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", values(i, k));
            out << (k ? "," : "") << buf;
        }
        out << '\n';
    }
}

app::Graph read_edge_list(std::istream& in, std::size_t min_nodes) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::string line;
    std::size_t line_no = 0;
    bool saw_zero = false;
    std::size_t max_id = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream ss(line);
        std::string a;
        std::string b;
        std::string extra;
        if (!(ss >> a)) {
            continue;
        }
        if (!(ss >> b) || (ss >> extra)) {
            throw ParseError("line " + std::to_string(line_no) + " is not an \"i j\" pair");
        }
        std::size_t i = 0;
        std::size_t j = 0;
        for (auto [text, target] : {std::pair{&a, &i}, std::pair{&b, &j}}) {
            const auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), *target);
            if (ec != std::errc() || ptr != text->data() + text->size()) {
                throw ParseError("bad node id on line " + std::to_string(line_no));
            }
        }
        saw_zero = saw_zero || i == 0 || j == 0;
        max_id = std::max({max_id, i, j});
        edges.emplace_back(i, j);
    }
    const std::size_t shift = saw_zero || edges.empty() ? 0 : 1;
    for (auto& [i, j] : edges) {
        i -= shift;
        j -= shift;
    }
    const std::size_t n = edges.empty() ? 0 : max_id + 1 - shift;
    return app::Graph::from_edges(std::max(n, min_nodes), edges);
}

app::Graph read_edge_list_file(const std::string& path, std::size_t min_nodes) {
    auto in = open(path);
    return read_edge_list(in, min_nodes);
}

}  // namespace drinf::io
