#include "fdrec/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "fdrec/errors.hpp"

namespace fdrec {

namespace {

// 17 significant digits round-trip any double exactly; to_chars is
// locale-independent, so files do not depend on the environment.
void append_value(std::string& line, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    line.append(buf, res.ptr);
}

std::vector<double> parse_line(const std::string& line, size_t line_number) {
    std::vector<double> out;
    size_t field = 1;
    size_t pos = 0;
    while (true) {
        size_t comma = line.find(',', pos);
        const size_t end = comma == std::string::npos ? line.size() : comma;
        // Trim surrounding spaces; from_chars wants the bare number.
        size_t a = pos;
        size_t b = end;
        while (a < b && (line[a] == ' ' || line[a] == '\t')) ++a;
        while (b > a && (line[b - 1] == ' ' || line[b - 1] == '\t' || line[b - 1] == '\r')) --b;
        double value = 0.0;
        const auto res = std::from_chars(line.data() + a, line.data() + b, value);
        if (res.ec != std::errc{} || res.ptr != line.data() + b || a == b) {
            throw InvalidInput("csv: malformed number at line " + std::to_string(line_number) +
                               ", field " + std::to_string(field) + ": '" +
                               line.substr(pos, end - pos) + "'");
        }
        out.push_back(value);
        ++field;
        if (comma == std::string::npos) {
            break;
        }
        pos = comma + 1;
    }
    return out;
}

}  // namespace

void write_panel_csv(const Panel& panel, std::ostream& out) {
    std::string line;
    for (int i = 0; i < panel.grid().size(); ++i) {
        if (i > 0) {
            line.push_back(',');
        }
        append_value(line, panel.grid()[i]);
    }
    line.push_back('\n');
    out << line;
    for (Eigen::Index t = 0; t < panel.num_curves(); ++t) {
        line.clear();
        for (Eigen::Index j = 0; j < panel.num_points(); ++j) {
            if (j > 0) {
                line.push_back(',');
            }
            append_value(line, panel.values()(t, j));
        }
        line.push_back('\n');
        out << line;
    }
}

void write_panel_csv(const Panel& panel, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InvalidInput("csv: cannot open '" + path.string() + "' for writing");
    }
    write_panel_csv(panel, out);
    out.flush();
    if (!out) {
        throw InvalidInput("csv: write to '" + path.string() + "' failed");
    }
}

Panel read_panel_csv(std::istream& in, PanelRole role) {
    std::string line;
    size_t line_number = 0;
    std::vector<std::vector<double>> rows;
    std::vector<double> grid_points;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) {
            continue;  // ignore blank lines, including a trailing one
        }
        auto values = parse_line(line, line_number);
        if (grid_points.empty()) {
            grid_points = std::move(values);
            continue;
        }
        if (values.size() != grid_points.size()) {
            throw InvalidInput("csv: line " + std::to_string(line_number) + " has " +
                               std::to_string(values.size()) + " fields, expected " +
                               std::to_string(grid_points.size()));
        }
        rows.push_back(std::move(values));
    }
    if (grid_points.empty()) {
        throw InvalidInput("csv: missing grid line");
    }

    SamplingGrid grid = [&] {
        try {
            return SamplingGrid(grid_points);
        } catch (const InvalidInput& e) {
            throw InvalidInput("csv: first line is not a valid grid: " + std::string(e.what()));
        }
    }();

    Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), grid.size());
    for (size_t t = 0; t < rows.size(); ++t) {
        for (int j = 0; j < grid.size(); ++j) {
            values(static_cast<Eigen::Index>(t), j) = rows[t][static_cast<size_t>(j)];
        }
    }
    return Panel(std::move(values), std::move(grid), role);
}

Panel read_panel_csv(const std::filesystem::path& path, PanelRole role) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidInput("csv: cannot open '" + path.string() + "'");
    }
    return read_panel_csv(in, role);
}

}  // namespace fdrec
