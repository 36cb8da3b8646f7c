#include "cqc/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <system_error>

namespace cqc::csv {

std::string format(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format(std::uint64_t v) { return std::to_string(v); }

double parse_double(std::string_view text) {
    if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw std::invalid_argument("csv: not a number: '" + std::string(text) + "'");
    }
    return v;
}

void Writer::comment(std::string_view text) { out_ << "# " << text << '\n'; }

void Writer::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        cells.push_back(line.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return cells;
}

}  // namespace

Table read(std::istream& in) {
    Table t;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("# ", 0) == 0) {
            t.comments.push_back(line.substr(2));
        } else if (t.header.empty()) {
            t.header = split(line);
        } else {
            t.rows.push_back(split(line));
            if (t.rows.back().size() != t.header.size()) {
                throw std::runtime_error("csv: row width does not match header");
            }
        }
    }
    return t;
}

}  // namespace cqc::csv
