#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cqc::csv {

/// Shortest decimal text that parses back to the same double ("inf" for +infinity).
std::string format(double v);
std::string format(std::uint64_t v);
inline std::string format(bool v) { return v ? "1" : "0"; }

/// Parses what format() writes.
double parse_double(std::string_view text);

/// Writes a header row followed by rows. Cells are taken verbatim.
class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void comment(std::string_view text);
    void row(const std::vector<std::string>& cells);

private:
    std::ostream& out_;
};

struct Table {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Reads comment lines ("# ..."), a header row and data rows.
Table read(std::istream& in);

}  // namespace cqc::csv
