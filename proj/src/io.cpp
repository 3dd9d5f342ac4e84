#include "ctcoul/io.hpp"

#include <cstdio>

namespace ctcoul {

std::string format_decimal(double x) {
    if (x == 0.0) x = 0.0; // collapse negative zero
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.11e", x);
    return buf;
}

std::string format_decimal(const Scalar& x) { return format_decimal(x.to_double()); }

std::string CsvTable::str() const {
    std::string out;
    auto join = [&out](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += fields[i];
        }
        out += '\n';
    };
    join(header);
    for (const auto& r : rows) join(r);
    return out;
}

} // namespace ctcoul
