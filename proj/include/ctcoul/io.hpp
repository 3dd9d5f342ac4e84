#pragma once

#include <string>
#include <vector>

#include "ctcoul/scalar.hpp"

namespace ctcoul {

// The one decimal format every emitter uses: 12 significant digits,
// scientific notation, correctly rounded. Keeps output byte-identical
// across runs.
std::string format_decimal(double x);
std::string format_decimal(const Scalar& x);

// Minimal CSV assembly: UTF-8, LF line endings, mandatory header row.
// Values are pre-stringified by the caller; none of ours contain commas.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::string str() const;
};

} // namespace ctcoul
