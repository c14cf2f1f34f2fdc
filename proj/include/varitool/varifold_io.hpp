#pragma once

#include "varitool/varifold.hpp"

#include <iosfwd>
#include <string>

namespace varitool {

// Text format: a "m,n" header line, a line with the values, a column header
// x0..x{n-1},P00..P{n-1}{n-1},w and one atom per row. Doubles are written as
// the shortest decimal that reads back to the same value.

void write_varifold_csv(const DiscreteVarifold& v, std::ostream& out);
std::string varifold_csv(const DiscreteVarifold& v);
void save_varifold_csv(const DiscreteVarifold& v, const std::string& path);

/// Throws SchemaError (with a "line N" path) on malformed input and
/// DomainError when an atom violates the varifold invariants.
DiscreteVarifold read_varifold_csv(std::istream& in);
DiscreteVarifold load_varifold_csv(const std::string& path);

}  // namespace varitool
