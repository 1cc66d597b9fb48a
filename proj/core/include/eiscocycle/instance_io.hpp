#pragma once

// Reading and writing FieldInstance records.  Instances are JSON documents;
// exact rationals are written as "p/q" strings (plain integers are accepted
// on input), F elements as [a, b] pairs meaning a + b*sqrt(-D) and K elements
// as lists of F elements in the power basis of theta.

#include <gmpxx.h>

#include <string>

#include "eiscocycle/exact_field.hpp"

namespace eisc {

mpq_class parse_rational(const std::string& text);
std::string format_rational(const mpq_class& q);

FieldInstance parse_instance(const std::string& json_text);
FieldInstance load_instance(const std::string& path);
std::string instance_to_json(const FieldInstance& inst);

// A row vector [[a, b], ...] of F elements, and a list of square matrices
// whose entries are [a, b] pairs.
std::vector<FElem> parse_F_vector(const std::string& json_text, std::int64_t D);
std::vector<FMatrix> parse_F_matrices(const std::string& json_text, std::int64_t D);

}  // namespace eisc
