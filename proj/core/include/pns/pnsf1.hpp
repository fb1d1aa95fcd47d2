#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "pns/field.hpp"

namespace pns {

/// "PNSF1" field dump: one ASCII header line `PNSF1 N L time name`, then N^3
/// little-endian IEEE-754 doubles in x-fastest order.
struct FieldDump {
    ScalarField field;
    double time = 0.0;
    std::string name;
};

void write_pnsf1(std::ostream& out, const ScalarField& field, double time, const std::string& name);
void write_pnsf1(const std::filesystem::path& path, const ScalarField& field, double time, const std::string& name);
FieldDump read_pnsf1(std::istream& in);
FieldDump read_pnsf1(const std::filesystem::path& path);

}  // namespace pns
