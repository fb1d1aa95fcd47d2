#include "pns/pnsf1.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "pns/error.hpp"
#include "pns/format.hpp"
#include "pns/grid.hpp"
#include "pns/spectral.hpp"

namespace pns {
namespace {

std::uint64_t to_little_endian(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
}

}  // namespace

void write_pnsf1(std::ostream& out, const ScalarField& field, double time, const std::string& name) {
    require(!name.empty() && name.find_first_of(" \t\r\n") == std::string::npos, ErrorKind::InvalidArgument,
            "PNSF1 field name must be a non-empty token without whitespace");
    const ScalarField phys = as_physical(field);
    const auto& grid = phys.grid();
    out << "PNSF1 " << grid.n_modes() << ' ' << format_double(grid.box_length()) << ' ' << format_double(time) << ' '
        << name << '\n';
    for (double v : phys.values()) {
        const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(v));
        char bytes[8];
        std::memcpy(bytes, &bits, 8);
        out.write(bytes, 8);
    }
    require(static_cast<bool>(out), ErrorKind::Io, "PNSF1 write failed");
}

void write_pnsf1(const std::filesystem::path& path, const ScalarField& field, double time, const std::string& name) {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::Io, "cannot open " + path.string() + " for writing");
    write_pnsf1(out, field, time, name);
}

FieldDump read_pnsf1(std::istream& in) {
    std::string header;
    require(static_cast<bool>(std::getline(in, header)), ErrorKind::Io, "PNSF1: missing header line");
    std::istringstream hs(header);
    std::string magic, name;
    int n = 0;
    double length = 0.0, time = 0.0;
    hs >> magic >> n >> length >> time >> name;
    require(static_cast<bool>(hs) && magic == "PNSF1", ErrorKind::Io, "PNSF1: malformed header '" + header + "'");
    const SpectralGrid grid = make_grid(n, length);
    std::vector<double> values(grid.size());
    for (auto& v : values) {
        char bytes[8];
        in.read(bytes, 8);
        require(in.gcount() == 8, ErrorKind::Io, "PNSF1: truncated payload");
        std::uint64_t bits;
        std::memcpy(&bits, bytes, 8);
        v = std::bit_cast<double>(to_little_endian(bits));
    }
    return {ScalarField::physical(grid, std::move(values)), time, name};
}

FieldDump read_pnsf1(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::Io, "cannot open " + path.string());
    return read_pnsf1(in);
}

}  // namespace pns
