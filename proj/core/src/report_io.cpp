#include "pns/report_io.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <ctime>
#include <fstream>

#include "pns/digest.hpp"
#include "pns/error.hpp"
#include "pns/format.hpp"

#ifndef PNS_VERSION
#define PNS_VERSION "0.0.0"
#endif

namespace pns {

void CsvTable::add(std::vector<std::string> row) {
    require(row.size() == header_.size(), ErrorKind::InvalidArgument, "csv row width does not match the header");
    rows_.push_back(std::move(row));
}

std::string CsvTable::text() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    const std::string t = text();
    out.write(t.data(), static_cast<std::streamsize>(t.size()));
    if (!out) fail(ErrorKind::Io, "failed writing " + path.string());
}

std::string cell(double v) { return format_double(v); }
std::string cell(long v) { return std::to_string(v); }
std::string cell(int v) { return std::to_string(v); }
std::string cell(std::size_t v) { return std::to_string(v); }
std::string cell(bool v) { return v ? "true" : "false"; }

std::vector<EmittedFile> checksum_files(const std::filesystem::path& dir, const std::vector<std::string>& files) {
    std::vector<EmittedFile> out;
    for (const auto& f : files) {
        const auto p = dir / f;
        out.push_back({f, sha256_file(p), std::filesystem::file_size(p)});
    }
    return out;
}

std::string manifest_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["artifact"] = m.artifact;
    j["version"] = m.version;
    j["subcommand"] = m.subcommand;
    j["experiment"] = m.experiment;
    j["started"] = m.started;
    j["finished"] = m.finished;
    j["config"] = m.config;
    j["files"] = nlohmann::ordered_json::array();
    for (const auto& f : m.files) j["files"].push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : m.checks) j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    j["notes"] = m.notes;
    return j.dump(2) + "\n";
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    out << manifest_json(m);
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string version() { return PNS_VERSION; }

}  // namespace pns
