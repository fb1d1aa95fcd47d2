#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace pns {

/// Rows of already-formatted cells; numbers go through format_double.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
    void add(std::vector<std::string> row);
    std::size_t rows() const noexcept { return rows_.size(); }
    std::string text() const;
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string cell(double v);
std::string cell(long v);
std::string cell(int v);
std::string cell(std::size_t v);
std::string cell(bool v);

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct EmittedFile {
    std::string path;  // relative to the output directory
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct RunManifest {
    std::string artifact = "pns";
    std::string version;
    std::string subcommand;
    std::string experiment;
    std::string started;
    std::string finished;
    std::map<std::string, std::string> config;
    std::vector<EmittedFile> files;
    std::vector<CheckResult> checks;
    std::vector<std::string> notes;
};

/// Checksums each file (paths relative to dir).
std::vector<EmittedFile> checksum_files(const std::filesystem::path& dir, const std::vector<std::string>& files);
std::string manifest_json(const RunManifest& manifest);
void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
/// ISO-8601 UTC, second resolution.
std::string utc_timestamp();
std::string version();

}  // namespace pns
