// io.hpp — Deterministic CSV emission and provenance hashing for the CLI.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cep {

// Shortest-width fixed formatting that round-trips doubles; identical across runs.
std::string format_double(double v);

std::uint64_t fnv1a_hash(const std::string& data);

struct CsvTable {
    std::vector<std::string> comments;  // emitted as '# ...' lines
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

void write_csv(const std::string& path, const CsvTable& table);

std::string provenance_line(std::uint64_t config_hash);

} // namespace cep
