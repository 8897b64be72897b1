// toml.hpp — Minimal TOML-subset reader backed by nlohmann::json values.
//
// Supported: comments, [table] and [dotted.table] headers, key = value with value in
// {string, bool, integer, float, array (possibly nested), inline table, array of
// inline tables}.  Enough for the run-configuration files; not a general TOML parser.

#pragma once

#include <string>

#include <json.hpp>

namespace cep {

nlohmann::json parse_toml(const std::string& text);
nlohmann::json parse_toml_file(const std::string& path);

} // namespace cep
