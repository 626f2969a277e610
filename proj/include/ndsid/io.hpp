#pragma once

// Model files and certificate reports.
//
// Model file layout (all exact values as "p/q" strings or JSON numbers, which
// are read as exact decimals):
//   { "format_version": 1,
//     "subsystems": [ { "dims": {...}, "nominal": {...}, "lft": {...} } ],
//     "phi": [[...]] | { "pattern": [[0|1]], "values": [[...]] },
//     "factorization": { "gbar_yv": [[f]], "gbar_zu": [[f]] },   optional
//     "metadata": {...} }
// A rational function entry f is a scalar or {"num": [c0, c1, ...], "den": [...]}
// with ascending coefficients. Missing matrix blocks are zero; unknown keys are
// rejected. In "pattern", 1 marks a free entry and 0 an entry fixed to zero.

#include <filesystem>
#include <string>
#include <string_view>

#include "ndsid/ident.hpp"
#include "ndsid/model.hpp"

namespace ndsid {

inline constexpr int kFormatVersion = 1;

/// Throws ParseError (with line and column for syntax errors, or the JSON
/// path of the offending value) and the model's own validation errors.
NdsModel parse_model(std::string_view json_text);
NdsModel load_model(const std::filesystem::path& path);

std::string dump_model(const NdsModel& m);
void save_model(const NdsModel& m, const std::filesystem::path& path);

/// Machine readable and human readable renderings of the same verdict.
std::string report_json(const IdentVerdict& v, double seconds);
std::string report_text(const IdentVerdict& v, double seconds);

/// 0 identifiable, 1 unidentifiable, 2 inconclusive.
int exit_code(Status s);

}  // namespace ndsid
