#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ctmc/model.hpp"

namespace ctmc {

// Model files are line-oriented `key = value` text. '#' starts a comment.
// A line without '=' continues the value of the previous key, and ';'
// separates generator rows on one line:
//
//   states    = 2                 # or a label list: states = low, high
//   generator = -0.5  0.5
//                0.5 -0.5
//   rates     = 0 0.1
//
// Numbers may be separated by whitespace or commas. Every error, including
// invariant violations, is reported as "<source>:<line>: <message>".

/// Throws InputError / ValidationError with line-anchored messages.
Model parse_model(std::string_view text, const std::string& source = "<model>");

Model load_model(const std::filesystem::path& path);

/// Inverse of parse_model, full double precision.
std::string format_model(const Model& model);

}  // namespace ctmc
