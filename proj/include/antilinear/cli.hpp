#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "antilinear/grid.hpp"

namespace antilinear::cli {

/// Header `x,re_u1,im_u1[,re_u2,im_u2]`, one row per full grid node, 17 significant digits, LF.
std::string format_csv(const Trajectory& t);

/// gnuplot script plotting re, im and abs of every component found in the CSV header.
std::string format_plot_script(std::string_view csv_path, std::string_view csv_header);

/// Writes through a temporary sibling and renames, so a failed run leaves nothing behind.
/// Throws InputError on I/O failure.
void write_file(const std::filesystem::path& path, std::string_view contents);

void emit_csv(const Trajectory& t, const std::filesystem::path& path);
void emit_plot_script(const std::string& csv_path, const std::filesystem::path& out);

/// Replaces every whole-word `xi` in an expression with the parenthesised value.
std::string substitute_xi(std::string_view text, double xi);

/// Full command line minus the program name. Returns the process exit code:
/// 0 success, 1 input/parse/I-O error, 2 solver failure or failed verification.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace antilinear::cli
