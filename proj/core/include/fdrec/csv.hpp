#pragma once

#include <filesystem>
#include <iosfwd>

#include "fdrec/panel.hpp"

namespace fdrec {

// Panel CSV layout: first line is the grid, every following line one curve.
// Values are comma separated, written with 17 significant digits (full
// double round-trip), LF line endings, no header names.
void write_panel_csv(const Panel& panel, std::ostream& out);
void write_panel_csv(const Panel& panel, const std::filesystem::path& path);

// Throws InvalidInput with 1-based line and field position on malformed
// numbers, ragged rows, or an invalid grid line.
Panel read_panel_csv(std::istream& in, PanelRole role = PanelRole::Observed);
Panel read_panel_csv(const std::filesystem::path& path, PanelRole role = PanelRole::Observed);

}  // namespace fdrec
