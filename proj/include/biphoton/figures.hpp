#ifndef BIPHOTON_FIGURES_HPP
#define BIPHOTON_FIGURES_HPP

#include <string>
#include <vector>

#include "biphoton/config.hpp"

// Figure regeneration as CSV plot data. Every figure carries its parameters
// as `#` comment lines ahead of the header row, and output is byte-identical
// across runs with the same configuration.

namespace biphoton {

struct FigureRequest {
    std::string figure_id;  // fig1, fig2a, fig2b, fig3a..fig3d, fig4, fig5, fig6
    int grid_points = 400;
    std::string output_path;
    std::string data_path;  // fig5 only: experimental points to overlay

    void validate() const;
};

/// One emitted plot: named columns plus the metadata comments that were
/// written ahead of the CSV header. `points_column` flags a column that a
/// renderer should draw as markers instead of a line (fig5 data overlay).
struct FigureTable {
    std::vector<std::string> comments;  // without the leading '#'
    std::vector<std::string> column_names;
    std::vector<std::vector<double>> columns;  // column-major
    int points_column = -1;
};

/// Computes the figure and writes its CSV to req.output_path. Returns the
/// table so callers can render it. The config supplies wavelengths where a
/// figure derives its scales; figure-specific constants follow the published
/// captions and are recorded in the comments.
FigureTable emit_figure(const FigureRequest& req, const Config& cfg);

/// Writes a table as CSV (UTF-8, LF, '#' metadata, header row, %.12g cells).
void write_table_csv(std::ostream& out, const FigureTable& table);

const std::vector<std::string>& known_figure_ids();

}  // namespace biphoton

#endif
