#ifndef BIPHOTON_SVG_HPP
#define BIPHOTON_SVG_HPP

#include <iosfwd>

#include "biphoton/figures.hpp"

namespace biphoton {

/// Minimal line/marker plot of a figure table (first column is the abscissa).
/// Convenience only; the CSV is the contract.
void render_svg(std::ostream& out, const FigureTable& table);

}  // namespace biphoton

#endif
