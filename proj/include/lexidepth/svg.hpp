#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lexidepth/depth.hpp"
#include "lexidepth/embedding.hpp"
#include "lexidepth/partition.hpp"

namespace lexidepth {

// Deterministic text-only SVG renderings; all float output uses fixed
// formatting so artifacts are byte-reproducible.

// 2-D scatter of an embedding with text labels. When `by_cluster` is given
// points are colored per cluster id (trimmed points gray crosses).
void write_scatter_svg(const Embedding& e, std::ostream& out,
                       const Partition* by_cluster = nullptr);

// heatmap of a depth grid with the embedding points overlaid
void write_heatmap_svg(const DepthGrid& g, const Embedding& e, std::ostream& out);

// marching-squares contours of the depth surface (levels 0.1 .. 0.9)
void write_contour_svg(const DepthGrid& g, const Embedding& e, std::ostream& out);

}  // namespace lexidepth
