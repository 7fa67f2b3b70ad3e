#pragma once

// Cube padding: each face is bordered with texels copied from its four
// edge-adjacent faces, oriented so that the padded face continues across the
// cube edge as if the neighbour were unfolded into the face plane.

#include <array>
#include <cstdint>
#include <vector>

#include "pano/geometry.hpp"
#include "pano/image.hpp"

namespace pano {

/// Face edges: Left is u = 0, Right is u = w-1, Top is v = 0, Bottom is v = w-1.
enum class Edge : std::uint8_t { Left = 0, Right, Top, Bottom };
inline constexpr std::array<Edge, 4> kEdges = {Edge::Left, Edge::Right, Edge::Top, Edge::Bottom};

/// Where the strip beyond a face edge comes from.
struct EdgeLink {
  Face neighbor;
  Edge neighbor_edge;  // edge of the neighbour shared with this face
  bool reversed;       // along-edge index runs backwards on the neighbour

  bool operator==(const EdgeLink&) const = default;
};

using AdjacencyTable = std::array<std::array<EdgeLink, 4>, kNumFaces>;

/// Derived once from the face rotation table.
const AdjacencyTable& cube_adjacency();

/// Provenance marker for corner texels, which blend two strips.
inline constexpr std::int8_t kCornerProvenance = -1;

struct PaddedFaceGrid {
  Face face;
  int pad;
  int face_width;
  Image data;                           // (w + 2 pad)^2 texels
  std::vector<std::int8_t> provenance;  // face index per texel, or kCornerProvenance

  int padded_width() const { return face_width + 2 * pad; }
  /// Face-space access; u, v in [-pad, w + pad).
  double at(int u, int v, int ch = 0) const { return data.at(v + pad, u + pad, ch); }
  std::int8_t source(int u, int v) const {
    return provenance[static_cast<std::size_t>(v + pad) * padded_width() + (u + pad)];
  }
};

/// Pads every face. Corner texels are the mean of the two strip texels obtained
/// by clamping one coordinate back onto the face range. Requires
/// 1 <= pad <= face_width / 2.
std::array<PaddedFaceGrid, kNumFaces> cube_pad(const Cubemap& src, int pad);

/// Interior of a padded face.
Image crop(const PaddedFaceGrid& grid);
Cubemap crop(const std::array<PaddedFaceGrid, kNumFaces>& grids);

}  // namespace pano
