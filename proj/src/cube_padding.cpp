#include "pano/cube_padding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pano/parallel.hpp"

namespace pano {

namespace {

Vec3 edge_normal(Edge e) {
  switch (e) {
    case Edge::Left: return {-1, 0, 0};
    case Edge::Right: return {1, 0, 0};
    case Edge::Top: return {0, -1, 0};
    case Edge::Bottom: return {0, 1, 0};
  }
  return {};
}

// Direction of increasing along-edge index.
Vec3 edge_tangent(Edge e) {
  return (e == Edge::Left || e == Edge::Right) ? Vec3(0, 1, 0) : Vec3(1, 0, 0);
}

Edge edge_from_local_point(const Vec3& p) {
  if (p.x() == -1.0) return Edge::Left;
  if (p.x() == 1.0) return Edge::Right;
  if (p.y() == -1.0) return Edge::Top;
  if (p.y() == 1.0) return Edge::Bottom;
  throw std::logic_error("point is not on a face edge");
}

AdjacencyTable build_adjacency() {
  AdjacencyTable table{};
  for (Face f : kFaces) {
    const Mat3& rf = face_rotation(f).matrix();
    for (Edge e : kEdges) {
      const Vec3 outward = rf * edge_normal(e);
      const Face g = select_face(outward);
      const Mat3 rg_t = face_rotation(g).matrix().transpose();
      const Vec3 midpoint = rg_t * (rf * (edge_normal(e) + Vec3(0, 0, 1)));
      const Edge ge = edge_from_local_point(midpoint);
      const Vec3 along = rg_t * (rf * edge_tangent(e));
      table[face_index(f)][static_cast<int>(e)] = {g, ge, along.dot(edge_tangent(ge)) < 0};
    }
  }
  return table;
}

struct Texel {
  int u, v;
};

// Texel `depth` steps inward from edge e at along-edge index a.
Texel texel_from_edge(Edge e, int depth, int a, int w) {
  switch (e) {
    case Edge::Left: return {depth, a};
    case Edge::Right: return {w - 1 - depth, a};
    case Edge::Top: return {a, depth};
    case Edge::Bottom: return {a, w - 1 - depth};
  }
  return {0, 0};
}

}  // namespace

const AdjacencyTable& cube_adjacency() {
  static const AdjacencyTable table = build_adjacency();
  return table;
}

std::array<PaddedFaceGrid, kNumFaces> cube_pad(const Cubemap& src, int pad) {
  const int w = src.face_width();
  if (pad < 1 || pad > w / 2) throw std::invalid_argument("pad must lie in [1, face_width / 2]");
  const int channels = src.channels();
  const int pw = w + 2 * pad;
  const AdjacencyTable& adj = cube_adjacency();

  std::array<PaddedFaceGrid, kNumFaces> out;
  parallel_for(0, kNumFaces, [&](int fi) {
    const Face f = kFaces[fi];
    PaddedFaceGrid& g = out[fi];
    g.face = f;
    g.pad = pad;
    g.face_width = w;
    g.data = Image(pw, pw, channels);
    g.provenance.assign(static_cast<std::size_t>(pw) * pw, static_cast<std::int8_t>(fi));

    auto copy_texel = [&](int u, int v, Face from, int su, int sv) {
      const auto s = src.face(from).pixel(sv, su);
      auto d = g.data.pixel(v + pad, u + pad);
      for (int c = 0; c < channels; ++c) d[c] = s[c];
      g.provenance[static_cast<std::size_t>(v + pad) * pw + (u + pad)] = static_cast<std::int8_t>(face_index(from));
    };

    // Interior.
    for (int v = 0; v < w; ++v) {
      for (int u = 0; u < w; ++u) copy_texel(u, v, f, u, v);
    }

    // Edge strips.
    for (Edge e : kEdges) {
      const EdgeLink& link = adj[fi][static_cast<int>(e)];
      for (int k = 1; k <= pad; ++k) {
        for (int a = 0; a < w; ++a) {
          const Texel dst = [&]() -> Texel {
            switch (e) {
              case Edge::Left: return {-k, a};
              case Edge::Right: return {w - 1 + k, a};
              case Edge::Top: return {a, -k};
              case Edge::Bottom: return {a, w - 1 + k};
            }
            return {0, 0};
          }();
          const Texel s = texel_from_edge(link.neighbor_edge, k - 1, link.reversed ? w - 1 - a : a, w);
          copy_texel(dst.u, dst.v, link.neighbor, s.u, s.v);
        }
      }
    }

    // Corners: mean of the horizontally and vertically clamped strip texels.
    for (int v = -pad; v < w + pad; ++v) {
      for (int u = -pad; u < w + pad; ++u) {
        const bool out_u = u < 0 || u >= w;
        const bool out_v = v < 0 || v >= w;
        if (!(out_u && out_v)) continue;
        const int cu = std::clamp(u, 0, w - 1);
        const int cv = std::clamp(v, 0, w - 1);
        auto d = g.data.pixel(v + pad, u + pad);
        const auto a = g.data.pixel(cv + pad, u + pad);
        const auto b = g.data.pixel(v + pad, cu + pad);
        for (int c = 0; c < channels; ++c) d[c] = 0.5 * (a[c] + b[c]);
        g.provenance[static_cast<std::size_t>(v + pad) * pw + (u + pad)] = kCornerProvenance;
      }
    }
  });
  return out;
}

Image crop(const PaddedFaceGrid& grid) {
  const int w = grid.face_width;
  Image out(w, w, grid.data.channels());
  for (int v = 0; v < w; ++v) {
    for (int u = 0; u < w; ++u) {
      const auto s = grid.data.pixel(v + grid.pad, u + grid.pad);
      auto d = out.pixel(v, u);
      std::copy(s.begin(), s.end(), d.begin());
    }
  }
  return out;
}

Cubemap crop(const std::array<PaddedFaceGrid, kNumFaces>& grids) {
  Cubemap out(grids[0].face_width, grids[0].data.channels());
  for (const auto& g : grids) out.face(g.face) = crop(g);
  return out;
}

}  // namespace pano
