#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gsrnls/image.hpp"

namespace gsrnls {

/// Top-left corner of a square patch inside an image.
struct PatchPos {
  int row = 0;
  int col = 0;

  friend bool operator==(const PatchPos&, const PatchPos&) = default;
};

/// A group of similar patches: the anchor in column 0, followed by its
/// nearest neighbours in order of increasing squared distance (ties broken
/// by raster-scan order of the top-left corner).
struct PatchGroup {
  /// side*side x m matrix; each column is one vectorised patch.
  Eigen::MatrixXd data;
  /// Top-left corners of the member patches, parallel to the columns.
  std::vector<PatchPos> members;
  /// Squared Euclidean distances to the anchor, parallel to the columns.
  /// distances[0] is always 0.
  std::vector<double> distances;
  int side = 0;
};

/// Anchor positions for a given image: every multiple of `stride` that fits,
/// plus the last valid position so patches cover the bottom/right border.
/// Row-major order (all columns of row 0, then row `stride`, ...).
std::vector<PatchPos> anchor_grid(int height, int width, int side, int stride);

/// Vectorises the side x side patch at `pos` in column-major order:
/// v[c*side + r] = img(pos.row + r, pos.col + c).
Eigen::VectorXd extract_patch(const GrayImage& img, PatchPos pos, int side);

/// Finds the `m` patches most similar to the anchor patch within a
/// `window` x `window` search region of top-left positions centred on the
/// anchor (clipped to the image). The anchor itself always occupies
/// column 0. Throws DimensionError when fewer than `m` candidate
/// positions exist.
PatchGroup block_match(const GrayImage& img, PatchPos anchor, int side, int m,
                       int window);

/// Accumulates the group's patch estimates into sum/count buffers.
/// Pixels are visited in a fixed order: column by column, each column in
/// the patch's column-major pixel order.
void aggregate_group(const PatchGroup& group, const Eigen::MatrixXd& estimates,
                     GrayImage& sum, GrayImage& count);

/// Divides sum by count pixel-wise. Throws DimensionError when any pixel
/// was never covered (count == 0).
GrayImage normalize_aggregate(const GrayImage& sum, const GrayImage& count);

/// Full overlap-averaged reconstruction from (group, estimates) pairs.
/// Accumulation order is fixed (pair order, then column, then within-patch
/// pixel order) so the result is bit-reproducible.
GrayImage aggregate(
    const std::vector<std::pair<PatchGroup, Eigen::MatrixXd>>& groups,
    int width, int height);

} // namespace gsrnls
