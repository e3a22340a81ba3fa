#include "gsrnls/patch.hpp"

#include <algorithm>
#include <numeric>

#include "gsrnls/errors.hpp"

namespace gsrnls {

namespace {

std::vector<int> grid_positions(int extent, int side, int stride) {
  std::vector<int> pos;
  const int last = extent - side;
  for (int p = 0; p < last; p += stride) {
    pos.push_back(p);
  }
  pos.push_back(last); // border snap: the final patch abuts the edge
  return pos;
}

} // namespace

std::vector<PatchPos> anchor_grid(int height, int width, int side,
                                  int stride) {
  if (stride < 1) {
    throw ParamError("anchor_grid: stride must be >= 1");
  }
  if (side < 1 || side > height || side > width) {
    throw ParamError("anchor_grid: patch side does not fit the image");
  }
  const std::vector<int> rows = grid_positions(height, side, stride);
  const std::vector<int> cols = grid_positions(width, side, stride);
  std::vector<PatchPos> anchors;
  anchors.reserve(rows.size() * cols.size());
  for (int r : rows) {
    for (int c : cols) {
      anchors.push_back({r, c});
    }
  }
  return anchors;
}

Eigen::VectorXd extract_patch(const GrayImage& img, PatchPos pos, int side) {
  Eigen::VectorXd v(side * side);
  for (int c = 0; c < side; ++c) {
    for (int r = 0; r < side; ++r) {
      v[c * side + r] = img.at(pos.row + r, pos.col + c);
    }
  }
  return v;
}

PatchGroup block_match(const GrayImage& img, PatchPos anchor, int side, int m,
                       int window) {
  if (m < 1) {
    throw ParamError("block_match: m must be >= 1");
  }
  if (window < side) {
    throw ParamError("block_match: window smaller than patch side");
  }
  const int max_row = img.height - side;
  const int max_col = img.width - side;
  // Candidate top-left corners: a window x window square of positions
  // centred on the anchor's top-left, clipped to the valid range.
  const int half_lo = (window - 1) / 2;
  const int half_hi = window / 2;
  const int r0 = std::max(0, anchor.row - half_lo);
  const int r1 = std::min(max_row, anchor.row + half_hi);
  const int c0 = std::max(0, anchor.col - half_lo);
  const int c1 = std::min(max_col, anchor.col + half_hi);

  const Eigen::VectorXd anchor_vec = extract_patch(img, anchor, side);

  struct Candidate {
    double dist;
    PatchPos pos;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(static_cast<std::size_t>(r1 - r0 + 1) * (c1 - c0 + 1));
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      if (r == anchor.row && c == anchor.col) {
        continue; // the anchor is pinned to column 0 below
      }
      double d = 0.0;
      for (int pc = 0; pc < side; ++pc) {
        for (int pr = 0; pr < side; ++pr) {
          const double diff =
              img.at(r + pr, c + pc) - anchor_vec[pc * side + pr];
          d += diff * diff;
        }
      }
      candidates.push_back({d, {r, c}});
    }
  }
  if (static_cast<int>(candidates.size()) + 1 < m) {
    throw DimensionError("block_match: window holds fewer than m candidates");
  }
  // Candidates were generated in scan order, so a stable sort on distance
  // realises the (distance, scan-order) tie-break.
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.dist < b.dist;
                   });

  PatchGroup group;
  group.side = side;
  group.data.resize(side * side, m);
  group.members.reserve(m);
  group.distances.reserve(m);
  group.data.col(0) = anchor_vec;
  group.members.push_back(anchor);
  group.distances.push_back(0.0);
  for (int j = 1; j < m; ++j) {
    const Candidate& cand = candidates[j - 1];
    group.data.col(j) = extract_patch(img, cand.pos, side);
    group.members.push_back(cand.pos);
    group.distances.push_back(cand.dist);
  }
  return group;
}

void aggregate_group(const PatchGroup& group, const Eigen::MatrixXd& estimates,
                     GrayImage& sum, GrayImage& count) {
  if (estimates.rows() != group.data.rows() ||
      estimates.cols() != group.data.cols()) {
    throw DimensionError("aggregate_group: estimate shape mismatch");
  }
  const int side = group.side;
  for (std::size_t j = 0; j < group.members.size(); ++j) {
    const PatchPos pos = group.members[j];
    for (int c = 0; c < side; ++c) {
      for (int r = 0; r < side; ++r) {
        sum.at(pos.row + r, pos.col + c) +=
            estimates(c * side + r, static_cast<int>(j));
        count.at(pos.row + r, pos.col + c) += 1.0;
      }
    }
  }
}

GrayImage normalize_aggregate(const GrayImage& sum, const GrayImage& count) {
  if (!sum.same_size(count)) {
    throw DimensionError("normalize_aggregate: buffer shapes differ");
  }
  GrayImage out(sum.width, sum.height);
  for (std::size_t i = 0; i < sum.pixels.size(); ++i) {
    if (count.pixels[i] == 0.0) {
      throw DimensionError("normalize_aggregate: uncovered pixel");
    }
    out.pixels[i] = sum.pixels[i] / count.pixels[i];
  }
  return out;
}

GrayImage aggregate(
    const std::vector<std::pair<PatchGroup, Eigen::MatrixXd>>& groups,
    int width, int height) {
  GrayImage sum(width, height, 0.0);
  GrayImage count(width, height, 0.0);
  for (const auto& [group, estimates] : groups) {
    aggregate_group(group, estimates, sum, count);
  }
  return normalize_aggregate(sum, count);
}

} // namespace gsrnls
