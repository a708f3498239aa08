#pragma once

#include <vector>

#include "cuspkit/horoballs.hpp"

namespace cuspkit {

// A group element in display coordinates together with its word.
struct FrameMove {
    MoebiusMap M;
    Word w;
};

HoroballDiagram enumerate_with_moves(const Manifold& m, int cusp, const std::vector<double>& scales, double cutoff,
                                     const EnumerateOptions& opts, std::vector<FrameMove>* moves_out);

// Generators, their inverses, and the elements of the largest balls seen from `cusp`.
std::vector<FrameMove> frame_moves(const Manifold& m, int cusp, const std::vector<double>& scales);

} // namespace cuspkit
