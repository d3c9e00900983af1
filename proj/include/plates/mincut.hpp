#ifndef PLATES_MINCUT_HPP
#define PLATES_MINCUT_HPP

#include <tuple>
#include <vector>

namespace plates {

// Exact minimizer of sum_i cost1[i] * x_i + sum_(i,j,w) w * [x_i != x_j] over
// binary labelings, w >= 0, via max-flow (Dinic) on the standard s-t graph.
// pin[i] in {-1, 0, 1}: -1 free, otherwise the label is forced. Among tied
// minimizers, prefer_ones selects the one with the largest label-1 set.
std::vector<int> min_cut_binary(int n, const std::vector<double>& cost1,
                                const std::vector<std::tuple<int, int, double>>& edges,
                                const std::vector<int>& pin, bool prefer_ones = false);

double binary_label_energy(const std::vector<int>& x, const std::vector<double>& cost1,
                           const std::vector<std::tuple<int, int, double>>& edges);

}  // namespace plates

#endif
