#pragma once

#include <cstdint>
#include <vector>

#include "melonlab/env.hpp"
#include "melonlab/path.hpp"
#include "melonlab/region.hpp"

namespace melonlab::detail {

// Successive shortest paths on the node-split lattice network. Each allowed
// cell c has an in-node 2c and an out-node 2c+1 joined by a unit arc of cost
// -weight(c); out-nodes feed the in-nodes of the right and upper neighbours.
// The super-source and super-sink are implicit: sources and sinks are flagged
// cells whose unit arcs to S / T are tracked per cell.
//
// Potentials and distances are 128-bit so that no bound beyond the 62-bit
// environment mass guard is needed.
class FlowSolver {
 public:
  FlowSolver(const Environment& env, const CellMask& region);

  void add_source(Point p);
  void add_sink(Point p);

  // One augmentation along a shortest residual S-T path. Returns false when
  // no augmenting path exists.
  bool augment();

  int flow() const { return flow_; }
  // Sum of vertex weights carried by the current flow (= minus its cost).
  std::int64_t weight() const { return weight_; }
  // Flow decomposition: one path per saturated source, in source order.
  std::vector<UprightPath> paths() const;

 private:
  using Wide = __int128;

  enum Dir : std::uint8_t { kNone = 0, kRight = 1, kUp = 2 };

  int cell_of(Point p) const;
  Point point_of(int c) const { return {c % n_ + 1, c / n_ + 1}; }
  int step(int c, Dir d) const { return d == kRight ? c + 1 : c + n_; }
  bool can_step(int c, Dir d) const;
  void init_potentials();
  void relax(int u, int v, std::int64_t cost, Wide du);
  void apply(int u, int v, int sink_cell);

  const Environment& env_;
  int n_;
  std::vector<std::uint8_t> region_;
  std::vector<std::int64_t> weight_of_;
  std::vector<Wide> pi_;
  std::vector<Wide> dist_;
  std::vector<int> pred_;
  std::vector<std::uint8_t> done_;
  std::vector<std::uint8_t> used_;
  std::vector<std::uint8_t> next_;
  std::vector<std::uint8_t> prev_;
  std::vector<std::uint8_t> source_;  // 0 none, 1 available, 2 saturated
  std::vector<std::uint8_t> sink_;
  std::vector<int> source_order_;
  std::vector<std::pair<Wide, int>> heap_;
  int flow_ = 0;
  std::int64_t weight_ = 0;
  Wide cost_ = 0;
};

}  // namespace melonlab::detail
