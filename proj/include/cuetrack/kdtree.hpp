#pragma once

#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace cuetrack {

/// Static kd-tree over 3D points for exact nearest-neighbor queries.
/// Median split on the widest-spread axis; leaves hold small buckets.
class KdTree3 {
 public:
  explicit KdTree3(const Eigen::Matrix<double, Eigen::Dynamic, 3>& pts) : pts_(pts) {
    order_.resize(static_cast<size_t>(pts_.rows()));
    std::iota(order_.begin(), order_.end(), Eigen::Index{0});
    if (!order_.empty()) {
      nodes_.reserve(order_.size() / kLeafSize * 2 + 2);
      root_ = build(0, static_cast<Eigen::Index>(order_.size()));
    }
  }

  // Index of the closest point and the squared distance. Undefined on an
  // empty tree (callers guard on size).
  std::pair<Eigen::Index, double> nearest(const Eigen::Vector3d& q) const {
    Eigen::Index best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    search(root_, q, best, best_d2);
    return {best, best_d2};
  }

 private:
  static constexpr Eigen::Index kLeafSize = 16;

  struct Node {
    int axis = -1;          // -1 marks a leaf
    double split = 0.0;
    Eigen::Index begin = 0, end = 0;  // leaf range into order_
    int left = -1, right = -1;
  };

  int build(Eigen::Index begin, Eigen::Index end) {
    Node node;
    if (end - begin <= kLeafSize) {
      node.begin = begin;
      node.end = end;
      nodes_.push_back(node);
      return static_cast<int>(nodes_.size() - 1);
    }
    Eigen::Vector3d lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
    Eigen::Vector3d hi = -lo;
    for (Eigen::Index k = begin; k < end; ++k) {
      const auto p = pts_.row(order_[static_cast<size_t>(k)]);
      lo = lo.cwiseMin(p.transpose());
      hi = hi.cwiseMax(p.transpose());
    }
    int axis = 0;
    (hi - lo).maxCoeff(&axis);
    const Eigen::Index mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](Eigen::Index a, Eigen::Index b) { return pts_(a, axis) < pts_(b, axis); });
    node.axis = axis;
    node.split = pts_(order_[static_cast<size_t>(mid)], axis);
    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
  }

  void search(int ni, const Eigen::Vector3d& q, Eigen::Index& best, double& best_d2) const {
    if (ni < 0) return;
    const Node& node = nodes_[static_cast<size_t>(ni)];
    if (node.axis < 0) {
      for (Eigen::Index k = node.begin; k < node.end; ++k) {
        const Eigen::Index idx = order_[static_cast<size_t>(k)];
        const double d2 = (pts_.row(idx).transpose() - q).squaredNorm();
        if (d2 < best_d2) {
          best_d2 = d2;
          best = idx;
        }
      }
      return;
    }
    const double delta = q[node.axis] - node.split;
    const int near = delta < 0.0 ? node.left : node.right;
    const int far = delta < 0.0 ? node.right : node.left;
    search(near, q, best, best_d2);
    if (delta * delta < best_d2) {
      search(far, q, best, best_d2);
    }
  }

  Eigen::Matrix<double, Eigen::Dynamic, 3> pts_;
  std::vector<Eigen::Index> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace cuetrack
