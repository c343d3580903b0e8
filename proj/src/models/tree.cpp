#include "adview/models/tree.hpp"

#include <algorithm>
#include <numeric>

#include "adview/error.hpp"
#include "adview/rng.hpp"

namespace adview {

namespace {

// A split must remove at least this fraction of the node's squared error.
constexpr double kMinRelativeGain = 1e-12;

struct Candidate {
  std::int32_t feature = -1;
  double threshold = 0.0;
  double score = 0.0;  // sum_L^2 / n_L + sum_R^2 / n_R on centered targets
};

class Grower {
 public:
  Grower(const Matrix& X, std::span<const double> y, const TreeConfig& config, std::size_t m_try,
         Rng* rng)
      : X_(X), y_(y), config_(config), m_try_(m_try), rng_(rng) {
    features_.resize(X.cols());
    std::iota(features_.begin(), features_.end(), std::size_t{0});
  }

  TreeModel grow(std::vector<std::size_t> sample) {
    TreeModel tree;
    tree.config = config_;
    tree.n_features = X_.cols();
    nodes_ = &tree.nodes;
    build(std::move(sample), 0);
    nodes_ = nullptr;
    return tree;
  }

 private:
  std::uint32_t build(std::vector<std::size_t> sample, std::size_t depth) {
    const std::size_t n = sample.size();
    double sum = 0.0;
    for (auto i : sample) sum += y_[i];
    const double mean = sum / static_cast<double>(n);
    double sse = 0.0;
    for (auto i : sample) sse += (y_[i] - mean) * (y_[i] - mean);

    const auto id = static_cast<std::uint32_t>(nodes_->size());
    nodes_->push_back(TreeNode{-1, 0.0, mean, 0, 0, static_cast<std::uint32_t>(n)});

    if (depth >= config_.max_depth || n < 2 * config_.min_samples_leaf || !(sse > 0.0)) {
      return id;
    }
    const Candidate best = best_split(sample, mean, sse);
    if (best.feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (auto i : sample) {
      (X_(i, static_cast<std::size_t>(best.feature)) <= best.threshold ? left : right).push_back(i);
    }
    sample.clear();
    sample.shrink_to_fit();

    const auto l = build(std::move(left), depth + 1);
    const auto r = build(std::move(right), depth + 1);
    auto& node = (*nodes_)[id];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  std::vector<std::size_t> candidate_features() {
    const std::size_t d = features_.size();
    if (m_try_ >= d || rng_ == nullptr) return features_;
    // Partial Fisher-Yates over a fresh 0..d-1, then ascending order so
    // ties still resolve to the lowest feature index.
    std::vector<std::size_t> pool = features_;
    for (std::size_t k = 0; k < m_try_; ++k) {
      const auto j = k + static_cast<std::size_t>(rng_->below(d - k));
      std::swap(pool[k], pool[j]);
    }
    pool.resize(m_try_);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  Candidate best_split(const std::vector<std::size_t>& sample, double mean, double sse) {
    const std::size_t n = sample.size();
    const std::size_t min_leaf = std::max<std::size_t>(1, config_.min_samples_leaf);
    Candidate best;
    bool found = false;

    // (feature value, centered target, position in sample)
    struct Entry {
      double x;
      double r;
      std::size_t pos;
    };
    std::vector<Entry> entries(n);

    double total = 0.0;
    for (auto i : sample) total += y_[i] - mean;

    for (const auto f : candidate_features()) {
      for (std::size_t k = 0; k < n; ++k) {
        entries[k] = {X_(sample[k], f), y_[sample[k]] - mean, k};
      }
      std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.x < b.x || (a.x == b.x && a.pos < b.pos);
      });

      double left_sum = 0.0;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        left_sum += entries[k].r;
        if (!(entries[k].x < entries[k + 1].x)) continue;
        const std::size_t n_left = k + 1;
        const std::size_t n_right = n - n_left;
        if (n_left < min_leaf || n_right < min_leaf) continue;
        const double right_sum = total - left_sum;
        const double score = left_sum * left_sum / static_cast<double>(n_left) +
                             right_sum * right_sum / static_cast<double>(n_right);
        if (!found || score > best.score) {
          found = true;
          best.feature = static_cast<std::int32_t>(f);
          best.threshold = split_midpoint(entries[k].x, entries[k + 1].x);
          best.score = score;
        }
      }
    }
    if (!found) return {};
    const double gain = best.score - total * total / static_cast<double>(n);
    if (!(gain > kMinRelativeGain * sse)) return {};
    return best;
  }

  const Matrix& X_;
  std::span<const double> y_;
  TreeConfig config_;
  std::size_t m_try_;
  Rng* rng_;
  std::vector<std::size_t> features_;
  std::vector<TreeNode>* nodes_ = nullptr;
};

}  // namespace

double split_midpoint(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  return mid < hi ? mid : lo;
}

std::size_t TreeModel::depth() const {
  if (nodes.empty()) return 0;
  std::size_t deepest = 0;
  std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [id, depth] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, depth);
    const auto& node = nodes[id];
    if (!node.is_leaf()) {
      stack.emplace_back(node.left, depth + 1);
      stack.emplace_back(node.right, depth + 1);
    }
  }
  return deepest;
}

double TreeModel::predict_one(std::span<const double> x) const {
  std::uint32_t id = 0;
  while (!nodes[id].is_leaf()) {
    const auto& node = nodes[id];
    id = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
  }
  return nodes[id].value;
}

std::vector<double> TreeModel::predict(const Matrix& X) const {
  std::vector<double> out(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) out[i] = predict_one(X.row(i));
  return out;
}

TreeModel grow_tree(const Matrix& X, std::span<const double> y,
                    std::span<const std::size_t> sample, const TreeConfig& config,
                    std::size_t m_try, Rng* rng) {
  if (sample.empty() || X.rows() == 0) throw InputError("fit_tree: no training rows");
  if (y.size() != X.rows()) throw InputError("fit_tree: target length does not match rows");
  if (X.cols() == 0) throw InputError("fit_tree: no features");
  if (config.min_samples_leaf == 0) throw InputError("fit_tree: min_samples_leaf must be >= 1");
  Grower grower(X, y, config, m_try, rng);
  return grower.grow({sample.begin(), sample.end()});
}

TreeModel fit_tree(const Matrix& X, std::span<const double> y, const TreeConfig& config) {
  std::vector<std::size_t> all(X.rows());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return grow_tree(X, y, all, config, X.cols(), nullptr);
}

}  // namespace adview
