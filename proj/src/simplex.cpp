#include "rockrelax/simplex.hpp"

#include "rockrelax/random.hpp"

namespace rockrelax {

ProbVector::ProbVector(Eigen::VectorXd entries) : entries_(std::move(entries)) {
  if (!in_simplex(entries_)) throw DomainError("ProbVector: entries are not a probability vector");
  bool clamped = false;
  for (Eigen::Index i = 0; i < entries_.size(); ++i) {
    if (entries_(i) < 0.0) {
      entries_(i) = 0.0;
      clamped = true;
    }
  }
  if (clamped) entries_ /= entries_.sum();
}

double ProbVector::min_positive() const {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < entries_.size(); ++i) {
    if (entries_(i) > 0.0) best = std::min(best, entries_(i));
  }
  return best;
}

ProbVector project_to_simplex(const Eigen::Ref<const Eigen::VectorXd>& z) {
  return ProbVector(simplex_projection(z).point);
}

double normal_cone_distance(const ProbVector& q, const Eigen::Ref<const Eigen::VectorXd>& w) {
  return simplex_normal_cone_distance(q.entries(), w);
}

EmpiricalSampler::EmpiricalSampler(const ProbVector& p, std::uint64_t seed)
    : cumulative_(static_cast<std::size_t>(p.size())),
      counts_(static_cast<std::size_t>(p.size()), 0),
      state_(seed) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    acc += p(i);
    cumulative_[static_cast<std::size_t>(i)] = acc;
  }
}

void EmpiricalSampler::draw(std::uint64_t count) {
  SplitMix64 gen(state_);
  const std::size_t last = cumulative_.size() - 1;
  for (std::uint64_t k = 0; k < count; ++k) {
    const double u = gen.uniform01() * cumulative_[last];
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    std::size_t idx = it == cumulative_.end() ? last : static_cast<std::size_t>(it - cumulative_.begin());
    ++counts_[idx];
  }
  // SplitMix64 is counter based; advancing the stored counter resumes the stream.
  state_ += count * 0x9e3779b97f4a7c15ULL;
  drawn_ += count;
}

ProbVector EmpiricalSampler::frequencies() const {
  if (drawn_ == 0) throw DomainError("EmpiricalSampler: no draws yet");
  Eigen::VectorXd freq(static_cast<Eigen::Index>(counts_.size()));
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    freq(static_cast<Eigen::Index>(i)) = static_cast<double>(counts_[i]) / static_cast<double>(drawn_);
  }
  return ProbVector(std::move(freq));
}

ProbVector sample_empirical(const ProbVector& p, std::uint64_t count, std::uint64_t seed) {
  if (count == 0) throw DomainError("sample_empirical: count must be positive");
  EmpiricalSampler sampler(p, seed);
  sampler.draw(count);
  return sampler.frequencies();
}

namespace {
void grid_rec(Eigen::Index s, int remaining, Eigen::Index pos, int resolution, Eigen::VectorXd& cur,
              std::vector<Eigen::VectorXd>& out) {
  if (pos == s - 1) {
    cur(pos) = static_cast<double>(remaining) / resolution;
    out.push_back(cur);
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    cur(pos) = static_cast<double>(k) / resolution;
    grid_rec(s, remaining - k, pos + 1, resolution, cur, out);
  }
}
}  // namespace

std::vector<Eigen::VectorXd> simplex_grid(Eigen::Index s, int resolution) {
  if (s < 1 || resolution < 1) throw DomainError("simplex_grid: need s >= 1 and resolution >= 1");
  std::vector<Eigen::VectorXd> out;
  Eigen::VectorXd cur(s);
  grid_rec(s, resolution, 0, resolution, cur, out);
  return out;
}

std::vector<Eigen::VectorXd> simplex_vertices(Eigen::Index s) {
  std::vector<Eigen::VectorXd> out;
  for (Eigen::Index i = 0; i < s; ++i) out.push_back(Eigen::VectorXd::Unit(s, i));
  return out;
}

}  // namespace rockrelax
