#include "fman/sampling.hpp"

namespace fman {

namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the tag
  for (unsigned char ch : tag) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return mix(mix(seed) ^ mix(h) ^ mix(index + 0x632be59bd9b4e019ULL));
}

std::vector<std::vector<double>> sample_points(const Box& box, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> pts(static_cast<std::size_t>(count));
  for (auto& p : pts)
    for (int i = 0; i < box.dim(); ++i) p.push_back(rng.uniform(box.lo[i], box.hi[i]));
  return pts;
}

PolyField::PolyField(std::vector<double> center, Rng& rng, int max_degree) : center_(std::move(center)) {
  const auto n = static_cast<std::size_t>(dim());
  a_.resize(n);
  b_.assign(n * n, 0.0);
  q_.assign(n * n * n, 0.0);
  for (auto& v : a_) v = rng.uniform(-1.0, 1.0);
  if (max_degree >= 1)
    for (auto& v : b_) v = rng.uniform(-1.0, 1.0);
  if (max_degree >= 2)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j; k < n; ++k) {
          const double v = 0.5 * rng.uniform(-1.0, 1.0);
          q_[(i * n + j) * n + k] = v;
          q_[(i * n + k) * n + j] = v;
        }
}

PolyField PolyField::constant(std::vector<double> value, std::vector<double> center) {
  PolyField f;
  const auto n = center.size();
  f.center_ = std::move(center);
  f.a_ = std::move(value);
  f.b_.assign(n * n, 0.0);
  f.q_.assign(n * n * n, 0.0);
  return f;
}

FieldJets PolyField::jets(std::span<const double> x, int order) const {
  const int n = dim();
  std::vector<Jet> d;
  for (int j = 0; j < n; ++j) d.push_back(Jet::variable(j, x, order) - center_[static_cast<std::size_t>(j)]);
  FieldJets out;
  const auto un = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i < un; ++i) {
    Jet s = Jet::constant(a_[i], n, order);
    for (std::size_t j = 0; j < un; ++j) {
      if (b_[i * un + j] != 0.0) s += b_[i * un + j] * d[j];
      for (std::size_t k = 0; k < un; ++k)
        if (q_[(i * un + j) * un + k] != 0.0) s += q_[(i * un + j) * un + k] * (d[j] * d[k]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

VectorAtPoint PolyField::at(std::span<const double> x) const { return vector_at(jets(x, 1)); }

JetState random_jet_state(std::span<const double> u, Rng& rng) {
  JetState s;
  s.u.assign(u.begin(), u.end());
  for (std::size_t i = 0; i < u.size(); ++i) s.ux.push_back(rng.uniform(-1.0, 1.0));
  for (std::size_t i = 0; i < u.size(); ++i) s.uxx.push_back(rng.uniform(-1.0, 1.0));
  return s;
}

}  // namespace fman
