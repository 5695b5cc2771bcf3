#include "rcx/sixvertex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rcx {

namespace {
constexpr double kPi = 3.14159265358979323846;

int popcount(uint64_t x) { return __builtin_popcountll(x); }

// vertex weight for (bottom, left, top, right) arrows, 1 = up/right
double vertex_weight(int b, int l, int t, int r, const SixVertexWeights& w) {
  if (b + l != t + r) return 0.0;  // ice rule
  if (b == l && l == t && t == r) return w.a;             // 1,2
  if (b == t && l == r && b != l) return w.b;             // 3,4
  return w.c;                                             // 5,6
}

}  // namespace

SixVertexWeights weights_from(double q, double theta) {
  if (!(q >= 1.0 && q <= 4.0)) throw std::invalid_argument("q outside [1,4]");
  if (!(theta > 0.0 && theta < kPi)) throw std::invalid_argument("theta outside (0,pi)");
  SixVertexWeights w;
  w.zeta = std::acos(std::sqrt(q) / 2.0);
  if (w.zeta < 1e-8) {  // q -> 4 limit
    w.a = 2.0 * (1.0 - theta / kPi);
    w.b = 2.0 * theta / kPi;
    w.c = 2.0;
    return w;
  }
  double s = std::sin(w.zeta / 2.0);
  w.a = std::sin((1.0 - theta / kPi) * w.zeta) / s;
  w.b = std::sin(theta * w.zeta / kPi) / s;
  w.c = 2.0 * std::cos(w.zeta / 2.0);
  return w;
}

double TransferBlock::entry(int to, int from) const {
  if (!dense.empty()) return dense[static_cast<size_t>(to) + static_cast<size_t>(dim()) * static_cast<size_t>(from)];
  // recompute on the fly
  uint64_t s = states[static_cast<size_t>(from)], t = states[static_cast<size_t>(to)];
  double total = 0.0;
  for (int l1 = 0; l1 < 2; ++l1) {
    double prod = 1.0;
    int l = l1;
    bool ok = true;
    for (int j = 0; j < N; ++j) {
      int bj = static_cast<int>((s >> j) & 1ull);
      int tj = static_cast<int>((t >> j) & 1ull);
      int r = bj + l - tj;
      if (r < 0 || r > 1) {
        ok = false;
        break;
      }
      prod *= vertex_weight(bj, l, tj, r, w);
      l = r;
    }
    if (ok && l == l1) total += prod;
  }
  return total;
}

TransferBlock build_transfer_block(int N, int k, const SixVertexWeights& w, int dense_cap) {
  if (N <= 0 || N % 2 != 0) throw std::invalid_argument("N must be even and positive");
  if (N > 16) throw std::invalid_argument("transfer blocks capped at N = 16");
  if (std::abs(k) > N / 2) throw std::invalid_argument("|k| must be at most N/2");
  TransferBlock blk;
  blk.N = N;
  blk.k = k;
  blk.w = w;
  const int ups = N / 2 + k;
  for (uint64_t s = 0; s < (1ull << N); ++s)
    if (popcount(s) == ups) blk.states.push_back(s);
  const int D = blk.dim();
  if (D <= dense_cap) {
    blk.dense.assign(static_cast<size_t>(D) * static_cast<size_t>(D), 0.0);
    // enumerate completions column by column with the carried arrow
    std::vector<int> index(static_cast<size_t>(1ull << N), -1);
    for (int i = 0; i < D; ++i) index[blk.states[static_cast<size_t>(i)]] = i;
    for (int from = 0; from < D; ++from) {
      uint64_t s = blk.states[static_cast<size_t>(from)];
      // depth-first over output rows and the carried arrow
      struct Node {
        int j, l;
        uint64_t t;
        double prod;
      };
      for (int l1 = 0; l1 < 2; ++l1) {
        std::vector<Node> stack{{0, l1, 0ull, 1.0}};
        while (!stack.empty()) {
          Node nd = stack.back();
          stack.pop_back();
          if (nd.j == N) {
            if (nd.l == l1 && popcount(nd.t) == ups)
              blk.dense[static_cast<size_t>(index[nd.t]) +
                        static_cast<size_t>(D) * static_cast<size_t>(from)] += nd.prod;
            continue;
          }
          int bj = static_cast<int>((s >> nd.j) & 1ull);
          for (int tj = 0; tj < 2; ++tj) {
            int r = bj + nd.l - tj;
            if (r < 0 || r > 1) continue;
            double vw = vertex_weight(bj, nd.l, tj, r, w);
            if (vw == 0.0) continue;
            stack.push_back({nd.j + 1, r, nd.t | (static_cast<uint64_t>(tj) << nd.j),
                             nd.prod * vw});
          }
        }
      }
    }
  }
  return blk;
}

void TransferBlock::apply(const std::vector<double>& x, std::vector<double>& y) const {
  const int D = dim();
  y.assign(static_cast<size_t>(D), 0.0);
  if (!dense.empty()) {
    for (int from = 0; from < D; ++from) {
      double xv = x[static_cast<size_t>(from)];
      if (xv == 0.0) continue;
      const double* col = &dense[static_cast<size_t>(D) * static_cast<size_t>(from)];
      for (int to = 0; to < D; ++to) y[static_cast<size_t>(to)] += col[to] * xv;
    }
    return;
  }
  // implicit: enumerate completions per source state
  std::vector<int> index(static_cast<size_t>(1ull << N), -1);
  for (int i = 0; i < D; ++i) index[states[static_cast<size_t>(i)]] = i;
  const int ups = N / 2 + k;
  struct Node {
    int j, l;
    uint64_t t;
    double prod;
  };
  for (int from = 0; from < D; ++from) {
    double xv = x[static_cast<size_t>(from)];
    if (xv == 0.0) continue;
    uint64_t s = states[static_cast<size_t>(from)];
    for (int l1 = 0; l1 < 2; ++l1) {
      std::vector<Node> stack{{0, l1, 0ull, xv}};
      while (!stack.empty()) {
        Node nd = stack.back();
        stack.pop_back();
        if (nd.j == N) {
          if (nd.l == l1 && popcount(nd.t) == ups) y[static_cast<size_t>(index[nd.t])] += nd.prod;
          continue;
        }
        int bj = static_cast<int>((s >> nd.j) & 1ull);
        for (int tj = 0; tj < 2; ++tj) {
          int r = bj + nd.l - tj;
          if (r < 0 || r > 1) continue;
          double vw = vertex_weight(bj, nd.l, tj, r, w);
          if (vw == 0.0) continue;
          stack.push_back({nd.j + 1, r, nd.t | (static_cast<uint64_t>(tj) << nd.j), nd.prod * vw});
        }
      }
    }
  }
}

EigenResult leading_eigenvalue(const TransferBlock& block, double tol, int64_t max_iters) {
  const int D = block.dim();
  if (D == 0) throw std::invalid_argument("empty block");
  EigenResult res;
  std::vector<double> v(static_cast<size_t>(D), 1.0 / std::sqrt(static_cast<double>(D)));
  std::vector<double> w;
  for (int64_t it = 1; it <= max_iters; ++it) {
    block.apply(v, w);
    double nrm = 0;
    for (double x : w) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) throw std::runtime_error("block annihilated the positive cone");
    for (double& x : w) x /= nrm;
    // Rayleigh quotient and residual
    std::vector<double> mw;
    block.apply(w, mw);
    double lam = 0;
    for (int i = 0; i < D; ++i) lam += w[static_cast<size_t>(i)] * mw[static_cast<size_t>(i)];
    double resid = 0;
    for (int i = 0; i < D; ++i) {
      double d = mw[static_cast<size_t>(i)] - lam * w[static_cast<size_t>(i)];
      resid += d * d;
    }
    resid = std::sqrt(resid) / std::abs(lam);
    v = w;
    if (resid < tol) {
      res.lambda = lam;
      res.vec = v;
      res.residual = resid;
      res.iterations = it;
      return res;
    }
  }
  throw std::runtime_error("power iteration did not converge (reducible or degenerate block?)");
}

double commutator_norm(int N, const SixVertexWeights& w1, const SixVertexWeights& w2) {
  if (N > 12) throw std::invalid_argument("commutator check capped at N = 12");
  double worst = 0.0;
  for (int k = -N / 2; k <= N / 2; ++k) {
    TransferBlock b1 = build_transfer_block(N, k, w1, /*dense_cap=*/4096);
    TransferBlock b2 = build_transfer_block(N, k, w2, /*dense_cap=*/4096);
    const int D = b1.dim();
    auto mul = [D](const std::vector<double>& A, const std::vector<double>& B) {
      std::vector<double> C(static_cast<size_t>(D) * static_cast<size_t>(D), 0.0);
      for (int j = 0; j < D; ++j)
        for (int l = 0; l < D; ++l) {
          double b = B[static_cast<size_t>(l) + static_cast<size_t>(D) * static_cast<size_t>(j)];
          if (b == 0.0) continue;
          const double* acol = &A[static_cast<size_t>(D) * static_cast<size_t>(l)];
          double* ccol = &C[static_cast<size_t>(D) * static_cast<size_t>(j)];
          for (int i = 0; i < D; ++i) ccol[i] += acol[i] * b;
        }
      return C;
    };
    auto fro = [](const std::vector<double>& A) {
      double s = 0;
      for (double x : A) s += x * x;
      return std::sqrt(s);
    };
    std::vector<double> ab = mul(b1.dense, b2.dense), ba = mul(b2.dense, b1.dense);
    double dn = 0;
    for (size_t i = 0; i < ab.size(); ++i) {
      double d = ab[i] - ba[i];
      dn += d * d;
    }
    double denom = fro(b1.dense) * fro(b2.dense);
    if (denom > 0) worst = std::max(worst, std::sqrt(dn) / denom);
  }
  return worst;
}

double commutator_norm(int N, double q, double theta1, double theta2) {
  return commutator_norm(N, weights_from(q, theta1), weights_from(q, theta2));
}

}  // namespace rcx
