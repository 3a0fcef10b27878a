#include "modsurf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace modsurf {

const std::array<double, 15> GK15::x = {
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144845693013, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245,  0.405845151377397166906606412076961,
    0.586087235467691130294144845693013,  0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,  0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
};

const std::array<double, 15> GK15::wk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
};

const std::array<double, 15> GK15::wg = {
    0.0, 0.129484966168869693270611432679082, 0.0, 0.279705391489276667901467771423780,
    0.0, 0.381830050505118944950369775488975, 0.0, 0.417959183673469387755102040816327,
    0.0, 0.381830050505118944950369775488975, 0.0, 0.279705391489276667901467771423780,
    0.0, 0.129484966168869693270611432679082, 0.0,
};

QuadResult gk15(const std::function<cplx(cplx)>& f, cplx a, cplx b) {
  const cplx mid = 0.5 * (a + b), half = 0.5 * (b - a);
  cplx k{}, g{};
  for (std::size_t i = 0; i < 15; ++i) {
    const cplx v = f(mid + GK15::x[i] * half);
    k += GK15::wk[i] * v;
    g += GK15::wg[i] * v;
  }
  QuadResult r;
  r.value = k * half;
  r.error = std::abs((k - g) * half);
  r.evaluations = 15;
  r.intervals = 1;
  r.converged = true;
  return r;
}

QuadResult integrate_segment(const std::function<cplx(cplx)>& f, cplx a, cplx b, const QuadOptions& opts) {
  struct Piece {
    cplx a, b;
    QuadResult q;
    bool operator<(const Piece& o) const { return q.error < o.q.error; }
  };
  std::priority_queue<Piece> heap;
  QuadResult total = gk15(f, a, b);
  heap.push({a, b, total});
  int evals = total.evaluations;
  while (true) {
    const double target = std::max(opts.abs_tol, opts.rel_tol * std::abs(total.value));
    if (total.error <= target) {
      total.converged = true;
      break;
    }
    if (static_cast<int>(heap.size()) >= opts.max_intervals) {
      total.converged = false;
      break;
    }
    const Piece p = heap.top();
    heap.pop();
    const cplx m = 0.5 * (p.a + p.b);
    const QuadResult l = gk15(f, p.a, m), r = gk15(f, m, p.b);
    evals += 30;
    total.value += l.value + r.value - p.q.value;
    total.error += l.error + r.error - p.q.error;
    heap.push({p.a, m, l});
    heap.push({m, p.b, r});
  }
  // Recompute the sums to shed accumulated cancellation in the running totals.
  cplx v{};
  double e = 0;
  const int n = static_cast<int>(heap.size());
  while (!heap.empty()) {
    v += heap.top().q.value;
    e += heap.top().q.error;
    heap.pop();
  }
  total.value = v;
  total.error = e;
  total.evaluations = evals;
  total.intervals = n;
  return total;
}

}  // namespace modsurf
