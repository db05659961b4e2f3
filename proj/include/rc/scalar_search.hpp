#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace rc {

struct ScalarMin {
    double x;
    double value;
};

/// Golden-section search for a minimum of f on [a, b]. Exact for unimodal f
/// (kinks included); otherwise returns a local minimum.
template <class F>
ScalarMin golden_min(F&& f, double a, double b, double rel_tol = 1e-13, int max_iter = 200) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    const double width0 = b - a;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > rel_tol * (width0 + std::abs(a)); ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? ScalarMin{c, fc} : ScalarMin{d, fd};
}

/// Global minimum of f on [lo, hi]: an n-point grid, then golden refinement
/// of the `keep` lowest discrete local minima within their neighbouring cells.
template <class F>
ScalarMin grid_min(F&& f, double lo, double hi, int n = 801, int keep = 8) {
    if (!(hi > lo)) return ScalarMin{lo, f(lo)};
    n = std::max(n, 3);
    std::vector<double> xs(n), fs(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1);
        fs[i] = f(xs[i]);
    }
    std::vector<int> local;
    for (int i = 0; i < n; ++i) {
        const bool left = i == 0 || fs[i] < fs[i - 1];
        const bool right = i + 1 == n || fs[i] <= fs[i + 1];
        if (left && right) local.push_back(i);
    }
    std::sort(local.begin(), local.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    if (static_cast<int>(local.size()) > keep) local.resize(keep);

    ScalarMin best{xs[0], fs[0]};
    for (int i = 1; i < n; ++i) {
        if (fs[i] < best.value) best = ScalarMin{xs[i], fs[i]};
    }
    for (int i : local) {
        const double a = xs[std::max(i - 1, 0)];
        const double b = xs[std::min(i + 1, n - 1)];
        const ScalarMin r = golden_min(f, a, b);
        if (r.value < best.value) best = r;
    }
    return best;
}

}  // namespace rc
