/**
 * Rectilinear and smoothed arboreal hypersurface models in R^F.
 *
 * The smoothing profile is built from one closed form.  With
 * s(t) = t - b(t) strictly increasing on [0, delta/4], let F(s) = s for
 * s <= 0, F(s) = -b(t(s)) for 0 <= s <= delta/4, and F = 0 beyond; then
 *
 *     f(x1, x2) = x2 + F(x1 - x2)
 *
 * is C^1 with gradient (F', 1 - F') of norm >= 1/sqrt(2), zero locus
 * exactly {x1 = 0, x2 >= 0} u {x1 > 0, x2 = b(x1)}, and the two flat
 * identities hold because F vanishes for s >= delta/4 and equals s for
 * s <= 0.  The level sets of f are the diagonal translates of its zero
 * locus, which is what makes the one-variable reduction work.
 */
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "arboreal/random.hpp"
#include "arboreal/tree.hpp"

namespace arboreal {

class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SmoothingProfile {
    double delta = 0.1;
    double kappa = 0.0;  // normalizes max |b| to delta/8

    static SmoothingProfile standard(double delta = 0.1) {
        SmoothingProfile p;
        p.delta = delta;
        // max of sqrt(t) (delta/4 - t)^2 on (0, delta/4) is at t = delta/20
        double c = delta / 4.0;
        double peak = std::sqrt(c / 5.0) * (c - c / 5.0) * (c - c / 5.0);
        p.kappa = (delta / 8.0) / peak;
        return p;
    }

    // b(t) = -kappa sqrt(t) (delta/4 - t)^2 on (0, delta/4), 0 elsewhere:
    // support and bound are immediate, b'(0+) = -infinity
    double b(double t) const {
        if (t <= 0.0 || t >= delta / 4.0) return 0.0;
        double r = delta / 4.0 - t;
        return -kappa * std::sqrt(t) * r * r;
    }

    /// Inverse of s(t) = t - b(t) on [0, delta/4] (monotone; |b'| < 1 on
    /// the increasing branch keeps s' positive).  Fixed-count bisection.
    double t_of_s(double s) const {
        if (s <= 0.0) return 0.0;
        if (s >= delta / 4.0) return delta / 4.0;
        double lo = 0.0, hi = delta / 4.0;
        for (int i = 0; i < 80; ++i) {
            double mid = 0.5 * (lo + hi);
            if (mid - b(mid) < s) lo = mid;
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    }

    double F(double s) const {
        if (s <= 0.0) return s;
        if (s >= delta / 4.0) return 0.0;
        return -b(t_of_s(s));
    }

    double f(double x1, double x2) const { return x2 + F(x1 - x2); }

    /// Quintic bump: 1 on |t| <= delta/2, 0 outside |t| <= delta.
    double c(double t) const {
        double a = std::abs(t);
        if (a <= delta / 2.0) return 1.0;
        if (a >= delta) return 0.0;
        double u = (a - delta / 2.0) / (delta / 2.0);
        double step = u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
        return 1.0 - step;
    }
};

// ---------------------------------------------------------------------------
// Coordinates and rectilinear membership

struct Coordinates {
    const RootedForest* forest = nullptr;
    std::vector<double> values;

    double operator[](int v) const { return values[v]; }
    double& operator[](int v) { return values[v]; }

    static Coordinates zero(const RootedForest& f) {
        return Coordinates{&f, std::vector<double>(static_cast<size_t>(f.size()), 0.0)};
    }

    void check_domain(const RootedForest& f) const {
        if (forest != &f || static_cast<int>(values.size()) != f.size())
            throw DomainError("coordinates are not defined on the expected vertex set");
    }
};

enum class Region {
    Quadrant,       // Q_a:  x_b >= 0 for all b <= a
    Hypersurface,   // H_a = boundary of Q_a
    Sheet,          // P_a:  x_a = 0, x_b >= 0 for b < a
    SheetOpen,      // P_a with strict inequalities
    ForestUnion,    // H_F: union of H_a over all vertices
};

inline bool member_rectilinear(const RootedForest& f, Region region, int alpha, const Coordinates& x) {
    x.check_domain(f);
    auto below_nonneg = [&](int a, bool strict) {
        for (int v = 0; v < f.size(); ++v) {
            if (!f.leq(v, a) || v == a) continue;
            if (strict ? !(x[v] > 0.0) : !(x[v] >= 0.0)) return false;
        }
        return true;
    };
    switch (region) {
        case Region::Quadrant: {
            for (int v = 0; v < f.size(); ++v)
                if (f.leq(v, alpha) && !(x[v] >= 0.0)) return false;
            return true;
        }
        case Region::Hypersurface: {
            bool some_zero = false;
            for (int v = 0; v < f.size(); ++v) {
                if (!f.leq(v, alpha)) continue;
                if (!(x[v] >= 0.0)) return false;
                some_zero |= (x[v] == 0.0);
            }
            return some_zero;
        }
        case Region::Sheet:
            return x[alpha] == 0.0 && below_nonneg(alpha, false);
        case Region::SheetOpen:
            return x[alpha] == 0.0 && below_nonneg(alpha, true);
        case Region::ForestUnion: {
            for (int v = 0; v < f.size(); ++v)
                if (member_rectilinear(f, Region::Hypersurface, v, x)) return true;
            return false;
        }
    }
    return false;
}

/// H_{F*} of a leafy forest: union of the sheets P_a over the vertices of
/// F+ other than the marked leaves.  Coordinates live on F+.
inline bool member_rectilinear_leafy(const RootedForest& fplus, const std::set<std::string>& ell,
                                     const Coordinates& x) {
    x.check_domain(fplus);
    for (int v = 0; v < fplus.size(); ++v) {
        if (ell.count(fplus.name(v))) continue;
        if (member_rectilinear(fplus, Region::Sheet, v, x)) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Smoothed model

/// h_a: recursive through the ancestor path, h_root = x_root.  Depends
/// only on the coordinates x_b with b <= a.
inline double h_value(const RootedForest& f, const SmoothingProfile& pr, int alpha,
                      const Coordinates& x) {
    x.check_domain(f);
    std::vector<int> path;
    for (int v = alpha; v != -1; v = f.parent(v)) path.push_back(v);
    double h = x[path.back()];  // root
    for (int i = static_cast<int>(path.size()) - 2; i >= 0; --i) h = pr.f(h, x[path[i]]);
    return h;
}

inline bool member_smoothed_sheet(const RootedForest& f, const SmoothingProfile& pr, int alpha,
                                  const Coordinates& x, double tol) {
    double h = h_value(f, pr, alpha, x);
    if (std::abs(h) > tol) return false;
    int p = f.parent(alpha);
    if (p == -1) return true;
    return h_value(f, pr, p, x) >= -tol;
}

/// Unit-time flow of xdot = -B c(x): identity when B = 0, exact translate
/// inside |x| <= delta/4 (the flow stays where c = 1), fixed-step RK4
/// otherwise.
inline double flow_coordinate(const SmoothingProfile& pr, double B, double x) {
    if (B == 0.0) return x;
    if (std::abs(x) <= pr.delta / 4.0) return x - B;
    const int steps = 64;
    double dt = 1.0 / steps;
    for (int i = 0; i < steps; ++i) {
        double k1 = -B * pr.c(x);
        double k2 = -B * pr.c(x + 0.5 * dt * k1);
        double k3 = -B * pr.c(x + 0.5 * dt * k2);
        double k4 = -B * pr.c(x + dt * k3);
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
}

/// The comparison map F_F, as the composition of the per-vertex flows in
/// an order compatible with the partial order, maxima first.  Each step
/// reads h at the parent from coordinates not yet modified.
inline Coordinates comparison_map(const RootedForest& f, const SmoothingProfile& pr,
                                  const Coordinates& x) {
    x.check_domain(f);
    Coordinates y = x;
    for (int v = f.size() - 1; v >= 0; --v) {
        int p = f.parent(v);
        if (p == -1) continue;  // root flows are the identity
        // h at the parent depends only on vertices <= parent < v, whose
        // values the remaining (earlier) flows do not touch, so the input
        // coordinates are the current ones
        double hp = h_value(f, pr, p, x);
        y[v] = flow_coordinate(pr, pr.b(hp), x[v]);
    }
    return y;
}

// ---------------------------------------------------------------------------
// Samplers (zero-locus solves are closed form: x = b(h_parent))

/// Draw coordinates with h_alpha = 0 exactly: ancestors are resampled
/// until h at the parent is nonnegative, then x_alpha sits on the zero
/// locus of f.
template <class Rng>
std::optional<Coordinates> sample_smoothed_sheet(const RootedForest& f, const SmoothingProfile& pr,
                                                 int alpha, Rng& rng, double box, int max_tries = 200) {
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        Coordinates x = Coordinates::zero(f);
        for (int v = 0; v < f.size(); ++v) x[v] = uniform_double(rng, -box, box);
        int p = f.parent(alpha);
        if (p == -1) {
            x[alpha] = 0.0;
            return x;
        }
        double hp = h_value(f, pr, p, x);
        if (hp < 0.0) continue;
        x[alpha] = (hp == 0.0) ? std::abs(x[alpha]) : pr.b(hp);
        return x;
    }
    return std::nullopt;
}

template <class Rng>
std::optional<Coordinates> sample_smoothed_quadrant(const RootedForest& f, const SmoothingProfile& pr,
                                                    int alpha, Rng& rng, double box,
                                                    int max_tries = 400) {
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        Coordinates x = Coordinates::zero(f);
        for (int v = 0; v < f.size(); ++v) x[v] = uniform_double(rng, -box, box);
        if (h_value(f, pr, alpha, x) >= 0.0) return x;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Presentation agreement and profile verification

struct PresentationReport {
    long long points_checked = 0;
    std::optional<std::vector<double>> disagreement;  // first point where the three unions differ
};

/// H_F = union H_a = union P_a = union P_a-open, checked pointwise on the
/// full sign grid {-1,0,1}^V and on random samples.
template <class Rng>
PresentationReport check_presentations(const RootedForest& f, long long samples, Rng& rng) {
    PresentationReport report;
    auto probe = [&](Coordinates& x) -> bool {
        bool via_h = member_rectilinear(f, Region::ForestUnion, 0, x);
        bool via_p = false, via_po = false;
        for (int v = 0; v < f.size() && !(via_p && via_po); ++v) {
            via_p = via_p || member_rectilinear(f, Region::Sheet, v, x);
            via_po = via_po || member_rectilinear(f, Region::SheetOpen, v, x);
        }
        ++report.points_checked;
        if (via_h != via_p || via_h != via_po) {
            report.disagreement = x.values;
            return false;
        }
        return true;
    };

    const int n = f.size();
    if (n <= 12) {
        long long total = 1;
        for (int i = 0; i < n; ++i) total *= 3;
        for (long long code = 0; code < total; ++code) {
            Coordinates x = Coordinates::zero(f);
            long long c = code;
            for (int v = 0; v < n; ++v) {
                x[v] = static_cast<double>(c % 3 - 1);
                c /= 3;
            }
            if (!probe(x)) return report;
        }
    }
    for (long long i = 0; i < samples; ++i) {
        Coordinates x = Coordinates::zero(f);
        for (int v = 0; v < n; ++v) x[v] = uniform_double(rng, -2.0, 2.0);
        if (!probe(x)) return report;
    }
    return report;
}

struct ProfileCheck {
    std::string name;
    bool pass = false;
    double worst = 0.0;  // worst violation magnitude (0 when clean)
    std::string detail;
};

struct ProfileReport {
    std::vector<ProfileCheck> checks;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// Grid verification of the (b, f, c) properties.  Report-only: every
/// check records its worst violation.
template <class Profile>
ProfileReport verify_profile(const Profile& pr, int grid = 512, double tol = 1e-6) {
    ProfileReport report;
    const double delta = pr.delta;
    const double lo = -3.0 * delta, hi = 3.0 * delta;
    auto at = [&](int i) { return lo + (hi - lo) * i / (grid - 1); };

    {  // b: bound and support
        ProfileCheck chk{"b_bound_and_support"};
        chk.pass = true;
        for (int i = 0; i < grid; ++i) {
            double t = at(i);
            double v = pr.b(t);
            if (std::abs(v) >= delta / 4.0) {
                chk.pass = false;
                chk.worst = std::max(chk.worst, std::abs(v) - delta / 4.0);
            }
            if ((t <= 0.0 || t >= delta / 4.0) && v != 0.0) {
                chk.pass = false;
                chk.worst = std::max(chk.worst, std::abs(v));
            }
        }
        report.checks.push_back(chk);
    }
    {  // b'(0+) -> -infinity: forward slopes must fall below -1/h^{1/4}
        ProfileCheck chk{"b_derivative_divergence"};
        chk.pass = true;
        for (int k = 3; k <= 12; ++k) {
            double h = delta * std::pow(10.0, -k);
            double slope = (pr.b(h) - pr.b(0.0)) / h;
            double bar = -1.0 / std::pow(h, 0.25);
            if (!(slope <= bar)) {
                chk.pass = false;
                chk.worst = std::max(chk.worst, slope - bar);
                chk.detail = "slope " + std::to_string(slope) + " at h = " + std::to_string(h);
            }
        }
        report.checks.push_back(chk);
    }
    {  // f is a submersion: gradient norm bounded below on the grid
        ProfileCheck chk{"f_gradient_lower_bound"};
        chk.pass = true;
        double minnorm = 1e300;
        double step = (hi - lo) / (grid - 1);
        for (int i = 1; i + 1 < grid; ++i)
            for (int j = 1; j + 1 < grid; ++j) {
                double x1 = at(i), x2 = at(j);
                double gx = (pr.f(x1 + step, x2) - pr.f(x1 - step, x2)) / (2 * step);
                double gy = (pr.f(x1, x2 + step) - pr.f(x1, x2 - step)) / (2 * step);
                minnorm = std::min(minnorm, std::hypot(gx, gy));
            }
        chk.pass = minnorm >= 0.5;
        chk.worst = chk.pass ? 0.0 : 0.5 - minnorm;
        chk.detail = "min grad norm " + std::to_string(minnorm);
        report.checks.push_back(chk);
    }
    {  // zero locus: f vanishes on the corner set, and near-zero values
       // sit within sqrt(2)|f| of it (level sets are diagonal translates)
        ProfileCheck chk{"f_zero_locus"};
        chk.pass = true;
        for (int i = 0; i < 4 * grid; ++i) {
            double y = 3.0 * delta * i / (4 * grid - 1);
            double v = std::abs(pr.f(0.0, y));
            if (v > tol) {
                chk.pass = false;
                chk.worst = std::max(chk.worst, v);
                chk.detail = "wall point y = " + std::to_string(y);
            }
            double t = 3.0 * delta * (i + 1) / (4 * grid);
            double vb = std::abs(pr.f(t, pr.b(t)));
            if (vb > tol) {
                chk.pass = false;
                chk.worst = std::max(chk.worst, vb);
                chk.detail = "graph point t = " + std::to_string(t);
            }
        }
        // distance side, on a coarse sub-grid of near-zero points
        std::vector<std::array<double, 2>> zs;
        for (int i = 0; i < 4 * grid; ++i) {
            zs.push_back({0.0, 4.0 * delta * i / (4 * grid - 1)});
            double t = 4.0 * delta * (i + 1) / (4 * grid);
            zs.push_back({t, pr.b(t)});
        }
        for (int i = 0; i < grid; i += 4)
            for (int j = 0; j < grid; j += 4) {
                double x1 = at(i), x2 = at(j);
                double v = pr.f(x1, x2);
                if (std::abs(v) > 1e-3 * delta) continue;
                double dist = 1e300;
                for (auto& z : zs) dist = std::min(dist, std::hypot(x1 - z[0], x2 - z[1]));
                double allowed = std::sqrt(2.0) * std::abs(v) + 6.0 * delta / grid;
                if (dist > allowed) {
                    chk.pass = false;
                    chk.worst = std::max(chk.worst, dist - allowed);
                    chk.detail = "stray zero near (" + std::to_string(x1) + ", " + std::to_string(x2) + ")";
                }
            }
        report.checks.push_back(chk);
    }
    {  // flat identities (3) and (4)
        ProfileCheck chk{"f_flat_identities"};
        chk.pass = true;
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) {
                double x1 = at(i), x2 = at(j);
                if (x1 > 2 * delta && std::abs(x2) < delta) {
                    double d = std::abs(pr.f(x1, x2) - x2);
                    if (d > tol) { chk.pass = false; chk.worst = std::max(chk.worst, d); }
                }
                if (std::abs(x1) < delta && x2 > 2 * delta) {
                    double d = std::abs(pr.f(x1, x2) - x1);
                    if (d > tol) { chk.pass = false; chk.worst = std::max(chk.worst, d); }
                }
            }
        report.checks.push_back(chk);
    }
    {  // property (5): f < delta forces x1 < delta or x2 < delta
        ProfileCheck chk{"f_small_value_implication"};
        chk.pass = true;
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) {
                double x1 = at(i), x2 = at(j);
                if (pr.f(x1, x2) < delta && x1 >= delta && x2 >= delta) {
                    chk.pass = false;
                    chk.worst = std::max(chk.worst, delta - pr.f(x1, x2));
                }
            }
        report.checks.push_back(chk);
    }
    {  // c: plateau, support, range
        ProfileCheck chk{"c_bump"};
        chk.pass = true;
        for (int i = 0; i < grid; ++i) {
            double t = at(i);
            double v = pr.c(t);
            if (v < 0.0 || v > 1.0) chk.pass = false;
            if (std::abs(t) <= delta / 2.0 && std::abs(v - 1.0) > tol) chk.pass = false;
            if (std::abs(t) >= delta && std::abs(v) > tol) chk.pass = false;
        }
        report.checks.push_back(chk);
    }
    return report;
}

}  // namespace arboreal
