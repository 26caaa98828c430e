#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gradgibbs/util.hpp"

namespace gradgibbs {

// Two-species coupling model: each bond carries kappa_o ("ordered", stiff
// well) or kappa_d ("disordered", soft well), and a bond is ordered with
// a-priori weight p. r and xi are the derived combinations the anisotropic
// block formulas are written in.
struct ModelParams {
    double p = 0.5;
    double kappa_o = 100.0;
    double kappa_d = 0.01;

    void validate() const {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("p must lie in [0,1], got " + full_precision(p));
        if (!(kappa_o > 0.0) || !(kappa_d > 0.0))
            throw std::invalid_argument("couplings must be positive");
        if (kappa_o < kappa_d)
            throw std::invalid_argument("kappa_o must be the stiffer coupling (kappa_o >= kappa_d)");
    }

    double ratio() const { return kappa_o / kappa_d; }
    double xi() const { return kappa_d / kappa_o; }
    // r = (k_o + k_d)/(k_o - k_d); only defined for distinct couplings.
    double r() const {
        if (kappa_o == kappa_d)
            throw std::invalid_argument("r is undefined for equal couplings");
        return (kappa_o + kappa_d) / (kappa_o - kappa_d);
    }
};

// The six periodic coupling patterns: the two homogeneous ones, the two
// "staircase" mixed patterns (UO mostly ordered, UD mostly disordered), and
// the two half-and-half ones (MP splits by orientation, MA by parity).
enum class Pattern { O, D, UO, UD, MP, MA };

inline const char* pattern_name(Pattern a) {
    switch (a) {
        case Pattern::O: return "O";
        case Pattern::D: return "D";
        case Pattern::UO: return "UO";
        case Pattern::UD: return "UD";
        case Pattern::MP: return "MP";
        case Pattern::MA: return "MA";
    }
    throw std::logic_error("bad pattern enum");
}

inline Pattern parse_pattern(const std::string& s) {
    for (Pattern a : {Pattern::O, Pattern::D, Pattern::UO, Pattern::UD, Pattern::MP, Pattern::MA})
        if (s == pattern_name(a)) return a;
    throw std::invalid_argument("unknown pattern '" + s + "' (expected O, D, UO, UD, MP or MA)");
}

inline constexpr std::array<Pattern, 6> all_patterns = {Pattern::O,  Pattern::D,  Pattern::UO,
                                                        Pattern::UD, Pattern::MP, Pattern::MA};

// Gradient configs come in two flavours: FULL is the physical space (all
// plaquette circulations vanish and both global windings vanish, i.e. eta is
// the gradient of a height field); STAR drops the winding constraints and
// keeps only the local ones.
enum class SpaceTag { Full, Star };

// Even L x L torus. Sites are indexed s = x + L*y; bonds 2*s + dir with
// dir 0 = horizontal (towards +x) and dir 1 = vertical (towards +y), which is
// lexicographic in (y, x, direction). Plaquettes are indexed by their
// lower-left corner site.
class Torus {
public:
    explicit Torus(int L) : L_(L) {
        if (L < 2 || L % 2 != 0)
            throw std::invalid_argument("torus side must be an even integer >= 2, got " +
                                        std::to_string(L));
    }

    int L() const { return L_; }
    int n_sites() const { return L_ * L_; }
    int n_bonds() const { return 2 * L_ * L_; }
    int n_plaquettes() const { return L_ * L_; }

    int mod(int c) const {
        int m = c % L_;
        return m < 0 ? m + L_ : m;
    }

    int site(int x, int y) const { return mod(x) + L_ * mod(y); }
    int site_x(int s) const { return s % L_; }
    int site_y(int s) const { return s / L_; }

    int bond(int x, int y, int dir) const { return 2 * site(x, y) + dir; }
    int bond_site(int b) const { return b >> 1; }
    int bond_dir(int b) const { return b & 1; }  // 0 horizontal, 1 vertical
    bool bond_horizontal(int b) const { return bond_dir(b) == 0; }

    // (tail, head): the bond points from tail to head in its +direction.
    std::pair<int, int> bond_ends(int b) const {
        const int s = bond_site(b);
        const int x = site_x(s), y = site_y(s);
        return bond_dir(b) == 0 ? std::make_pair(s, site(x + 1, y))
                                : std::make_pair(s, site(x, y + 1));
    }

    // An "even" bond: horizontal with even y, or vertical with even x.
    bool bond_even(int b) const {
        const int s = bond_site(b);
        return bond_dir(b) == 0 ? (site_y(s) % 2 == 0) : (site_x(s) % 2 == 0);
    }

    // Bonds of the plaquette with lower-left corner q, listed counterclockwise
    // as (bottom, right, top, left). bottom/top are horizontal, right/left
    // vertical; the circulation below takes bottom,right with + and top,left
    // with - so that it measures the counterclockwise loop sum.
    std::array<int, 4> plaquette(int q) const {
        const int x = site_x(q), y = site_y(q);
        return {bond(x, y, 0), bond(x + 1, y, 1), bond(x, y + 1, 0), bond(x, y, 1)};
    }

    // Crossing pairing with the dual lattice, composed with the dual lattice's
    // point reflection so the map is an involution on bond indices:
    // hor@(x,y) <-> vert@(-x,-y). Orientation classes swap, as a crossing must.
    int dual_bond(int b) const {
        const int s = bond_site(b);
        const int x = mod(-site_x(s)), y = mod(-site_y(s));
        return 2 * (x + L_ * y) + (1 - bond_dir(b));
    }

private:
    int L_;
};

struct HeightField {
    std::vector<double> phi;  // phi[0] is the pinned origin, kept at 0
};

struct GradientConfig {
    std::vector<double> eta;  // indexed by bond
    SpaceTag tag = SpaceTag::Full;
};

struct CouplingConfig {
    std::vector<double> kappa;  // indexed by bond, all positive
};

inline GradientConfig gradient_of(const HeightField& h, const Torus& t) {
    if (static_cast<int>(h.phi.size()) != t.n_sites())
        throw std::invalid_argument("height field size mismatch");
    GradientConfig g;
    g.tag = SpaceTag::Full;
    g.eta.resize(t.n_bonds());
    for (int b = 0; b < t.n_bonds(); ++b) {
        auto [tail, head] = t.bond_ends(b);
        g.eta[b] = h.phi[head] - h.phi[tail];
    }
    return g;
}

// Counterclockwise circulation around plaquette q.
inline double curl(const GradientConfig& g, const Torus& t, int q) {
    const auto p = t.plaquette(q);
    return g.eta[p[0]] + g.eta[p[1]] - g.eta[p[2]] - g.eta[p[3]];
}

// (sum over all horizontal bonds, sum over all vertical bonds).
inline std::pair<double, double> windings(const GradientConfig& g, const Torus& t) {
    std::vector<double> hs, vs;
    hs.reserve(t.n_sites());
    vs.reserve(t.n_sites());
    for (int b = 0; b < t.n_bonds(); ++b)
        (t.bond_horizontal(b) ? hs : vs).push_back(g.eta[b]);
    return {pairwise_sum(hs), pairwise_sum(vs)};
}

// Constraint check for a loaded or constructed gradient config: circulations
// always, windings only in the FULL space.
inline void validate(const GradientConfig& g, const Torus& t, double tol = 1e-9) {
    if (static_cast<int>(g.eta.size()) != t.n_bonds())
        throw std::invalid_argument("gradient config size mismatch");
    for (int q = 0; q < t.n_plaquettes(); ++q) {
        const double c = curl(g, t, q);
        if (std::abs(c) > tol)
            throw std::invalid_argument("circulation violated at plaquette " + std::to_string(q) +
                                        ": " + full_precision(c));
    }
    if (g.tag == SpaceTag::Full) {
        auto [wh, wv] = windings(g, t);
        if (std::abs(wh) > tol || std::abs(wv) > tol)
            throw std::invalid_argument("winding violated: (" + full_precision(wh) + ", " +
                                        full_precision(wv) + ")");
    }
}

// Which bonds a pattern marks as ordered (kappa_o).
inline std::vector<std::uint8_t> pattern_ordered_mask(Pattern a, const Torus& t) {
    std::vector<std::uint8_t> m(t.n_bonds(), 0);
    for (int b = 0; b < t.n_bonds(); ++b) {
        const bool hor = t.bond_horizontal(b);
        const bool even = t.bond_even(b);
        switch (a) {
            case Pattern::O: m[b] = 1; break;
            case Pattern::D: m[b] = 0; break;
            case Pattern::UO: m[b] = hor || even; break;          // all horizontal + even vertical
            case Pattern::UD: m[b] = !hor && !even; break;        // odd vertical only
            case Pattern::MP: m[b] = hor; break;                  // split by orientation
            case Pattern::MA: m[b] = even; break;                 // split by parity
        }
    }
    return m;
}

inline CouplingConfig coupling_from_labels(const std::vector<std::uint8_t>& ordered,
                                           const ModelParams& mp, const Torus& t) {
    if (static_cast<int>(ordered.size()) != t.n_bonds())
        throw std::invalid_argument("label vector size mismatch");
    CouplingConfig c;
    c.kappa.resize(t.n_bonds());
    for (int b = 0; b < t.n_bonds(); ++b) c.kappa[b] = ordered[b] ? mp.kappa_o : mp.kappa_d;
    return c;
}

inline CouplingConfig pattern_coupling(Pattern a, const ModelParams& mp, const Torus& t) {
    return coupling_from_labels(pattern_ordered_mask(a, t), mp, t);
}

inline int count_ordered(const std::vector<std::uint8_t>& ordered) {
    int n = 0;
    for (auto v : ordered) n += v ? 1 : 0;
    return n;
}

// ---------------------------------------------------------------------------
// Lattice reflections. Each plane is stored as the induced bond permutation
// plus a per-bond sign: a reflected gradient is (theta eta)(map[b]) =
// sign[b] * eta[b], which is exactly what happens to nabla(phi compose sigma)
// when a bond's image is traversed against its +direction. Couplings reflect
// by the permutation alone. All four kinds are involutions.
// ---------------------------------------------------------------------------

enum class PlaneKind {
    DirectVertical,    // plane x = a (and its antipode x = a + L/2)
    DirectHorizontal,  // plane y = a
    DiagonalPlus,      // x - y = const through an anchor site, sigma swaps coords
    DiagonalMinus      // x + y = const through an anchor site
};

struct ReflectionPlane {
    PlaneKind kind;
    int anchor;  // coordinate a for direct planes, anchor site index for diagonal ones
    std::vector<int> bond_map;
    std::vector<std::int8_t> sign;

    static ReflectionPlane direct_vertical(const Torus& t, int a) {
        ReflectionPlane r{PlaneKind::DirectVertical, a, {}, {}};
        r.bond_map.resize(t.n_bonds());
        r.sign.resize(t.n_bonds());
        for (int b = 0; b < t.n_bonds(); ++b) {
            const int s = t.bond_site(b);
            const int x = t.site_x(s), y = t.site_y(s);
            if (t.bond_horizontal(b)) {
                r.bond_map[b] = t.bond(2 * a - x - 1, y, 0);
                r.sign[b] = -1;  // the image is traversed tip-to-tail
            } else {
                r.bond_map[b] = t.bond(2 * a - x, y, 1);
                r.sign[b] = +1;
            }
        }
        return r;
    }

    static ReflectionPlane direct_horizontal(const Torus& t, int a) {
        ReflectionPlane r{PlaneKind::DirectHorizontal, a, {}, {}};
        r.bond_map.resize(t.n_bonds());
        r.sign.resize(t.n_bonds());
        for (int b = 0; b < t.n_bonds(); ++b) {
            const int s = t.bond_site(b);
            const int x = t.site_x(s), y = t.site_y(s);
            if (t.bond_horizontal(b)) {
                r.bond_map[b] = t.bond(x, 2 * a - y, 0);
                r.sign[b] = +1;
            } else {
                r.bond_map[b] = t.bond(x, 2 * a - y - 1, 1);
                r.sign[b] = -1;
            }
        }
        return r;
    }

    // sigma(v) = c + swap(v - c): reflection in the main diagonal through c.
    // Horizontal and vertical bonds trade places, both with their orientation
    // preserved, so no signs appear.
    static ReflectionPlane diagonal_plus(const Torus& t, int anchor_site = 0) {
        ReflectionPlane r{PlaneKind::DiagonalPlus, anchor_site, {}, {}};
        r.bond_map.resize(t.n_bonds());
        r.sign.resize(t.n_bonds());
        const int cx = t.site_x(anchor_site), cy = t.site_y(anchor_site);
        for (int b = 0; b < t.n_bonds(); ++b) {
            const int s = t.bond_site(b);
            const int x = t.site_x(s), y = t.site_y(s);
            const int sx = cx + (y - cy), sy = cy + (x - cx);
            r.bond_map[b] = t.bond(sx, sy, 1 - t.bond_dir(b));
            r.sign[b] = +1;
        }
        return r;
    }

    // sigma(v) = c - swap(v - c): the anti-diagonal. Every bond's image is
    // traversed backwards, so every sign flips.
    static ReflectionPlane diagonal_minus(const Torus& t, int anchor_site = 0) {
        ReflectionPlane r{PlaneKind::DiagonalMinus, anchor_site, {}, {}};
        r.bond_map.resize(t.n_bonds());
        r.sign.resize(t.n_bonds());
        const int cx = t.site_x(anchor_site), cy = t.site_y(anchor_site);
        for (int b = 0; b < t.n_bonds(); ++b) {
            const int s = t.bond_site(b);
            const int x = t.site_x(s), y = t.site_y(s);
            const int sx = cx - (y - cy), sy = cy - (x - cx);  // sigma of the tail site
            if (t.bond_horizontal(b)) {
                r.bond_map[b] = t.bond(sx, sy - 1, 1);
            } else {
                r.bond_map[b] = t.bond(sx - 1, sy, 0);
            }
            r.sign[b] = -1;
        }
        return r;
    }
};

inline GradientConfig reflect(const GradientConfig& g, const ReflectionPlane& pl) {
    GradientConfig out;
    out.tag = g.tag;
    out.eta.resize(g.eta.size());
    for (std::size_t b = 0; b < g.eta.size(); ++b)
        out.eta[pl.bond_map[b]] = pl.sign[b] * g.eta[b];
    return out;
}

inline CouplingConfig reflect(const CouplingConfig& c, const ReflectionPlane& pl) {
    CouplingConfig out;
    out.kappa.resize(c.kappa.size());
    for (std::size_t b = 0; b < c.kappa.size(); ++b) out.kappa[pl.bond_map[b]] = c.kappa[b];
    return out;
}

// ---------------------------------------------------------------------------
// Plain-text bond files:  "L=<n> kind=<eta|kappa> tag=<full|star>" header,
// then one "<bond_index> <value>" line per bond, full double precision.
// ---------------------------------------------------------------------------

inline void save_gradient(std::ostream& os, const Torus& t, const GradientConfig& g) {
    os << "L=" << t.L() << " kind=eta tag=" << (g.tag == SpaceTag::Full ? "full" : "star") << "\n";
    for (int b = 0; b < t.n_bonds(); ++b) os << b << " " << full_precision(g.eta[b]) << "\n";
}

inline void save_coupling(std::ostream& os, const Torus& t, const CouplingConfig& c) {
    os << "L=" << t.L() << " kind=kappa tag=full\n";
    for (int b = 0; b < t.n_bonds(); ++b) os << b << " " << full_precision(c.kappa[b]) << "\n";
}

struct LoadedConfig {
    int L = 0;
    std::string kind;  // "eta" or "kappa"
    SpaceTag tag = SpaceTag::Full;
    std::vector<double> values;
};

// Parses and fully checks a bond file. Gradient configs are additionally
// validated against their constraint set at tolerance 1e-9 (circulations, and
// windings when tag=full); coupling files must be strictly positive.
inline LoadedConfig load_config(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw std::invalid_argument("empty config file");
    LoadedConfig out;
    {
        std::istringstream hs(header);
        std::string fL, fk, ft;
        if (!(hs >> fL >> fk >> ft))
            throw std::invalid_argument("malformed header: '" + header + "'");
        if (fL.rfind("L=", 0) != 0 || fk.rfind("kind=", 0) != 0 || ft.rfind("tag=", 0) != 0)
            throw std::invalid_argument("malformed header: '" + header + "'");
        try {
            std::size_t used = 0;
            out.L = std::stoi(fL.substr(2), &used);
            if (used != fL.size() - 2) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw std::invalid_argument("bad L in header: '" + fL + "'");
        }
        out.kind = fk.substr(5);
        if (out.kind != "eta" && out.kind != "kappa")
            throw std::invalid_argument("bad kind in header: '" + fk + "'");
        const std::string tag = ft.substr(4);
        if (tag == "full")
            out.tag = SpaceTag::Full;
        else if (tag == "star")
            out.tag = SpaceTag::Star;
        else
            throw std::invalid_argument("bad tag in header: '" + ft + "'");
    }
    Torus t(out.L);  // rejects odd or tiny L with its own message
    out.values.assign(t.n_bonds(), 0.0);
    std::vector<std::uint8_t> seen(t.n_bonds(), 0);
    std::string line;
    int count = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        long long idx = -1;
        double v = 0.0;
        if (!(ls >> idx >> v))
            throw std::invalid_argument("malformed bond line: '" + line + "'");
        std::string trail;
        if (ls >> trail) throw std::invalid_argument("trailing junk on bond line: '" + line + "'");
        if (idx < 0 || idx >= t.n_bonds())
            throw std::invalid_argument("bond index out of range: " + std::to_string(idx));
        if (seen[idx]) throw std::invalid_argument("duplicate bond index: " + std::to_string(idx));
        seen[idx] = 1;
        out.values[idx] = v;
        ++count;
    }
    if (count != t.n_bonds())
        throw std::invalid_argument("expected " + std::to_string(t.n_bonds()) + " bond lines, got " +
                                    std::to_string(count));
    if (out.kind == "eta") {
        GradientConfig g{out.values, out.tag};
        validate(g, t);  // throws with the offending plaquette/winding
    } else {
        for (double k : out.values)
            if (!(k > 0.0)) throw std::invalid_argument("couplings must be positive");
    }
    return out;
}

}  // namespace gradgibbs
