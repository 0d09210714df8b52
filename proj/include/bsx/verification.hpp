#pragma once

#include "bsx/handles.hpp"
#include "bsx/numerics.hpp"

#include <string>
#include <vector>

namespace bsx {

enum class Claim { SignTwoSided, Minorant, Majorant, NodeInterp, L1Match, TypeBound, Identity };
std::string claim_name(Claim c);

enum class Spacing { Uniform, Log, Chebyshev, Refined };

struct GridPiece {
    double min = 0, max = 0;
    long count = 0;
    Spacing spacing = Spacing::Uniform;
};

// "min:max:count[:uniform|log|chebyshev|refined]", several pieces joined with '+'.
// log pieces need min and max of the same sign; refined clusters points inside each node interval.
struct GridSpec {
    std::vector<GridPiece> pieces;
    static GridSpec parse(const std::string& text);
    std::string text() const;
    Json to_json() const;
};

// Sorted, deduplicated points. delta fixes the node lattice n/delta for refined spacing.
std::vector<double> make_grid(const GridSpec& g, double delta = 1.0);

struct Certificate {
    Claim claim = Claim::Identity;
    Json params_echo;
    double worst_margin = 0.0;
    double worst_location = 0.0;
    Json grid_spec;
    bool passed = false;
    double tol_used = 0.0;
    Json details;
    Json to_json() const;  // schema "bsx-cert/1"
};

// max(1e-9, 10 * evaluation tolerance)
double certificate_tol(const Approximant& a);

// min over the grid of sin(pi delta x) (target - approx); integer nodes are skipped.
Certificate verify_sign_two_sided(const Approximant& approx, const Target& target, const GridSpec& grid);
// side Minorant: min (target - approx); side Majorant: min (approx - target).
// x = 0 is compared with the one-sided limits of the target.
Certificate verify_one_sided(const Approximant& approx, const Target& target, Kind side, const GridSpec& grid);
// residuals at x = n/delta, n in [n_lo, n_hi] \ {0}; derivatives by a 5-point stencil with h = 1e-5.
Certificate verify_nodes(const Approximant& approx, const Target& target, long n_lo, long n_hi,
                         bool with_derivatives);
// |numeric - expected| <= rel_tol * |expected|
Certificate verify_l1_match(const Approximant& approx, const Target& target, double expected, double rel_tol = 1e-6,
                            double tol = 1e-9);
// generic two-value identity check, for oracle comparisons
Certificate verify_identity(const std::string& name, double lhs, double rhs, double tol, Json params = Json::object());

// int |target - approx| for two-sided kinds, int (target - approx) resp. int (approx - target) for one-sided.
QuadResult numeric_l1_error(const Approximant& approx, const Target& target, double tol = 1e-9);

// slope of log|approx(iy)| over [y_max/2, y_max]; passes when slope <= 1.05 k pi delta.
Certificate estimate_exponential_type(const Approximant& approx, int k_expected, double y_max);

}  // namespace bsx
