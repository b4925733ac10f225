#pragma once

#include <string>
#include <vector>

#include "cylres/potential.hpp"
#include "cylres/surface.hpp"
#include "cylres/zeros.hpp"

namespace cylres {

/// Channels k = l-K ... l+K around one threshold.
struct ChannelWindow {
    int l = 1;
    int K = 1;
    int slabs = 512;  ///< step count used for sampled (smooth) profiles

    int size() const { return 2 * K + 1; }
    int channel(int i) const { return l - K + i; }
    void validate() const;
};

/// Tower of channels adjacent to +l or to -l.
enum class Tower { Plus, Minus };

enum class Method { Direct, Predicted0, PredictedCorrected, ExampleClosedForm };
std::string to_string(Method m);

enum class Precision { Double, Extended };
/// Extended when CYLRES_PRECISION=extended is set in the environment.
Precision precision_from_env();

struct ResonanceHit {
    SurfacePoint point;
    int multiplicity = 1;
    int tower_factor = 1;
    Tower tower = Tower::Plus;
    Method method = Method::Direct;
    double residual = 0.0;
    int K = 0;
    int slabs = 0;
    bool threshold_regime = false;  ///< hit inside the excluded threshold disk
};

/// Re-expresses every mode on one shared step grid (union of breakpoints;
/// sampled profiles are first converted with `to_steps(·, slabs)`).
CylinderPotential common_step_grid(const CylinderPotential& pot, int slabs);

/// C[i][j] = V_{k_i - k_j} on one slab of a common step grid.
CMatrixXd coupling_matrix(const CylinderPotential& pot, const ChannelWindow& window, int slab,
                          Tower tower = Tower::Plus);

/// Precomputed slab table for the matching determinant. Immutable, so
/// determinant() may be called from several threads at once.
class ChannelSystem {
public:
    ChannelSystem(const CylinderPotential& pot, const ChannelWindow& window, Tower tower = Tower::Plus);

    const ChannelWindow& window() const { return window_; }
    Tower tower() const { return tower_; }
    int slab_count() const { return static_cast<int>(widths_.size()); }

    /// D(z): zero exactly when a solution outgoing in every retained channel exists.
    /// For an angle-independent potential D(z) = prod_k W_{V0}(tau_k(z)).
    template <typename Real>
    std::complex<Real> determinant_t(std::complex<Real> z) const;

    Complex determinant(Complex z, Precision precision) const;
    Complex determinant(Complex z) const { return determinant(z, precision_); }

    AnalyticFn as_function() const;

private:
    ChannelWindow window_;
    Tower tower_;
    Precision precision_;
    double a_ = -1.0, b_ = 1.0;
    std::vector<double> widths_;
    std::vector<CMatrixXd> couplings_;
};

Complex matching_determinant(const CylinderPotential& pot, const SurfacePoint& p, const ChannelWindow& window,
                             Tower tower = Tower::Plus);

struct ResonanceSearch {
    double tol = 1e-10;
    int threads = 1;
    double exclude_radius = 0.0;  ///< hits with |z| below this are flagged threshold_regime
    double max_step = 0.0;        ///< contour sample spacing (0: engine default)
};

/// Zeros of D in a rectangle of the chart. Real potentials are solved on the
/// +l tower with tower factor 2, otherwise both towers are solved.
std::vector<ResonanceHit> find_cylinder_resonances(const CylinderPotential& pot, const Rect& search,
                                                   const ChannelWindow& window, const ResonanceSearch& opt = {});

/// Winding number of D around the circle |z - center| = radius.
int disk_winding(const ChannelSystem& sys, Complex center, double radius, const ResonanceSearch& opt = {});

/// Extrapolates two step-approximation results with error ~ h^order (fine uses h/2).
Complex richardson(Complex coarse, Complex fine, int order = 2);

struct TruncationRow {
    int K;
    int slabs;
    bool found;
    Complex z;
};

struct TruncationStudy {
    std::vector<TruncationRow> rows;
    std::vector<double> k_differences;     ///< |z(K_{i+1}) - z(K_i)| at the finest slab count
    std::vector<double> slab_differences;  ///< |z(s_{i+1}) - z(s_i)| at the largest K
    bool monotone = false;                 ///< both difference sequences strictly decrease
    int converged_digits = 0;
};

/// Tracks the zero nearest `target` across (K, slabs) pairs.
TruncationStudy truncation_study(const CylinderPotential& pot, int l, const Rect& search, Complex target,
                                 const std::vector<int>& k_list, const std::vector<int>& slab_list,
                                 const ResonanceSearch& opt = {});

}  // namespace cylres
