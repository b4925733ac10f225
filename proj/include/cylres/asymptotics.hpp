#pragma once

#include <map>
#include <string>
#include <vector>

#include "cylres/channels.hpp"
#include "cylres/potential.hpp"
#include "cylres/scatter1d.hpp"

namespace cylres {

enum class OrderTag { Zeroth, Corrected, ExampleThreshold, ExampleLogL };
std::string to_string(OrderTag t);

struct Prediction {
    int l = 0;
    Complex z_pred;
    OrderTag order = OrderTag::Zeroth;
    double error_exponent = 0.0;  ///< |z - z_pred| = O(l^-error_exponent)
    bool threshold_regime = false;
    std::vector<std::string> warnings;
};

/// z_pred = lambda0 (exponent 2 / multiplicity).
Prediction threshold_prediction(Complex lambda0, int l, int multiplicity = 1);

/// lambda0 - (i / 4 l^2) sum_{k != 0} k^-2 int (k^2 V_-k V_k + V_-k' V_k') u^2 dx,
/// integrated on each mode's grid by the trapezoid rule.
Prediction leading_correction(const ResonanceState& u, const CylinderPotential& pot, int l);

/// The sum above without the -i / 4 l^2 prefactor.
Complex correction_integral(const ResonanceState& u, const CylinderPotential& pot);

/// Branch nu of the Lambert function: W e^W = w.
Complex lambert_w(int nu, Complex w);

/// Closed form near the threshold for the potential 2 chi_[-1,1](x) cos(theta).
Prediction example_near_threshold(int l);

/// (i/2) W_nu((-i e^{2i sqrt(2l)} -+ i +- 1) / (4 l sqrt(2l))); sign = +1 or -1.
Prediction example_logl(int l, int nu, int sign);
Complex example_logl_argument(int l, int sign);

/// (1 - e^{2i(sqrt(2l)+z)} / (8lz sqrt(2l)))^2 - ((1+i) e^{2iz} / (8lz sqrt(2l)))^2.
Complex g_function(int l, Complex z);

struct IdentityResidual {
    double absolute = 0.0;
    double relative = 0.0;  ///< absolute / sum of |terms|
};

/// sup over x of |sum_{m,j != 0, m != -j} V_m V_j V_{-m-j} / (j (j + m))|.
IdentityResidual sumis0_residual(const CylinderPotential& pot, const std::vector<double>& xs);

struct BandParams {
    double delta = 2.0;  ///< mode decay exponent assumed by the band estimates
};

struct BandClassification {
    Complex nearest_center;
    int center_multiplicity = 1;
    double distance = 0.0;
    std::map<std::string, double> scaled;  ///< |z - center| * l^e keyed by estimate
    double annulus_scaled = 0.0;           ///< |z| * l^delta
    double re_scaled = 0.0;                ///< |Re z| * l^3
};

BandClassification classify_hit(const ResonanceHit& hit, const std::vector<Resonance1D>& resonances_1d,
                                const BandParams& params = {});

}  // namespace cylres
