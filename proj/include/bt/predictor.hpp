#pragma once

#include <array>
#include <vector>

#include "bt/asymptotics.hpp"
#include "bt/nfcoeffs.hpp"
#include "bt/series.hpp"

namespace bt {

struct PredictorOptions {
    Method method = Method::LP;
    Phase phase = Phase::VZero;
    int order = 3;  // 0..3, truncation of the planar series and of tau
    // LP with xi(s) = s, i.e. without the higher-order time transformation.
    bool xi_identity = false;
    // Al-Hdaibat style parameter map with K11 = K03 = 0 (negative control).
    bool wrong_k = false;
    // Constant added to t(eta), in units of eps^2 (orbital only).
    double time_shift = 0.0;
};

// (3bd - 4ae)/(3ab^2): the integration-constant shift that aligns the
// orbital and smooth predictors. Equal to the d-singular printed form
// theta1000 (2/3)(4ae/(bd) - 3)/b after cancelling d.
double phase_shift_coefficient(double a, double b, double d, double e);

struct Mesh {
    int ntst = 40, ncol = 4;
    std::vector<double> fine;   // ntst*ncol+1 points on [0,1]
    std::vector<double> gauss;  // ncol Gauss points on [0,1]
    std::vector<double> gauss_w;
    static Mesh uniform(int ntst, int ncol);
    int npoints() const { return ntst * ncol + 1; }
};

struct PlanarPoint {
    Vec2 w, beta;
};

// Normal-form coordinates of the predictor at normal-form time eta
// (orbital) or t (smooth/hyper).
PlanarPoint planar_point(const CmExpansion& cm, const PredictorOptions& opt, double eps, double eta);
Vec2 planar_beta(const CmExpansion& cm, const PredictorOptions& opt, double eps);

Vec lift_orbit(const CmExpansion& cm, const PredictorOptions& opt, double eps, double eta);
Vec2 lift_parameters(const CmExpansion& cm, const PredictorOptions& opt, double eps);
// alpha(eps) as a polynomial in eps (exact for the truncated map).
std::array<Series, 2> parameter_series(const CmExpansion& cm, const PredictorOptions& opt, int N = 12);

double time_reparam(const CmExpansion& cm, const PredictorOptions& opt, double eps, double eta);
double time_reparam_derivative(const CmExpansion& cm, const PredictorOptions& opt, double eps, double eta);
double invert_time(const CmExpansion& cm, const PredictorOptions& opt, double eps, double t);

Vec saddle_point(const CmExpansion& cm, const PredictorOptions& opt, double eps);

double amplitude_to_eps(double A0, double a, double b, Variant v);
double eps_to_amplitude(double eps, double a, double b, Variant v);
double ttol_to_T(double k, double eps, double A0, const CmExpansion& cm, const PredictorOptions& opt);

// d alpha / d eps from the printed beta' formulas.
Vec2 dalpha_deps(const CmExpansion& cm, const PredictorOptions& opt, double eps);
// +1 if tangent_alpha1 * d alpha1/d eps > 0, else -1.
int tangent_orientation(double tangent_alpha1, const CmExpansion& cm, const PredictorOptions& opt, double eps);

struct HomPredictor {
    Method method = Method::LP;
    Variant variant = Variant::Orbital;
    PredictorOptions options;
    double eps = 0, k = 0, A0 = 0;
    Vec2 alpha;
    double T = 0;
    Mesh mesh;
    std::vector<Vec> orbit;  // at mesh.fine, time -T + 2T*fine
    Vec s0;
    double eps0 = 0, eps1 = 0;
    int tangent_sign = 1;  // sign of d alpha1 / d eps
};

HomPredictor sample_predictor(const CmExpansion& cm, const PredictorOptions& opt, double eps, const Mesh& mesh,
                              double k);
// Same with T given directly.
HomPredictor sample_predictor_T(const CmExpansion& cm, const PredictorOptions& opt, double eps, const Mesh& mesh,
                                double T);

}  // namespace bt
