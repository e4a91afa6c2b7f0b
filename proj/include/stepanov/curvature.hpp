#pragma once

#include "stepanov/jets.hpp"
#include "stepanov/tensor.hpp"

namespace stepanov {

// Levi-Civita connection values and coordinate partials. Derivative slots
// appended: dgamma(h,i,j,k) = d_k Gamma^h_ij.
struct ConnectionJet {
    int dim = 0;
    int order = 0;
    Tensor gamma{1, {}};
    Tensor dgamma{1, {}};
    Tensor d2gamma{1, {}};
};

// All derived curvature fields at a point.
struct CurvaturePack {
    int dim = 0;
    Tensor g{1, {}};
    Tensor g_inv{1, {}};
    Tensor riemann{1, {}}; // R^h_{ijk}
    Tensor ricci{1, {}};   // R_ij
    double scalar = 0.0;   // R
    Tensor dscalar{1, {}}; // d_k R
    Tensor T{1, {}};       // R_ij - R/2 g_ij
    Tensor dT{1, {}};      // T_{ij,k}
    Tensor dricci{1, {}};  // R_{ij,k}
};

// Gamma^h_ij = g^{ha} (d_i g_{aj} + d_j g_{ai} - d_a g_{ij}) / 2, with as many
// derivative blocks as the jet order allows (order k jets give order k-1 Gamma).
ConnectionJet christoffel(const MetricJet& jet);

// Full pipeline; requires order-3 jets. Sign convention: unit sphere R = +2.
CurvaturePack curvature(const MetricJet& jet);

// Standard nabla with one Gamma correction per slot; dt holds the coordinate
// partials of t with the derivative slot last.
Tensor covariant_derivative(const Tensor& t, const Tensor& dt, const Tensor& gamma);

// g^{ba} T_{ai,b}; vanishes by the contracted Bianchi identity.
Tensor divergence_T(const CurvaturePack& cp);

// g^{ij} T_ij - R (1 - n/2); a pipeline self-check.
double trace_identity_residual(const CurvaturePack& cp);

struct GeodesicState {
    double s = 0.0;
    Eigen::VectorXd x;
    Eigen::VectorXd v;
};

struct GeodesicTrace {
    std::vector<GeodesicState> states;
    bool exited = false; // left the chart domain before s_end
};

// Classical fixed-step 4th-order integration of x'' + Gamma(x')(x') = 0.
GeodesicTrace geodesic_trace(const MetricManifest& m, const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& v0, double s_end, int steps);

// max_s |Q(s) - Q(0)| with Q = R_ij v^i v^j along the trace.
double killing_quadratic_drift(const MetricManifest& m, const GeodesicTrace& trace);

// max_s |g(v,v)(s) - g(v,v)(0)| along the trace.
double speed_drift(const MetricManifest& m, const GeodesicTrace& trace);

} // namespace stepanov
