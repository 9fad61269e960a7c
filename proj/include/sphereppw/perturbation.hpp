#pragma once

#include "sphereppw/ball_spectrum.hpp"

namespace sphereppw::perturb {

/// cot(t) - t csc^2(t), with a series near t = 0.
double ell(double theta);

/// csc^2(t) (1 - t cot(t)) = -ell'(t) / 2, with a series near t = 0.
double mfun(double theta);

struct Options {
  ball::ShootOptions shoot{};
  double fd_step = 1e-4;  // central difference step in the dilation parameter c
};

/// d/dc [c^2 lambda1(c theta1)] at c = 1 from the ell-weighted integral of u0 u0'.
double dlambda1_dc(const BallSpec& spec, const Options& opts = {});

/// Same derivative from the mfun-weighted integral of v0^2.
double dlambda1_dc_raw(const BallSpec& spec, const Options& opts = {});

/// d/dc [c^2 lambda2(c theta1)] at c = 1.
double dlambda2_dc(const BallSpec& spec, const Options& opts = {});

/// Central difference of c^2 lambda(c theta1) at c = 1 for m in {0, 1}.
double finite_difference_dc(const BallSpec& spec, int m, double step, const Options& opts = {});

struct Report {
  BallSpec spec;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double d_lambda1_dc = 0.0;
  double d_lambda1_dc_raw = 0.0;
  double d_lambda2_dc = 0.0;
  double fd1 = 0.0;
  double fd2 = 0.0;
  // (1/lambda2) d lambda2~/dc - (1/lambda1) d lambda1~/dc: the sign of d/dc log(lambda2/lambda1).
  double ratio_derivative = 0.0;
};

Report report(const BallSpec& spec, const Options& opts = {});

/// Sign changes of v1/|v1| - v0/|v0| on (0, theta1), sampled at `samples` points.
int normalized_crossings(const BallSpec& spec, int samples = 2000, const Options& opts = {});

}  // namespace sphereppw::perturb
