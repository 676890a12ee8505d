#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace percolab::theory {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Gamma for positive arguments. The C library implementation is accurate to
// a few ulp here, which clears the 12-significant-digit contract; the test
// suite pins it against functional equations and a high-precision oracle.
inline double gamma_fn(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("gamma_fn requires x > 0");
    return std::tgamma(x);
}

// Gauss hypergeometric 2F1(a, b; c; z) for z in [0, 1]. Power series with
// term recurrence; at z = 1 the Gauss summation applies (needs c-a-b > 0).
inline double hyp2f1(double a, double b, double c, double z) {
    if (z < 0.0 || z > 1.0) throw std::invalid_argument("hyp2f1 requires z in [0,1]");
    if (c <= 0.0 && c == std::floor(c))
        throw std::invalid_argument("hyp2f1 pole: c is a nonpositive integer");
    if (z == 1.0) {
        if (!(c - a - b > 0.0))
            throw std::invalid_argument("hyp2f1 diverges at z = 1 unless c - a - b > 0");
        return gamma_fn(c) * gamma_fn(c - a - b) / (gamma_fn(c - a) * gamma_fn(c - b));
    }
    double term = 1.0, sum = 1.0;
    for (long n = 0; n < 200000000L; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z;
        sum += term;
        if (std::abs(term) < 1e-16 * std::abs(sum)) return sum;
    }
    throw std::runtime_error("hyp2f1 series did not converge");
}

inline double h_function(double x) {
    return hyp2f1(-0.5, -1.0 / 3.0, 7.0 / 6.0, std::exp(-2.0 * kPi * x));
}

// Three-point factorization constant, 2^7 pi^5 / (3^{3/2} Gamma(1/3)^9).
inline double k_f() {
    double g = gamma_fn(1.0 / 3.0);
    return 128.0 * std::pow(kPi, 5) / (std::pow(3.0, 1.5) * std::pow(g, 9));
}

// Same constant through logs; agreement of the two routes is a test.
inline double k_f_log_route() {
    double lg = std::lgamma(1.0 / 3.0);
    return std::exp(7.0 * std::log(2.0) + 5.0 * std::log(kPi) - 1.5 * std::log(3.0) - 9.0 * lg);
}

inline double k2() { return 18.0 / (5.0 * kPi); }

inline double k1() {
    return 18.0 * std::pow(kPi, 5.0 / 48.0) /
           (5.0 * kPi * std::pow(2.0, 5.0 / 48.0)) / h_function(0.0);
}

struct StripPoint {
    double x = 0.0;
    double y = 0.0;  // in (0, 1)
};

// Mobius self-map of the upper half-plane sending u1 -> -1, u1+s -> 1,
// u2 -> infinity:  z -> k (z - m) / (z - u2).
class MobiusMap {
public:
    MobiusMap(double u1, double s, double u2) : u2_(u2) {
        if (!(s > 0.0)) throw std::invalid_argument("mobius: s must be positive");
        if (u2 >= u1 && u2 <= u1 + s)
            throw std::invalid_argument("mobius: u2 inside the interval is degenerate");
        double a = u1 - u2;      // k (u1 - m)   = -a
        double b = u1 + s - u2;  // k (u1+s - m) =  b
        k_ = (a + b) / s;
        m_ = u1 + a / k_;
    }

    std::complex<double> operator()(std::complex<double> z) const {
        return k_ * (z - m_) / (z - u2_);
    }

    std::complex<double> derivative(std::complex<double> z) const {
        std::complex<double> d = z - u2_;
        return k_ * (m_ - u2_) / (d * d);
    }

    double k() const { return k_; }
    double m() const { return m_; }

private:
    double k_, m_, u2_;
};

inline MobiusMap mobius_to_pm1(double u1, double s, double u2) { return MobiusMap(u1, s, u2); }

// Conformal map {H, u1, u1+s, u2} -> {S, i, 0, infinity} onto the
// semi-infinite strip S = {Im in (0,1), Re > 0}:
//   Psi = (-i/pi) asin(Pi(z)) + i/2
// with the principal asin branch (cuts on (-inf,-1] and [1,inf)).
inline StripPoint strip_map(double u1, double s, double u2, std::complex<double> w) {
    if (!(w.imag() > 0.0)) throw std::invalid_argument("strip_map needs Im(w) > 0");
    MobiusMap pi_map(u1, s, u2);
    std::complex<double> as = std::asin(pi_map(w));
    return StripPoint{as.imag() / kPi, 0.5 - as.real() / kPi};
}

// |Psi'(w)| = |Pi'(w)| / (pi sqrt(|1 - Pi(w)^2|)).
inline double strip_map_abs_derivative(double u1, double s, double u2, std::complex<double> w) {
    MobiusMap pi_map(u1, s, u2);
    std::complex<double> wt = pi_map(w);
    return std::abs(pi_map.derivative(w)) / (kPi * std::sqrt(std::abs(1.0 - wt * wt)));
}

// Harmonic measure of (u1, u1+s) seen from w: the angle the interval
// subtends at w, divided by pi.
inline double harmonic_measure(double u1, double s, std::complex<double> w) {
    if (!(w.imag() > 0.0)) throw std::invalid_argument("harmonic_measure needs Im(w) > 0");
    return std::abs(std::arg((u1 - w) / (u1 + s - w))) / kPi;
}

// Interval factorization function: psi = e^{pi x/3} H(x) / H(0) at
// x = Re Psi(w).
inline double psi_factor(double u1, double s, double u2, std::complex<double> w) {
    double x = strip_map(u1, s, u2, w).x;
    return std::exp(kPi * x / 3.0) * h_function(x) / h_function(0.0);
}

// Strip-coordinate profile
//   G(x,y) = e^{pi x/3} H(x) sinh(pi x)^{-1/3}
//            ((sinh^2(pi x) sin^2(pi y)) / (sinh^2(pi x) + sin^2(pi y)))^{11/96}.
inline double g_function(const StripPoint& p) {
    if (!(p.x > 0.0)) throw std::invalid_argument("g_function needs x > 0");
    double sh = std::sinh(kPi * p.x);
    double sn = std::sin(kPi * p.y);
    double ratio = (sh * sh * sn * sn) / (sh * sh + sn * sn);
    return std::exp(kPi * p.x / 3.0) * h_function(p.x) * std::pow(sh, -1.0 / 3.0) *
           std::pow(ratio, 11.0 / 96.0);
}

// Predicted small-s3 limit of the conditional interval-interval-point
// probability ratio: s3^{5/48} K1 |Psi'(w)|^{5/48} G(Re Psi, Im Psi).
inline double bi_prediction(double u1, double s, double u2, std::complex<double> w, double s3) {
    if (!(s3 > 0.0)) throw std::invalid_argument("bi_prediction needs s3 > 0");
    StripPoint p = strip_map(u1, s, u2, w);
    double dpsi = strip_map_abs_derivative(u1, s, u2, w);
    return std::pow(s3, 5.0 / 48.0) * k1() * std::pow(dpsi, 5.0 / 48.0) * g_function(p);
}

// Predicted small-s3 interval-to-point probability:
// s3^{5/48} K2 |phi'(w)|^{5/48} sin(pi omega / 2)^{1/3}, where phi maps H to
// the unit disc with phi(w) = 0, so |phi'(w)| = 1 / (2 Im w).
inline double lemma22_prediction(double u1, double s, std::complex<double> w, double s3) {
    if (!(w.imag() > 0.0)) throw std::invalid_argument("lemma22_prediction needs Im(w) > 0");
    if (!(s3 > 0.0)) throw std::invalid_argument("lemma22_prediction needs s3 > 0");
    double omega = harmonic_measure(u1, s, w);
    double dphi = 1.0 / (2.0 * w.imag());
    return std::pow(s3, 5.0 / 48.0) * k2() * std::pow(dphi, 5.0 / 48.0) *
           std::pow(std::sin(kPi * omega / 2.0), 1.0 / 3.0);
}

// Crossing probability between boundary intervals [x1,x2] and [x3,x4]:
// c lambda^{1/3} 2F1(1/3, 2/3; 4/3; lambda) with the cross-ratio
// lambda = ((x2-x1)(x4-x3)) / ((x3-x1)(x4-x2)). The normalization c is fixed
// by P(lambda) + P(1-lambda) = 1 instead of a transcribed constant.
inline double cardy_unnormalized(double lambda) {
    return std::cbrt(lambda) * hyp2f1(1.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0, lambda);
}

inline double cardy_normalization() {
    static const double c = 1.0 / (2.0 * cardy_unnormalized(0.5));
    return c;
}

inline double cardy_cross_ratio(double x1, double x2, double x3, double x4) {
    if (!(x1 < x2 && x2 < x3 && x3 < x4))
        throw std::invalid_argument("cardy_crossing needs x1 < x2 < x3 < x4");
    return ((x2 - x1) * (x4 - x3)) / ((x3 - x1) * (x4 - x2));
}

inline double cardy_crossing(double x1, double x2, double x3, double x4) {
    return cardy_normalization() * cardy_unnormalized(cardy_cross_ratio(x1, x2, x3, x4));
}

}  // namespace percolab::theory
