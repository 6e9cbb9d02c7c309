#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace formred {

using Complex = std::complex<double>;

// 2x2 integer matrix. Determinant one is checked where it matters (act),
// not on construction, so callers can build and test arbitrary matrices.
struct UnimodularMatrix {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    static UnimodularMatrix identity() { return {}; }
    static UnimodularMatrix translation(std::int64_t m) { return {1, m, 0, 1}; }
    static UnimodularMatrix inversion() { return {0, 1, -1, 0}; }
    // translate by m then invert: z -> -1/(z-m) on the covariant
    static UnimodularMatrix cluster_step(std::int64_t m) { return {-m, 1, -1, 0}; }

    std::int64_t determinant() const;
    UnimodularMatrix inverse() const { return {d, -b, -c, a}; }
    // fractional linear map z -> (az+b)/(cz+d)
    Complex apply(Complex z) const;

    friend UnimodularMatrix operator*(const UnimodularMatrix& x, const UnimodularMatrix& y);
    friend bool operator==(const UnimodularMatrix&, const UnimodularMatrix&) = default;
};

struct RootFinderOptions {
    int max_iter = 200;
    double tolerance = 1e-12;
};

// F = a0 * Z^m * prod (X - alpha_i Z), m roots at infinity. Finite roots
// are canonical: real roots carry an exact zero imaginary part and every
// non-real root with Im > 0 is immediately followed by its exact conjugate.
// Parsed forms have m = 0; the action can move a real root to infinity.
class BinaryForm {
public:
    static BinaryForm from_coeffs(std::span<const double> coeffs, const RootFinderOptions& opts = {});
    // conjugate closure is checked to conj_tol*(1+|alpha|) and then enforced
    static BinaryForm from_roots(std::span<const Complex> roots, double leading, double conj_tol = 1e-9);
    static BinaryForm from_projective_roots(std::span<const Complex> finite, int infinite, double leading,
                                            double conj_tol = 1e-9);

    int degree() const { return static_cast<int>(roots_.size()) + infinite_; }
    // coefficient of X^(n-m) Z^m, the first nonzero one
    double leading() const { return leading_; }
    // finite roots only
    std::span<const Complex> roots() const { return roots_; }
    int infinite_roots() const { return infinite_; }
    // the coefficients this form was parsed from, if any
    const std::optional<std::vector<double>>& input_coeffs() const { return input_coeffs_; }

private:
    BinaryForm() = default;
    double leading_ = 1.0;
    std::vector<Complex> roots_;
    int infinite_ = 0;
    std::optional<std::vector<double>> input_coeffs_;

    friend BinaryForm act(const BinaryForm&, const UnimodularMatrix&);
};

// (Fg)(X,Z) = F(aX+bZ, cX+dZ)
BinaryForm act(const BinaryForm& form, const UnimodularMatrix& g);

// coefficients of a0 * prod (X - alpha_i Z), highest power of X first
std::vector<double> expand(const BinaryForm& form);

// max |x_i - y_i| / max |y_i|
double relative_coeff_error(std::span<const double> x, std::span<const double> y);

// Aberth-Ehrlich on coeffs (highest power first). Raw roots, unpaired.
std::vector<Complex> aberth_roots(std::span<const double> coeffs, const RootFinderOptions& opts = {});

struct ConjugatePairing {
    std::vector<Complex> roots; // canonical layout
    double worst_mismatch = 0;  // largest self/pair cost relative to 1+|z|
};

// Greedy minimal-cost pairing: a root paired with itself costs 2|Im z|,
// a pair (i,j) costs |z_i - conj z_j|. Each pair is averaged to exact conjugacy.
ConjugatePairing pair_conjugates(std::span<const Complex> roots);

} // namespace formred
