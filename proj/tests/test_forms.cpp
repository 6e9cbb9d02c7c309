#include "formred/error.hpp"
#include "formred/forms.hpp"

#include "support.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace formred;

namespace {

// sorted by (re, im) for comparison
std::vector<Complex> sorted(std::span<const Complex> r) {
    std::vector<Complex> v(r.begin(), r.end());
    std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return v;
}

double max_gap(std::span<const Complex> a, std::span<const Complex> b) {
    auto x = sorted(a), y = sorted(b);
    double worst = 0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    return worst;
}

// eigenvalues of the companion matrix, a dense solver independent of Aberth
std::vector<Complex> companion_roots(const std::vector<double>& c) {
    const int n = static_cast<int>(c.size()) - 1;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) m(0, j) = -c[j + 1] / c[0];
    for (int i = 1; i < n; ++i) m(i, i - 1) = 1;
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    std::vector<Complex> out;
    for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()[i]);
    return out;
}

bool canonical(const BinaryForm& f) {
    auto r = f.roots();
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i].imag() == 0) continue;
        if (r[i].imag() < 0 || i + 1 >= r.size() || r[i + 1] != std::conj(r[i])) return false;
        ++i;
    }
    return true;
}

} // namespace

TEST_CASE("x^4 + 1 has the primitive 8th roots of unity") {
    std::vector<double> c{1, 0, 0, 0, 1};
    auto f = BinaryForm::from_coeffs(c);
    std::vector<Complex> want;
    for (int k : {1, 3, 5, 7}) want.push_back(std::polar(1.0, k * std::numbers::pi / 4));
    CHECK(f.degree() == 4);
    CHECK(max_gap(f.roots(), want) < 1e-12);
    CHECK(canonical(f));
}

TEST_CASE("factored cubic") {
    std::vector<double> c{1, -6, 11, -6};
    auto f = BinaryForm::from_coeffs(c);
    std::vector<Complex> want{1, 2, 3};
    CHECK(max_gap(f.roots(), want) < 1e-12);
    for (auto r : f.roots()) CHECK(r.imag() == 0);
}

TEST_CASE("roots agree with companion matrix eigenvalues") {
    std::vector<double> c{2, 1, -3, 5, 7};
    auto f = BinaryForm::from_coeffs(c);
    CHECK(max_gap(f.roots(), companion_roots(c)) < 1e-8);

    support::Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        int n = support::pick(rng, 3, 9);
        std::vector<double> cs(n + 1);
        for (auto& x : cs) x = support::uniform(rng, -10, 10);
        if (std::abs(cs[0]) < 0.5) cs[0] = 1;
        auto g = BinaryForm::from_coeffs(cs);
        CAPTURE(trial);
        CHECK(max_gap(g.roots(), companion_roots(cs)) < 1e-6);
    }
}

TEST_CASE("from_coeffs rejects bad input") {
    auto code = [](std::vector<double> c) {
        try {
            BinaryForm::from_coeffs(c);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidArgument;
    };
    CHECK(code({0, 1, 2, 3}) == ErrorCode::ZeroLeadingCoefficient);
    CHECK(code({1, 0, 1}) == ErrorCode::DegreeTooLow);
}

TEST_CASE("expand") {
    std::vector<Complex> r{{0, 1}, {0, -1}, {1, 0}};
    auto f = BinaryForm::from_roots(r, 1.0);
    auto p = expand(f);
    std::vector<double> want{1, -1, 1, -1};
    CHECK(relative_coeff_error(p, want) < 1e-15);

    std::vector<Complex> two{1, -1};
    CHECK_THROWS_AS(BinaryForm::from_roots(two, 1.0), Error);
}

TEST_CASE("expand after from_coeffs is the identity") {
    support::Rng rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        auto roots = support::random_roots(rng, support::pick(rng, 3, 10), 3);
        auto f = BinaryForm::from_roots(roots, support::uniform(rng, 0.5, 3));
        auto p = expand(f);
        auto g = BinaryForm::from_coeffs(p);
        CHECK(relative_coeff_error(expand(g), p) < 1e-8);
    }
}

TEST_CASE("conjugate pairing tolerates small errors and symmetrizes") {
    std::vector<Complex> r{{1, 2 + 1e-12}, {1 + 1e-12, -2}, {3, 1e-13}};
    auto f = BinaryForm::from_roots(r, 1.0);
    CHECK(canonical(f));
    CHECK(f.roots()[0] == std::conj(f.roots()[1]));

    std::vector<Complex> bad{{1, 2}, {1, -1}, {3, 0}};
    CHECK_THROWS_AS(BinaryForm::from_roots(bad, 1.0), Error);
}

TEST_CASE("action examples") {
    std::vector<Complex> r{1, 2, 3};
    auto f = BinaryForm::from_roots(r, 2.0);

    auto same = act(f, UnimodularMatrix::identity());
    CHECK(relative_coeff_error(expand(same), expand(f)) < 1e-15);

    // X -> X - Z shifts every root up by one
    auto shifted = act(f, UnimodularMatrix::translation(-1));
    std::vector<Complex> want{2, 3, 4};
    CHECK(max_gap(shifted.roots(), want) < 1e-14);

    UnimodularMatrix bad{2, 0, 0, 1};
    CHECK_THROWS_AS(act(f, bad), Error);
}

TEST_CASE("act composes as a right action and inverts") {
    support::Rng rng(13);
    auto random_g = [&] {
        for (;;) {
            UnimodularMatrix g{support::pick(rng, -4, 4), support::pick(rng, -4, 4), support::pick(rng, -4, 4),
                               support::pick(rng, -4, 4)};
            if (g.determinant() == 1) return g;
        }
    };
    for (int trial = 0; trial < 100; ++trial) {
        auto f = BinaryForm::from_roots(support::random_roots(rng, support::pick(rng, 3, 7), 2), 1.0);
        auto g = random_g(), h = random_g();
        auto lhs = act(act(f, g), h);
        auto rhs = act(f, g * h);
        CAPTURE(trial);
        CHECK(lhs.degree() == rhs.degree());
        CHECK(relative_coeff_error(expand(lhs), expand(rhs)) < 1e-9);
        auto back = act(act(f, g), g.inverse());
        CHECK(relative_coeff_error(expand(back), expand(f)) < 1e-9);
        CHECK(canonical(lhs));
    }
}

TEST_CASE("act matches direct substitution into the coefficients") {
    // F(aX+bZ, cX+dZ) expanded by hand for a cubic
    std::vector<double> c{1, -2, 0, 5};
    auto f = BinaryForm::from_coeffs(c);
    UnimodularMatrix g{2, 1, 1, 1};
    std::vector<double> direct(4, 0);
    // (aX+bZ)^(3-i) (cX+dZ)^i, coefficients of X^3..Z^3
    for (int i = 0; i <= 3; ++i) {
        std::vector<double> p{1};
        auto mul = [&](double x, double z) {
            std::vector<double> q(p.size() + 1, 0);
            for (std::size_t j = 0; j < p.size(); ++j) {
                q[j] += p[j] * x;
                q[j + 1] += p[j] * z;
            }
            p = q;
        };
        for (int k = 0; k < 3 - i; ++k) mul(2, 1);
        for (int k = 0; k < i; ++k) mul(1, 1);
        for (int j = 0; j <= 3; ++j) direct[j] += c[i] * p[j];
    }
    CHECK(relative_coeff_error(expand(act(f, g)), direct) < 1e-12);
}

TEST_CASE("a rational root can be sent to infinity and back") {
    std::vector<Complex> r{0, 2, {1, 1}, {1, -1}};
    auto f = BinaryForm::from_roots(r, 3.0);
    // z -> -1/z sends the root 0 to infinity
    auto g = act(f, UnimodularMatrix::inversion());
    CHECK(g.degree() == 4);
    CHECK(g.infinite_roots() == 1);
    CHECK(g.roots().size() == 3);
    auto p = expand(g);
    CHECK(p[0] == 0.0);

    auto back = act(g, UnimodularMatrix::inversion().inverse());
    CHECK(back.infinite_roots() == 0);
    CHECK(relative_coeff_error(expand(back), expand(f)) < 1e-14);
    CHECK(max_gap(back.roots(), f.roots()) < 1e-14);
}

TEST_CASE("matrix helpers") {
    UnimodularMatrix g{2, 3, 1, 2};
    CHECK(g.determinant() == 1);
    CHECK(g * g.inverse() == UnimodularMatrix::identity());
    Complex z(0.3, 0.7);
    // the covariant moves by the inverse: z -> -1/(z-m)
    CHECK(std::abs(UnimodularMatrix::cluster_step(3).inverse().apply(z) + 1.0 / (z - 3.0)) < 1e-15);
    Complex w = g.apply(z);
    CHECK(std::abs(w - (2.0 * z + 3.0) / (z + 2.0)) < 1e-15);
    UnimodularMatrix huge{INT64_MAX, 2, 2, 2};
    CHECK_THROWS_AS((void)huge.determinant(), Error);
}
