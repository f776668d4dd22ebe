#include "doctest.h"

#include <cmath>
#include <random>

#include "orbzeta/germs.hpp"

using namespace orbzeta;

namespace {

// Classical RK4 flow of x' = -x^{k+1}/(1 - rho x^k) over unit time.
double rk4_model_flow(int k, double rho, double x0, double tmax, int steps) {
    auto rhs = [&](double x) { return -std::pow(x, k + 1) / (1.0 - rho * std::pow(x, k)); };
    double x = x0;
    const double h = tmax / steps;
    for (int i = 0; i < steps; ++i) {
        const double k1 = rhs(x);
        const double k2 = rhs(x + 0.5 * h * k1);
        const double k3 = rhs(x + 0.5 * h * k2);
        const double k4 = rhs(x + h * k3);
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
}

} // namespace

TEST_CASE("jet arithmetic sanity") {
    DJet f(8);
    f.c = {1.0, 0.5, -0.25, 0.125, 0.0, 0.3, 0.0, 0.0, -0.1};
    const DJet r = f.reciprocal();
    const DJet prod = f * r;
    CHECK(prod[0] == doctest::Approx(1.0).epsilon(1e-14));
    for (int i = 1; i <= 8; ++i) CHECK(std::abs(prod[i]) < 1e-14);

    // exp(log f) = f for f(0) = 1
    const DJet back = f.log_one_plus_tail().exp_tail();
    for (int i = 0; i <= 8; ++i) CHECK(back[i] == doctest::Approx(f[i]).epsilon(1e-13));
}

TEST_CASE("lie exponential matches the k=1 model closed form") {
    // v = -x^2 generates f(x) = x/(1+x).
    DJet v(10);
    v.c[2] = -1.0;
    const DJet f = lie_exponential(v, 10);
    // x/(1+x) = x - x^2 + x^3 - ...
    for (int i = 1; i <= 10; ++i)
        CHECK(f[i] == doctest::Approx((i % 2) ? 1.0 : -1.0).epsilon(1e-12));
    // Round-trip through the inverse problem.
    const DJet v2 = embedding_field(f, 1, 10);
    for (int i = 0; i <= 10; ++i) CHECK(v2[i] == doctest::Approx(v[i]).epsilon(1e-12));
}

TEST_CASE("eval: spec examples") {
    const Germ m10 = Germ::model_parabolic(1, 0.0);
    CHECK(m10.eval(0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    const Germ hyp = Germ::hyperbolic(0.5);
    CHECK(hyp.eval(0.8) == doctest::Approx(0.4).epsilon(1e-15));

    // ModelParabolic(1, 0.7) at 0.3 against the unit-time ODE oracle.
    const Germ m17 = Germ::model_parabolic(1, 0.7);
    const double got = m17.eval(0.3);
    const double ode = rk4_model_flow(1, 0.7, 0.3, 1.0, 20000);
    CHECK(got == doctest::Approx(ode).epsilon(1e-12));
    // frozen multiprecision flow value
    CHECK(got == doctest::Approx(0.2197150812425709672).epsilon(1e-13));
}

TEST_CASE("iterate: closed forms and identity") {
    const Germ m10 = Germ::model_parabolic(1, 0.0);
    CHECK(m10.iterate(0.5, 2) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(m10.iterate(0.5, 0) == 0.5);

    const Germ m20 = Germ::model_parabolic(2, 0.0);
    const double expect = 0.6 * std::pow(1.0 + 5.0 * 2.0 * 0.36, -0.5);
    CHECK(m20.iterate(0.6, 5) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("gap: examples and stability") {
    const Germ m10 = Germ::model_parabolic(1, 0.0);
    CHECK(m10.gap(0.5) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    const Germ hyp = Germ::hyperbolic(0.25);
    CHECK(hyp.gap(0.4) == doctest::Approx(0.3).epsilon(1e-15));
    const Germ jet = Germ::jet_parabolic({1.0, -1.0, 0.3});
    CHECK(jet.gap(0.1) == doctest::Approx(0.0097).epsilon(1e-14));
    // tiny-x stability: g ~ x^2 for k=1
    const double g = m10.gap(1e-8);
    CHECK(g == doctest::Approx(1e-16).epsilon(1e-7));
}

TEST_CASE("inverse_gap: round trips and closed forms") {
    const Germ m10 = Germ::model_parabolic(1, 0.0);
    CHECK(m10.inverse_gap(1.0 / 6.0) == doctest::Approx(0.5).epsilon(1e-13));
    // closed form x = y/2 + sqrt(y + y^2/4)
    const double y = 0.02;
    CHECK(m10.inverse_gap(y) == doctest::Approx(0.5 * y + std::sqrt(y + 0.25 * y * y)).epsilon(1e-13));

    const Germ hyp = Germ::hyperbolic(0.5);
    CHECK(hyp.inverse_gap(0.1) == doctest::Approx(0.2).epsilon(1e-15));

    std::mt19937 rng(11u);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const Germ& g : {Germ::model_parabolic(1, 0.0), Germ::model_parabolic(2, 0.3),
                          Germ::model_parabolic(1, -0.5), Germ::jet_parabolic({1.0, -1.0, 0.3}),
                          Germ::hyperbolic(0.37)}) {
        const double top = g.gap(g.x_max());
        for (int i = 0; i < 12; ++i) {
            const double yy = top * std::pow(10.0, -6.0 * u(rng));
            const double x = g.inverse_gap(yy);
            CHECK(g.gap(x) == doctest::Approx(yy).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(m10.inverse_gap(10.0), OutOfRange);
}

TEST_CASE("fatou: values and inverses") {
    const FatouCoordinate f10(Germ::model_parabolic(1, 0.0));
    CHECK(f10.psi(0.5) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(f10.psi_inverse(4.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(f10.psi_inverse(f10.psi(0.37)) == doctest::Approx(0.37).epsilon(1e-13));

    const FatouCoordinate fh(Germ::hyperbolic(0.5));
    CHECK(fh.psi(0.25) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(fh.psi_inverse(3.0) == doctest::Approx(0.125).epsilon(1e-14));

    const FatouCoordinate f23(Germ::model_parabolic(2, 0.3));
    CHECK(f23.psi(0.4) == doctest::Approx(1.0 / (2.0 * 0.16) + 0.3 * std::log(0.4)).epsilon(1e-14));

    // Abel equation for model germs, 1e-10 contract
    for (const auto& g : {Germ::model_parabolic(1, 0.7), Germ::model_parabolic(3, -0.4)}) {
        const FatouCoordinate fc(g);
        for (double x : {0.05, 0.2, 0.45}) {
            CHECK(fc.abel_defect(x) < 1e-10);
        }
    }
}

TEST_CASE("continuous_iterate: Abel relation and semigroup") {
    const Germ m = Germ::model_parabolic(1, 0.0);
    const FatouCoordinate fc(m);
    CHECK(fc.continuous_iterate(0.5, 1.0) == doctest::Approx(m.eval(0.5)).epsilon(1e-10));
    CHECK(fc.continuous_iterate(0.5, 0.0) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(fc.continuous_iterate(0.5, 2.5) == doctest::Approx(1.0 / 4.5).epsilon(1e-12));

    std::mt19937 rng(5u);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (const Germ& g : {Germ::model_parabolic(1, 0.4), Germ::model_parabolic(2, 0.0),
                          Germ::hyperbolic(0.6), Germ::jet_parabolic({1.0, -1.0, 0.3})}) {
        const FatouCoordinate f(g);
        const double x0 = 0.45 * g.x_max();
        for (int i = 0; i < 8; ++i) {
            const double s = u(rng), t = u(rng);
            const double a = f.continuous_iterate(x0, s + t);
            const double b = f.continuous_iterate(f.continuous_iterate(x0, s), t);
            CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(a)));
        }
    }
}

TEST_CASE("model eval agrees with the time-1 ODE flow on a grid") {
    for (const auto& [k, rho] : std::vector<std::pair<int, double>>{{1, 0.7}, {2, -0.5}, {3, 0.0}}) {
        const Germ g = Germ::model_parabolic(k, rho);
        for (int i = 1; i <= 8; ++i) {
            const double x = g.x_max() * i / 8.0;
            const double ode = rk4_model_flow(k, rho, x, 1.0, 40000);
            CHECK(g.eval(x) == doctest::Approx(ode).epsilon(1e-9));
        }
    }
}

TEST_CASE("jet germ asymptotics: iterate ~ (a k n)^{-1/k}") {
    const Germ jet = Germ::jet_parabolic({1.0, -1.0, 0.3});
    const long n = 100000;
    double x = 0.3;
    for (long i = 0; i < n; ++i) x = jet.eval(x);
    const double ratio = x * std::pow(1.0 * 1.0 * n, 1.0);
    CHECK(ratio > 0.98);
    CHECK(ratio < 1.02);
}

TEST_CASE("jet germ formal class") {
    const Germ jet = Germ::jet_parabolic({1.0, -1.0, 0.3});
    const FormalClass fc = formal_class_of(jet);
    CHECK(fc.k == 1);
    CHECK(fc.a == doctest::Approx(1.0));
    // v = -x^2 - 0.7 x^3 - ..., so 1/v = -x^{-2} + 0.7 x^{-1} + ...
    CHECK(fc.rho == doctest::Approx(0.7).epsilon(1e-12));

    const FatouCoordinate f(jet);
    CHECK(f.max_abel_defect() < 1e-8);
}

TEST_CASE("germ serialization round trip") {
    for (const std::string spec :
         {"model:k=2,rho=0.69999999999999996", "hyperbolic:a=0.5", "jet:1,-1,0.29999999999999999"}) {
        const Germ g = Germ::parse(spec);
        CHECK(Germ::parse(g.to_string()).to_string() == g.to_string());
    }
    CHECK(Germ::parse("model:k=1,rho=0").to_string() == "model:k=1,rho=0");
    CHECK_THROWS_AS(Germ::parse("nonsense"), DomainError);
    CHECK_THROWS_AS(Germ::parse("model:k=0,rho=1"), DomainError);
    CHECK_THROWS_AS(Germ::hyperbolic(1.5), DomainError);
    CHECK_THROWS_AS(Germ::jet_parabolic({1.0, 2.0}), DomainError);
}

TEST_CASE("domain errors") {
    const Germ m = Germ::model_parabolic(1, 0.0);
    CHECK_THROWS_AS(m.eval(0.95), DomainError);
    CHECK_THROWS_AS(m.eval(-0.1), DomainError);
}
