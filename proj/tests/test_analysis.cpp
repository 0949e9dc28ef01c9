#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qhkit/analysis.hpp"
#include "qhkit/optimizers.hpp"
#include "qhkit/rng.hpp"

using namespace qh;

namespace {

double rel_dev(double a, double b) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1.0});
    return std::fabs(a - b) / scale;
}

std::vector<Vec> random_grads(SeededRng& rng, long steps, std::size_t dim) {
    std::vector<Vec> out;
    out.reserve(static_cast<std::size_t>(steps));
    for (long t = 0; t < steps; ++t) {
        Vec g(dim);
        for (auto& x : g) x = rng.next_gaussian();
        out.push_back(std::move(g));
    }
    return out;
}

} // namespace

TEST_CASE("qhm transition matrix entries") {
    const TransitionMatrix a = build_transition(QhmParams{1.0, 0.7, 0.9, 0.0});
    CHECK(a.side == 4);
    CHECK(a.at(1, 0) == doctest::Approx(-0.63));
    CHECK(a.at(1, 1) == 1.0);
    CHECK(a.at(1, 2) == doctest::Approx(-0.37));
    CHECK(a.at(1, 3) == 0.0);

    const TransitionMatrix sgd_like = build_transition(QhmParams{1.0, 0.0, 0.9, 0.0});
    CHECK(sgd_like.at(1, 0) == 0.0);
    CHECK(sgd_like.at(1, 2) == doctest::Approx(-1.0));
}

TEST_CASE("pid transition matrix pure-I structure") {
    const TransitionMatrix a = build_transition(PidGains{0.0, 0.25, 0.0, 0.9});
    CHECK(a.side == 6);
    // last row [kp, ki, kd, 1, 0, 0]
    CHECK(a.at(5, 0) == 0.0);
    CHECK(a.at(5, 1) == doctest::Approx(0.25));
    CHECK(a.at(5, 2) == 0.0);
    CHECK(a.at(5, 3) == 1.0);
    CHECK(a.at(5, 4) == 0.0);
}

TEST_CASE("matrix powers match the printed closed forms") {
    const QhmParams qp{1.0, 0.7, 0.9, 0.0};
    const PidGains pg{-6.3, 1.0, 56.7, 0.9};         // qhm(1, 0.7, 0.9) image
    const PidGains pg_big{-699.3, 1.0, 698600.7, 0.999}; // large-coefficient case
    const SnvParams sp{0.1, 0.9, 2.7};
    const AccSgdParams ap{0.3, 79.46666666666667, 7.095238095238095, 0.7, true};

    for (long n = 1; n <= 60; ++n) {
        for (const TransitionMatrix& m :
             {build_transition(qp), build_transition(pg), build_transition(pg_big),
              build_transition(sp), build_transition(ap)}) {
            const auto power = matrix_power_last_row(m, n);
            const auto closed = closed_form_last_row(m, n);
            REQUIRE(power.size() == closed.size());
            for (std::size_t j = 0; j < power.size(); ++j) {
                CHECK(rel_dev(power[j], closed[j]) < 1e-10);
            }
        }
    }
}

TEST_CASE("matrix power consistency at n=1 is the squared matrix") {
    const TransitionMatrix m = build_transition(QhmParams{0.5, 0.4, 0.8, 0.0});
    const auto row = matrix_power_last_row(m, 1);
    // direct A^2 last row
    for (std::size_t j = 0; j < m.side; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < m.side; ++k) acc += m.at(m.side - 1, k) * m.at(k, j);
        CHECK(row[j] == doctest::Approx(acc).epsilon(1e-14));
    }
}

TEST_CASE("qhm gradient coefficients") {
    const QhmParams p{1.0, 0.7, 0.999, 0.0};
    CHECK(gradient_coefficient(p, 1) == doctest::Approx(-(1.0 - 0.7 * 0.999)).epsilon(1e-14));
    const QhmParams sgd{1.0, 0.0, 0.9, 0.0};
    for (long i = 1; i < 10; ++i) CHECK(gradient_coefficient(sgd, i) == doctest::Approx(-1.0));
}

TEST_CASE("unrolled theta single gradient") {
    const QhmParams p{1.0, 0.7, 0.999, 0.0};
    const std::vector<Vec> grads{{1.0}};
    CHECK(unrolled_theta(p, grads, {0.0})[0] == doctest::Approx(-0.3007));
}

TEST_CASE("unrolled theta equals recursion for qhm/momentum/sgd on random history") {
    SeededRng rng(31);
    const std::size_t dim = 10;
    const auto grads = random_grads(rng, 100, dim);
    const Vec theta0 = constant(dim, 0.5);
    const double alpha = 0.05;

    for (auto [nu, beta] : {std::pair{0.7, 0.9}, {1.0, 0.9}, {0.0, 0.5}, {0.7, 0.999}}) {
        Qhm opt(nu, beta, dim);
        Vec theta = theta0;
        std::vector<Vec> seen;
        for (const Vec& g : grads) {
            seen.push_back(g);
            theta = opt.step(theta, g, alpha);
            const Vec closed = unrolled_theta(QhmParams{alpha, nu, beta, 0.0}, seen, theta0);
            CHECK(linf_dist(theta, closed) < 1e-12);
        }
    }
}

TEST_CASE("unrolled theta supports a nonzero initial buffer") {
    SeededRng rng(37);
    const std::size_t dim = 4;
    const auto grads = random_grads(rng, 30, dim);
    const Vec theta0 = zeros(dim);
    Vec g0(dim);
    for (auto& x : g0) x = rng.next_gaussian();

    Qhm opt(0.6, 0.8, dim);
    opt.g = g0;
    Vec theta = theta0;
    std::vector<Vec> seen;
    for (const Vec& g : grads) {
        seen.push_back(g);
        theta = opt.step(theta, g, 0.3);
    }
    const Vec closed = unrolled_theta(QhmParams{0.3, 0.6, 0.8, 0.0}, seen, theta0, &g0);
    CHECK(linf_dist(theta, closed) < 1e-12);
}

TEST_CASE("unrolled theta equals recursion for pid, snv, accsgd") {
    SeededRng rng(32);
    const std::size_t dim = 10;
    const auto grads = random_grads(rng, 100, dim);
    const Vec theta0 = constant(dim, 1.0);

    const PidGains pg = {-6.3, 1.0, 56.7, 0.9};
    PidControl pid(pg.kp, pg.ki, pg.kd, pg.beta, theta0);
    Vec theta = theta0;
    std::vector<Vec> seen;
    for (const Vec& g : grads) {
        seen.push_back(g);
        theta = pid.step(theta, g);
        CHECK(linf_dist(theta, unrolled_theta(pg, seen, theta0)) < 1e-10);
    }

    const SnvParams sp{0.05, 0.9, 2.7};
    Snv snv(sp.gamma, sp.beta1, sp.beta2, theta0);
    theta = theta0;
    seen.clear();
    for (const Vec& g : grads) {
        seen.push_back(g);
        theta = snv.step(theta, g);
        CHECK(linf_dist(theta, unrolled_theta(sp, seen, theta0)) < 1e-10);
    }

    const AccSgdParams ap{0.3, 79.46666666666667, 7.095238095238095, 0.7, true};
    AccSgd acc(ap.delta, ap.kappa, ap.xi, ap.eps, theta0);
    theta = theta0;
    seen.clear();
    for (const Vec& g : grads) {
        seen.push_back(g);
        theta = acc.step(theta, g);
        CHECK(linf_dist(theta, unrolled_theta(ap, seen, theta0)) < 1e-10);
    }
}

TEST_CASE("adam update bound values") {
    CHECK(adam_update_bound({1.0, 1.0, 0.9, 0.999}) == doctest::Approx(7.268).epsilon(0.0015));
    // beta1, beta2 -> 0: a single normalized gradient, ratio -> 1
    CHECK(adam_update_bound({1.0, 1.0, 1e-12, 1e-12}) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(adam_update_bound({1.0, 1.0, 0.95, 0.9}), std::invalid_argument);
    CHECK_THROWS_AS((void)adam_update_bound({1.0, 0.0, 0.9, 0.999}), std::invalid_argument);
}

TEST_CASE("bound curve over nu2 has an interior minimum") {
    std::vector<double> vals;
    for (int i = 1; i <= 100; ++i) {
        vals.push_back(adam_update_bound({0.8, i / 100.0, 0.95, 0.98}));
    }
    const auto mn = std::min_element(vals.begin(), vals.end());
    const std::size_t at = static_cast<std::size_t>(mn - vals.begin());
    CHECK(at > 0);
    CHECK(at < vals.size() - 1);
    CHECK(vals.front() > *mn);  // rises as nu2 -> 0+
    CHECK(vals.back() > *mn);   // decreases from nu2 = 1 toward the minimum
}

TEST_CASE("kingma claimed bound") {
    CHECK(kingma_claimed_bound(0.9, 0.999) == doctest::Approx(3.162).epsilon(1e-3));
    CHECK(kingma_claimed_bound(0.0, 0.999) == doctest::Approx(31.62).epsilon(1e-3));
    CHECK(kingma_claimed_bound(0.9, 0.99) == doctest::Approx(1.0));
}

TEST_CASE("adversarial sequence attains the finite-t bound") {
    for (const BoundParams p :
         {BoundParams{1.0, 1.0, 0.9, 0.999}, {0.8, 0.7, 0.95, 0.98}, {1.0, 1.0, 0.5, 0.9}}) {
        for (long t : {1L, 5L, 50L, 1000L}) {
            const auto xs = adversarial_gradient_sequence(p, t);
            REQUIRE(xs.size() == static_cast<std::size_t>(t) + 1);
            const double achieved = normalized_update_ratio(p, xs);
            const double bound = adam_update_bound(p, t);
            CHECK(std::fabs(achieved - bound) / bound < 1e-10);
            CHECK(achieved <= adam_update_bound(p) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("adversarial sequence with nu1=0 reduces to the first term") {
    const BoundParams p{0.0, 1.0, 0.9, 0.999};
    const auto xs = adversarial_gradient_sequence(p, 10);
    for (std::size_t j = 0; j + 1 < xs.size(); ++j) CHECK(xs[j] == 0.0);
    const double achieved = normalized_update_ratio(p, xs);
    CHECK(achieved == doctest::Approx(adam_update_bound(p, 10)).epsilon(1e-12));
}

TEST_CASE("random sequences never exceed the bound") {
    SeededRng rng(33);
    for (int trial = 0; trial < 1000; ++trial) {
        BoundParams p;
        p.beta2 = 0.5 + rng.next_double() * 0.499;
        p.beta1 = rng.next_double() * std::sqrt(p.beta2) * 0.999;
        if (p.beta1 <= 0.0) p.beta1 = 0.01;
        p.nu1 = rng.next_double();
        p.nu2 = 0.05 + rng.next_double() * 0.95;
        const long t = 1 + static_cast<long>(rng.next_u64() % 40);
        std::vector<double> xs(static_cast<std::size_t>(t) + 1);
        for (auto& x : xs) x = rng.next_gaussian();
        const double achieved = normalized_update_ratio(p, xs);
        CHECK(achieved <= adam_update_bound(p, t) * (1.0 + 1e-12));
    }
}

TEST_CASE("pid d-term closed form") {
    // constant gradient: v tends to zero
    std::vector<double> constant_grads(200, 1.0);
    CHECK(std::fabs(pid_d_term_closed_form(constant_grads, 0.9)) < 1e-8);

    // single gradient
    const std::vector<double> one{1.0};
    CHECK(pid_d_term_closed_form(one, 0.9) == doctest::Approx(-0.1));

    // recursion oracle on random histories
    SeededRng rng(34);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> grads(30);
        for (auto& g : grads) g = rng.next_gaussian();
        double v = 0.0, e_prev = 0.0;
        for (double g : grads) {
            const double e = -g;
            v = 0.5 * v + 0.5 * (e - e_prev);
            e_prev = e;
        }
        CHECK(std::fabs(pid_d_term_closed_form(grads, 0.5) - v) < 1e-12);
    }
}
