#include <doctest.h>

#include <random>
#include <sstream>

#include "qtherm/bloch.hpp"
#include "qtherm/lindblad_json.hpp"
#include "support/oracles.hpp"

using namespace qtherm;

namespace {

bool matrices_close(const ComplexMatrix2& a, const ComplexMatrix2& b, double tol) {
    return (a - b).max_abs() <= tol;
}

}  // namespace

TEST_CASE("density_from_bloch reference values") {
    const ComplexMatrix2 mixed = density_from_bloch({0, 0, 0});
    CHECK(matrices_close(mixed, 0.5 * ComplexMatrix2::identity(), 1e-15));

    const ComplexMatrix2 up = density_from_bloch({0, 0, 1});
    CHECK(matrices_close(up, ComplexMatrix2::of(1, 0, 0, 0), 1e-15));

    const ComplexMatrix2 tilted = density_from_bloch({0.5, 0, 0.5});
    CHECK(matrices_close(tilted, ComplexMatrix2::of(0.75, 0.25, 0.25, 0.25), 1e-15));
}

TEST_CASE("density matrix eigenvalues are (1 +- r)/2") {
    std::mt19937 rng(11);
    for (int i = 0; i < 1000; ++i) {
        const BlochState s = oracle::random_state(rng);
        const auto eig = oracle::hermitian_eigenvalues(density_from_bloch(s));
        const double r = s.purity();
        CHECK(eig[0] == oracle::approx((1.0 - r) / 2.0, 1e-12));
        CHECK(eig[1] == oracle::approx((1.0 + r) / 2.0, 1e-12));
    }
}

TEST_CASE("bloch_from_density reference values and round trip") {
    const BlochState mixed = bloch_from_density(0.5 * ComplexMatrix2::identity());
    CHECK(mixed.x == 0.0);
    CHECK(mixed.y == 0.0);
    CHECK(mixed.z == 0.0);

    const BlochState up = bloch_from_density(ComplexMatrix2::of(1, 0, 0, 0));
    CHECK(up.z == oracle::approx(1.0, 1e-14));

    const BlochState tilted = bloch_from_density(ComplexMatrix2::of(0.75, 0.25, 0.25, 0.25));
    CHECK(tilted.x == oracle::approx(0.5, 1e-14));
    CHECK(tilted.y == oracle::approx(0.0, 1e-14));
    CHECK(tilted.z == oracle::approx(0.5, 1e-14));

    std::mt19937 rng(7);
    for (int i = 0; i < 1000; ++i) {
        const BlochState s = oracle::random_state(rng);
        const ComplexMatrix2 rho = density_from_bloch(s);
        const ComplexMatrix2 back = density_from_bloch(bloch_from_density(rho));
        CHECK(matrices_close(rho, back, 1e-12));
    }
}

TEST_CASE("bloch_from_density rejects non-states") {
    ComplexMatrix2 bad_trace = ComplexMatrix2::of(0.6, 0, 0, 0.6);
    CHECK_THROWS_AS((void)bloch_from_density(bad_trace), NotAState);

    ComplexMatrix2 not_hermitian = ComplexMatrix2::of(0.5, Complex{0.1, 0.1}, 0.3, 0.5);
    CHECK_THROWS_AS((void)bloch_from_density(not_hermitian), NotAState);
}

TEST_CASE("energy eigenbasis diagonalizes H with the pinned conventions") {
    std::mt19937 rng(23);
    for (int i = 0; i < 300; ++i) {
        const FieldVector field = oracle::random_field(rng);
        const double h = field.magnitude();
        const ComplexMatrix2 H = hamiltonian(field);
        const EnergyEigenbasis basis = energy_eigenbasis(field);

        auto check_vector = [&](const std::array<Complex, 2>& v, double eigenvalue) {
            // H v = eigenvalue v
            for (int r = 0; r < 2; ++r) {
                const Complex hv = H(r, 0) * v[0] + H(r, 1) * v[1];
                CHECK(std::abs(hv - eigenvalue * v[static_cast<std::size_t>(r)]) < 1e-10);
            }
            CHECK(std::sqrt(std::norm(v[0]) + std::norm(v[1])) == oracle::approx(1.0, 1e-12));
            // Phase convention: first nonzero component real positive.
            const Complex lead = std::abs(v[0]) > 1e-14 ? v[0] : v[1];
            CHECK(lead.imag() == oracle::approx(0.0, 1e-12));
            CHECK(lead.real() > 0.0);
        };
        check_vector(basis.ground, -h);
        check_vector(basis.excited, h);

        const Complex overlap =
            std::conj(basis.ground[0]) * basis.excited[0] + std::conj(basis.ground[1]) * basis.excited[1];
        CHECK(std::abs(overlap) < 1e-12);
    }
}

TEST_CASE("unital sufficiency verdicts") {
    auto single = [](const ComplexMatrix2& op) {
        std::vector<LindbladTerm> terms{constant_rate_term(op, 1.0)};
        return is_unital_sufficient(terms);
    };
    CHECK(single(ComplexMatrix2::sigma_x()));
    CHECK(single(ComplexMatrix2::sigma_z()));
    CHECK_FALSE(single(ComplexMatrix2::sigma_minus()));
}

TEST_CASE("incoherent sufficiency verdicts in the z-field eigenbasis") {
    const FieldVector field = z_field(1.0);
    auto single = [&](const ComplexMatrix2& op) {
        std::vector<LindbladTerm> terms{constant_rate_term(op, 1.0)};
        return is_incoherent_sufficient(terms, field);
    };
    CHECK(single(ComplexMatrix2::sigma_x()));
    CHECK(single(ComplexMatrix2::sigma_z()));
    CHECK(single(ComplexMatrix2::sigma_minus()));

    ComplexMatrix2 hadamard_like = ComplexMatrix2::sigma_x() + ComplexMatrix2::sigma_z();
    hadamard_like *= Complex{1.0 / std::sqrt(2.0)};
    CHECK_FALSE(single(hadamard_like));

    std::vector<LindbladTerm> terms{constant_rate_term(ComplexMatrix2::sigma_x(), 1.0)};
    CHECK_THROWS_AS((void)is_incoherent_sufficient(terms, FieldVector{0, 0, 0}),
                    DegenerateHamiltonian);
}

TEST_CASE("checker verdicts are invariant under positive rescaling") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    const FieldVector field = z_field(1.0);
    for (int i = 0; i < 1000; ++i) {
        ComplexMatrix2 op;
        for (auto& e : op.m) e = Complex{entry(rng), entry(rng)};
        for (double c : {1e-6, 1.0, 1e6}) {
            std::vector<LindbladTerm> base{constant_rate_term(op, 1.0)};
            std::vector<LindbladTerm> scaled{constant_rate_term(c * op, 1.0)};
            CHECK(is_unital_sufficient(base) == is_unital_sufficient(scaled));
            CHECK(is_incoherent_sufficient(base, field) == is_incoherent_sufficient(scaled, field));
        }
    }
}

TEST_CASE("lindblad term JSON loading") {
    std::istringstream doc(R"([
      {"matrix": [[[0,0],[1,0]],[[1,0],[0,0]]], "rate": 0.1},
      {"matrix": [[[1,0],[0,0]],[[0,0],[-1,0]]],
       "rate": {"type": "ohmic", "s": 2.0, "omega_c": 1.0}}
    ])");
    const auto loaded = load_lindblad_terms(doc);
    REQUIRE(loaded.size() == 2);
    CHECK(matrices_close(loaded[0].term.op, ComplexMatrix2::sigma_x(), 0.0));
    CHECK(loaded[0].term.rate(12.3) == 0.1);
    CHECK(matrices_close(loaded[1].term.op, ComplexMatrix2::sigma_z(), 0.0));
    // gamma(1, s=2) = Gamma[2] sin(pi/2) / 2 = 1/2
    CHECK(loaded[1].term.rate(1.0) == oracle::approx(0.5, 1e-12));

    std::istringstream not_array(R"({"matrix": []})");
    CHECK_THROWS_AS((void)load_lindblad_terms(not_array), Error);

    std::istringstream bad_rate(R"([{"matrix": [[[0,0],[1,0]],[[1,0],[0,0]]], "rate": "x"}])");
    CHECK_THROWS_AS((void)load_lindblad_terms(bad_rate), Error);

    std::istringstream bad_shape(R"([{"matrix": [[[0,0],[1,0]]], "rate": 1}])");
    CHECK_THROWS_AS((void)load_lindblad_terms(bad_shape), Error);
}
