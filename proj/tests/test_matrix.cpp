#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "eigenflow/matrix.hpp"

using namespace eigenflow;

TEST_CASE("matrix construction validates shapes", "[matrix]") {
  CHECK_NOTHROW(ComplexMatrix(2, 3));
  CHECK_THROWS_MATCHES(ComplexMatrix(2, 2, {cplx(1, 0)}), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::ShapeError; }));
  CHECK_THROWS_AS(ComplexMatrix::from_rows({{1.0, 2.0}, {3.0}}), Error);
}

TEST_CASE("matrix product matches a hand computation", "[matrix]") {
  const auto A = ComplexMatrix::from_rows({{cplx(1, 1), cplx(0, 2)}, {cplx(3, 0), cplx(1, -1)}});
  const auto B = ComplexMatrix::from_rows({{cplx(2, 0), cplx(0, 1)}, {cplx(1, 0), cplx(0, 0)}});
  const ComplexMatrix C = A * B;
  CHECK(std::abs(C(0, 0) - cplx(2, 4)) < 1e-15);
  CHECK(std::abs(C(0, 1) - cplx(-1, 1)) < 1e-15);
  CHECK(std::abs(C(1, 0) - cplx(7, -1)) < 1e-15);
  CHECK(std::abs(C(1, 1) - cplx(0, 3)) < 1e-15);
}

TEST_CASE("adjoint conjugates and transposes", "[matrix]") {
  const auto A = ComplexMatrix::from_rows({{cplx(1, 2), cplx(3, 4)}, {cplx(5, 6), cplx(7, 8)}});
  const ComplexMatrix B = A.adjoint();
  CHECK(B(0, 1) == std::conj(A(1, 0)));
  CHECK(B(1, 0) == std::conj(A(0, 1)));
}

TEST_CASE("frobenius norm and trace agree with closed forms", "[matrix]") {
  const auto A = ComplexMatrix::from_rows({{cplx(3, 4), cplx(0, 0)}, {cplx(0, 0), cplx(0, 0)}});
  CHECK(frobenius_norm(A) == 5.0);
  CHECK(trace(A) == cplx(3, 4));
  CHECK_THROWS_AS(trace(ComplexMatrix(2, 3)), Error);
}

TEST_CASE("classify detects Hermitian, normal, and unitary structure", "[matrix]") {
  const auto H = ComplexMatrix::from_rows({{cplx(1, 0), cplx(0, 1)}, {cplx(0, -1), cplx(2, 0)}});
  auto ch = classify(H);
  CHECK(ch.count(MatrixClass::Hermitian) == 1);
  CHECK(ch.count(MatrixClass::Normal) == 1);  // Hermitian implies normal

  // Rotation by 90 degrees: unitary and normal, not Hermitian.
  const auto R = ComplexMatrix::from_rows({{cplx(0, 0), cplx(-1, 0)}, {cplx(1, 0), cplx(0, 0)}});
  auto cr = classify(R);
  CHECK(cr.count(MatrixClass::Unitary) == 1);
  CHECK(cr.count(MatrixClass::Normal) == 1);
  CHECK(cr.count(MatrixClass::Hermitian) == 0);

  // Jordan-type block: nothing but general.
  const auto J = ComplexMatrix::from_rows({{cplx(0, 0), cplx(1, 0)}, {cplx(0, 0), cplx(0, 0)}});
  auto cj = classify(J);
  CHECK(cj.count(MatrixClass::General) == 1);
  CHECK(cj.size() == 1);

  CHECK(classify(ComplexMatrix(2, 3)).count(MatrixClass::General) == 1);
}

TEST_CASE("classification tolerance scales with the matrix", "[matrix]") {
  // A large Hermitian matrix with a relatively tiny defect stays Hermitian.
  auto A = ComplexMatrix::from_rows({{cplx(1e8, 0), cplx(0, 0)}, {cplx(0, 0), cplx(1e8, 0)}});
  A(0, 1) = cplx(0, 1e-4);  // defect 1e-4 against norm 1e8
  CHECK(is_hermitian(A));
  // The same absolute defect on a unit-size matrix is a violation.
  auto B = ComplexMatrix::identity(2);
  B(0, 1) = cplx(0, 1e-4);
  CHECK_FALSE(is_hermitian(B));
}

TEST_CASE("traceless part is an idempotent projection", "[matrix]") {
  const auto A = ComplexMatrix::from_rows({{cplx(2, 1), cplx(3, 0)}, {cplx(0, 0), cplx(4, -1)}});
  const ComplexMatrix T = traceless_part(A);
  CHECK(std::abs(trace(T)) < 1e-15);
  const ComplexMatrix TT = traceless_part(T);
  CHECK(frobenius_norm(T - TT) < 1e-15);
}

TEST_CASE("normalize rejects the zero matrix", "[matrix]") {
  CHECK_THROWS_MATCHES(normalize(ComplexMatrix(2, 2)), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::ZeroMatrix; }));
  const auto A = ComplexMatrix::from_rows({{cplx(0, 3), cplx(0, 0)}, {cplx(4, 0), cplx(0, 0)}});
  CHECK(std::abs(frobenius_norm(normalize(A)) - 1.0) < 1e-15);
}
