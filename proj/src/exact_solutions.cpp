#include "stokeseg/exact_solutions.hpp"

#include <cmath>
#include <memory>

#include "stokeseg/mesh.hpp"
#include "stokeseg/types.hpp"

namespace stokeseg {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Factors of the vortex stream function psi = 5 a(x) a(y). b = a'/2 keeps
// the expressions below short.
double va(double t) { return t * t * (t - 1.0) * (t - 1.0); }
double vb(double t) { return t * (t - 1.0) * (2.0 * t - 1.0); }
double vbp(double t) { return 6.0 * t * t - 6.0 * t + 1.0; }   // b'
double vapp(double t) { return 12.0 * t * t - 12.0 * t + 2.0; }  // a''
double vbpp(double t) { return 12.0 * t - 6.0; }                 // b''

double sgn(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

}  // namespace

ExactSolution solution_vortex2d(double nu) {
  ExactSolution ex;
  ex.name = "vortex2d";
  ex.dim = 2;
  ex.nu = nu;
  ex.u = [](const Vec3& x) {
    return Vec3{10.0 * va(x[0]) * vb(x[1]), -10.0 * vb(x[0]) * va(x[1]), 0.0};
  };
  ex.grad_u = [](const Vec3& x) {
    Mat3 g = Mat3::Zero();
    g(0, 0) = 20.0 * vb(x[0]) * vb(x[1]);
    g(0, 1) = 10.0 * va(x[0]) * vbp(x[1]);
    g(1, 0) = -10.0 * vbp(x[0]) * va(x[1]);
    g(1, 1) = -20.0 * vb(x[0]) * vb(x[1]);
    return g;
  };
  ex.p = [](const Vec3& x) { return 10.0 * (2.0 * x[0] - 1.0) * (2.0 * x[1] - 1.0); };
  ex.p_mean = 0.0;
  ex.f = [nu](const Vec3& x) {
    const double fx =
        -10.0 * nu * (vapp(x[0]) * vb(x[1]) + va(x[0]) * vbpp(x[1])) + 20.0 * (2.0 * x[1] - 1.0);
    const double fy =
        10.0 * nu * (vbpp(x[0]) * va(x[1]) + vb(x[0]) * vapp(x[1])) + 20.0 * (2.0 * x[0] - 1.0);
    return Vec3{fx, fy, 0.0};
  };
  ex.g = ex.u;  // identically zero on the boundary of the square
  ex.make_mesh = [](int n) { return generate_unit_square(n); };
  return ex;
}

ExactSolution solution_cube3d(double nu) {
  ExactSolution ex;
  ex.name = "cube3d";
  ex.dim = 3;
  ex.nu = nu;
  auto u = [](const Vec3& x) {
    const double sx = std::sin(kPi * x[0]), cx = std::cos(kPi * x[0]);
    const double sy = std::sin(kPi * x[1]), cy = std::cos(kPi * x[1]);
    const double sz = std::sin(kPi * x[2]), cz = std::cos(kPi * x[2]);
    return Vec3{sx * (cy - cz), sy * (cz - cx), sz * (cx - cy)};
  };
  ex.u = u;
  ex.grad_u = [](const Vec3& x) {
    const double sx = std::sin(kPi * x[0]), cx = std::cos(kPi * x[0]);
    const double sy = std::sin(kPi * x[1]), cy = std::cos(kPi * x[1]);
    const double sz = std::sin(kPi * x[2]), cz = std::cos(kPi * x[2]);
    Mat3 g;
    g(0, 0) = cx * (cy - cz);
    g(0, 1) = -sx * sy;
    g(0, 2) = sx * sz;
    g(1, 0) = sy * sx;
    g(1, 1) = cy * (cz - cx);
    g(1, 2) = -sy * sz;
    g(2, 0) = -sz * sx;
    g(2, 1) = sz * sy;
    g(2, 2) = cz * (cx - cy);
    return Mat3(kPi * g);
  };
  ex.p = [](const Vec3& x) {
    return std::sin(kPi * x[0]) * std::sin(kPi * x[1]) * std::sin(kPi * x[2]);
  };
  ex.p_mean = std::pow(2.0 / kPi, 3);
  ex.f = [nu, u](const Vec3& x) {
    const double sx = std::sin(kPi * x[0]), cx = std::cos(kPi * x[0]);
    const double sy = std::sin(kPi * x[1]), cy = std::cos(kPi * x[1]);
    const double sz = std::sin(kPi * x[2]), cz = std::cos(kPi * x[2]);
    // -nu*lap(u) = 2 pi^2 nu u for this field
    const Vec3 grad_p{kPi * cx * sy * sz, kPi * sx * cy * sz, kPi * sx * sy * cz};
    return Vec3(2.0 * kPi * kPi * nu * u(x) + grad_p);
  };
  ex.g = ex.u;  // nonzero boundary data
  ex.make_mesh = [](int n) { return generate_unit_cube(n); };
  return ex;
}

ExactSolution solution_lshape(double nu) {
  ExactSolution ex;
  ex.name = "lshape";
  ex.dim = 2;
  ex.nu = nu;
  auto u = [](const Vec3& x) {
    return Vec3{std::sin(kPi * x[0]) * std::sin(kPi * x[1]),
                std::cos(kPi * x[0]) * std::cos(kPi * x[1]), 0.0};
  };
  ex.u = u;
  ex.grad_u = [](const Vec3& x) {
    const double sx = std::sin(kPi * x[0]), cx = std::cos(kPi * x[0]);
    const double sy = std::sin(kPi * x[1]), cy = std::cos(kPi * x[1]);
    Mat3 g = Mat3::Zero();
    g(0, 0) = kPi * cx * sy;
    g(0, 1) = kPi * sx * cy;
    g(1, 0) = -kPi * sx * cy;
    g(1, 1) = -kPi * cx * sy;
    return g;
  };
  ex.p = [](const Vec3& x) { return std::abs(x[1]); };
  // integral of |y| over the L is 3/2, area 3
  ex.p_mean = 0.5;
  ex.f = [nu, u](const Vec3& x) {
    const Vec3 grad_p{0.0, sgn(x[1]), 0.0};
    return Vec3(2.0 * kPi * kPi * nu * u(x) + grad_p);
  };
  ex.g = ex.u;
  ex.make_mesh = [](int n) { return generate_lshape(n); };
  return ex;
}

ExactSolution make_solution(const std::string& problem, double nu) {
  if (problem == "vortex2d") return solution_vortex2d(nu);
  if (problem == "cube3d") return solution_cube3d(nu);
  if (problem == "lshape") return solution_lshape(nu);
  if (problem.rfind("file:", 0) == 0) {
    const std::string path = problem.substr(5);
    SimplicialMesh mesh = load_mesh(path);  // throws ParseError on bad input
    ExactSolution ex = mesh.dim == 3 ? solution_cube3d(nu) : solution_vortex2d(nu);
    ex.name = problem;
    auto shared = std::make_shared<SimplicialMesh>(std::move(mesh));
    ex.make_mesh = [shared](int) { return *shared; };
    return ex;
  }
  throw InvalidParameter("Unknown problem '" + problem + "'");
}

}  // namespace stokeseg
