// Export layer: JSON reports parse back with exact numeric round trips, CSV
// fields carry full precision, and OBJ / binary PLY meshes have the right
// counts, indices, and byte layout.
//
// Oracles: an independent JSON parser (vendored single-header library) reads
// everything the writer emits; mesh bytes are checked against hand-computed
// layouts on the hyperbolic-cylinder fixture whose node positions are closed
// form.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wsurf/classify.hpp"
#include "wsurf/io.hpp"
#include "wsurf/reconstruct.hpp"

using namespace wsurf;
using Catch::Approx;
using nlohmann::json;

namespace {

LinearRelation R(double a, double b, double g, double d) {
  LinearRelation r;
  r.alpha = a;
  r.beta = b;
  r.gamma = g;
  r.delta = d;
  return r;
}

InvariantGrid cylinder_grid(int n) {
  InvariantGrid inv;
  inv.chart.a_const = 1.0;
  inv.chart.b_const = 1.0;
  inv.chart.nu0 = -1.0;
  inv.chart.grid = GridSpec{0.0, 1.0, 0.0, 1.0, n, n};
  inv.has_nu = false;
  inv.nu1 = Field(n, n, -1.0);
  inv.nu2 = Field(n, n, 0.0);
  inv.gamma1 = Field(n, n, 0.0);
  inv.gamma2 = Field(n, n, 0.0);
  inv.E = Field(n, n, 1.0);
  inv.G = Field(n, n, 1.0);
  return inv;
}

Frame cylinder_initial() {
  Frame f;
  f.z = {0.0, 0.0, 1.0};
  f.X = {1.0, 0.0, 0.0};
  f.Y = {0.0, 1.0, 0.0};
  f.l = {0.0, 0.0, 1.0};
  return f;
}

SurfaceGrid cylinder_mesh(int n) {
  return integrate_frame(cylinder_grid(n), cylinder_initial());
}

float f32_at(const std::string& bytes, std::size_t off) {
  std::uint32_t u = (static_cast<unsigned char>(bytes[off])) |
                    (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + 1])) << 8) |
                    (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + 2])) << 16) |
                    (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + 3])) << 24);
  float f;
  std::memcpy(&f, &u, 4);
  return f;
}

std::int32_t i32_at(const std::string& bytes, std::size_t off) {
  std::uint32_t u = (static_cast<unsigned char>(bytes[off])) |
                    (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + 1])) << 8) |
                    (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + 2])) << 16) |
                    (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + 3])) << 24);
  return static_cast<std::int32_t>(u);
}

}  // namespace

TEST_CASE("json numbers round-trip doubles exactly") {
  for (double v : {0.1, 1.0 / 3.0, -2.7182818284590452, 1e-300, 6.02e23, -0.0, 42.0}) {
    const std::string s = json_num(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(json_num(std::nan("")) == "null");
  CHECK(json_num(INFINITY) == "null");
}

TEST_CASE("report JSON parses back with exact fields") {
  SECTION("verification report") {
    VerificationReport r;
    r.codazzi1_max = 1.25e-5;
    r.codazzi2_max = 3.0e-6;
    r.gauss_max = 0.1;
    r.nu1_dev = 1.0 / 3.0;
    r.nu2_dev = 2e-9;
    r.F_max = 5e-17;
    r.M_max = 7e-13;
    r.h_u = 0.0125;
    r.h_v = 0.025;
    const json j = json::parse(to_json(r));
    CHECK(j.at("codazzi1_max").get<double>() == r.codazzi1_max);
    CHECK(j.at("gauss_max").get<double>() == r.gauss_max);
    CHECK(j.at("nu1_dev").get<double>() == r.nu1_dev);
    CHECK(j.at("F_max").get<double>() == r.F_max);
    CHECK(j.at("M_max").get<double>() == r.M_max);
    CHECK(j.at("h_u").get<double>() == r.h_u);
    CHECK(j.at("h_v").get<double>() == r.h_v);
  }
  SECTION("solver report") {
    SolverReport r;
    r.iterations = 12;
    r.final_residual = 3.5e-11;
    r.wall_time_s = 0.25;
    const json j = json::parse(to_json(r));
    CHECK(j.at("iterations").get<int>() == 12);
    CHECK(j.at("final_residual").get<double>() == r.final_residual);
  }
  SECTION("parallel-family report") {
    ParallelNaturalReport r;
    r.a = 0.05;
    r.epsilon = -1;
    r.a_bar = 1.0 / 0.95;
    r.b_bar = 1.0 / 1.05;
    r.constancy_rel = 4.4e-13;
    r.identity_defect = 6.2e-14;
    r.residual_match = 0.217;
    const json j = json::parse(to_json(r));
    CHECK(j.at("a").get<double>() == 0.05);
    CHECK(j.at("epsilon").get<int>() == -1);
    CHECK(j.at("a_bar").get<double>() == r.a_bar);
    CHECK(j.at("identity_defect").get<double>() == r.identity_defect);
  }
}

TEST_CASE("classification descriptor JSON carries the full normalization") {
  const auto d = classify(R(1, 0, -1, 1));  // offset 1/2 onto constant K'
  const json j = json::parse(to_json(d));
  CHECK(j.at("class_id").get<int>() == 8);
  CHECK(j.at("relation").get<std::string>() == "K'=-1");
  CHECK(j.at("offset_a").get<double>() == 0.5);
  CHECK(j.at("epsilon").get<int>() == 1);
  CHECK(j.at("epsilon_assumed").get<bool>() == true);
  CHECK(j.at("similarity_scale").get<double>() == d.similarity_scale);
  CHECK(j.at("family_level").get<double>() == d.family_level);
  CHECK(j.at("reduced").at("gamma").get<double>() == d.reduced.gamma);
  CHECK(j.at("reduced").at("delta").get<double>() == 1.0);
  CHECK(j.at("pde").at("operator").get<std::string>() == "DeltaBar");
  CHECK(j.at("pde").at("signature").get<std::string>() == "minkowski");
  // The expression strings parse back to the same functions.
  const Expr rhs = Expr::parse(j.at("pde").at("rhs").get<std::string>());
  EvalEnv env;
  env.x = 0.6;
  CHECK(rhs.eval(env) == Approx(d.pde.eval_rhs(0.6)).margin(1e-15));
  // Identity substitutions print as "-" by convention.
  const auto d3 = classify(R(0, 1, -1, 0));
  const json j3 = json::parse(to_json(d3));
  CHECK(j3.at("pde").at("substitution").get<std::string>() == "-");
  // Relation labels contain a quote-sensitive character; escaping must hold.
  CHECK(j3.at("relation").get<std::string>() == "H'=1");
}

TEST_CASE("csv fields carry node coordinates and full-precision values") {
  GridSpec g{0.0, 1.0, 2.0, 3.0, 3, 4};
  Field f(3, 4);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 3; ++i) f(i, j) = std::sin(1.0 + i + 10.0 * j) / 3.0;
  std::ostringstream os;
  write_field_csv(os, g, f);
  std::istringstream in(os.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "u,v,value");
  int rows = 0;
  double first_val = 0.0, last_val = 0.0;
  while (std::getline(in, line)) {
    const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
    REQUIRE(c2 != std::string::npos);
    const double val = std::stod(line.substr(c2 + 1));
    if (rows == 0) first_val = val;
    last_val = val;
    ++rows;
  }
  CHECK(rows == 12);
  CHECK(first_val == f(0, 0));
  CHECK(last_val == f(2, 3));

  Field wrong(4, 4);
  std::ostringstream os2;
  CHECK_THROWS_AS(write_field_csv(os2, g, wrong), UsageError);
}

TEST_CASE("obj meshes list vertices, normals, and consistent triangles") {
  const int n = 5;
  const auto mesh = cylinder_mesh(n);
  std::ostringstream os;
  write_obj(os, mesh);
  std::istringstream in(os.str());
  std::string line;
  int nv = 0, nn = 0, nf = 0;
  double first_vx = -1, first_vy = -1, first_vz = -1;
  while (std::getline(in, line)) {
    if (line.rfind("v ", 0) == 0) {
      if (nv == 0) {
        std::istringstream ls(line.substr(2));
        ls >> first_vx >> first_vy >> first_vz;
      }
      ++nv;
    } else if (line.rfind("vn ", 0) == 0) {
      ++nn;
    } else if (line.rfind("f ", 0) == 0) {
      // Every face vertex uses matched position//normal indices in range.
      std::istringstream ls(line.substr(2));
      std::string tok;
      int count = 0;
      while (ls >> tok) {
        const auto sep = tok.find("//");
        REQUIRE(sep != std::string::npos);
        const int a = std::stoi(tok.substr(0, sep));
        const int b = std::stoi(tok.substr(sep + 2));
        CHECK(a == b);
        CHECK(a >= 1);
        CHECK(a <= n * n);
        ++count;
      }
      CHECK(count == 3);
      ++nf;
    }
  }
  CHECK(nv == n * n);
  CHECK(nn == n * n);
  CHECK(nf == 2 * (n - 1) * (n - 1));
  // First node of the cylinder fixture sits at (sinh 0, 0, cosh 0) = (0,0,1).
  CHECK(first_vx == 0.0);
  CHECK(first_vy == 0.0);
  CHECK(first_vz == 1.0);
}

TEST_CASE("ply meshes have the binary little-endian layout") {
  const int n = 4;
  const auto mesh = cylinder_mesh(n);
  std::ostringstream os;
  write_ply(os, mesh);
  const std::string bytes = os.str();

  const auto hdr_end = bytes.find("end_header\n");
  REQUIRE(hdr_end != std::string::npos);
  const std::string header = bytes.substr(0, hdr_end);
  CHECK(header.find("format binary_little_endian 1.0") != std::string::npos);
  CHECK(header.find("element vertex 16") != std::string::npos);
  CHECK(header.find("element face 18") != std::string::npos);
  CHECK(header.find("property list uchar int vertex_indices") != std::string::npos);

  const std::size_t body = hdr_end + std::strlen("end_header\n");
  const int n_vert = n * n, n_face = 2 * (n - 1) * (n - 1);
  // 6 float32 per vertex, (1 uchar + 3 int32) per face.
  REQUIRE(bytes.size() == body + 24u * n_vert + 13u * n_face);

  // Vertex 0 is (0,0,1) with normal (0,0,1): twelve zero bytes around two
  // 1.0f patterns (00 00 80 3f little-endian).
  CHECK(f32_at(bytes, body + 0) == 0.0f);
  CHECK(f32_at(bytes, body + 4) == 0.0f);
  CHECK(f32_at(bytes, body + 8) == 1.0f);
  CHECK(static_cast<unsigned char>(bytes[body + 8]) == 0x00);
  CHECK(static_cast<unsigned char>(bytes[body + 9]) == 0x00);
  CHECK(static_cast<unsigned char>(bytes[body + 10]) == 0x80);
  CHECK(static_cast<unsigned char>(bytes[body + 11]) == 0x3f);
  CHECK(f32_at(bytes, body + 20) == 1.0f);

  // Vertex (i=1, j=0) is (sinh h, 0, cosh h) with h = 1/3, up to the frame
  // integration error on this deliberately coarse grid (measured 3.4e-5).
  const double h = 1.0 / 3.0;
  CHECK(f32_at(bytes, body + 24) == Approx(std::sinh(h)).margin(1e-4));
  CHECK(f32_at(bytes, body + 32) == Approx(std::cosh(h)).margin(1e-4));

  // First face record: count byte 3, indices 0, 1, n+1.
  const std::size_t faces = body + 24u * n_vert;
  CHECK(static_cast<unsigned char>(bytes[faces]) == 3);
  CHECK(i32_at(bytes, faces + 1) == 0);
  CHECK(i32_at(bytes, faces + 5) == 1);
  CHECK(i32_at(bytes, faces + 9) == n + 1);
  // Second triangle of the first quad: 0, n+1, n.
  CHECK(static_cast<unsigned char>(bytes[faces + 13]) == 3);
  CHECK(i32_at(bytes, faces + 14) == 0);
  CHECK(i32_at(bytes, faces + 18) == n + 1);
  CHECK(i32_at(bytes, faces + 22) == n);

  // All face indices in range.
  for (int f = 0; f < n_face; ++f) {
    const std::size_t off = faces + 13u * f;
    REQUIRE(static_cast<unsigned char>(bytes[off]) == 3);
    for (int k = 0; k < 3; ++k) {
      const std::int32_t idx = i32_at(bytes, off + 1 + 4u * k);
      CHECK(idx >= 0);
      CHECK(idx < n_vert);
    }
  }
}
