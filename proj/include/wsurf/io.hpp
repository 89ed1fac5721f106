#pragma once

// Export layer: JSON reports, CSV scalar fields, and surface meshes as OBJ
// (ASCII) or PLY (binary little-endian).  JSON numbers carry 17 significant
// digits so every double round-trips exactly; non-finite values are emitted
// as null.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "wsurf/classify.hpp"
#include "wsurf/errors.hpp"
#include "wsurf/grid.hpp"
#include "wsurf/parallel.hpp"
#include "wsurf/reconstruct.hpp"
#include "wsurf/solve.hpp"
#include "wsurf/verify.hpp"

namespace wsurf {

inline std::string json_num(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  return out;
}

// Streaming JSON builder with automatic comma placement.
class JsonWriter {
 public:
  JsonWriter& begin_object() {
    comma();
    out_ << '{';
    first_.push_back(true);
    return *this;
  }
  JsonWriter& end_object() {
    out_ << '}';
    first_.pop_back();
    return *this;
  }
  JsonWriter& begin_array() {
    comma();
    out_ << '[';
    first_.push_back(true);
    return *this;
  }
  JsonWriter& end_array() {
    out_ << ']';
    first_.pop_back();
    return *this;
  }
  JsonWriter& key(const std::string& k) {
    comma();
    out_ << '"' << json_escape(k) << "\":";
    suppress_ = true;
    return *this;
  }
  JsonWriter& value(double v) {
    comma();
    out_ << json_num(v);
    return *this;
  }
  JsonWriter& value(int v) {
    comma();
    out_ << v;
    return *this;
  }
  JsonWriter& value(bool b) {
    comma();
    out_ << (b ? "true" : "false");
    return *this;
  }
  JsonWriter& value(const std::string& s) {
    comma();
    out_ << '"' << json_escape(s) << '"';
    return *this;
  }
  JsonWriter& value(const char* s) { return value(std::string(s)); }

  JsonWriter& field(const std::string& k, double v) { return key(k).value(v); }
  JsonWriter& field(const std::string& k, int v) { return key(k).value(v); }
  JsonWriter& field(const std::string& k, bool v) { return key(k).value(v); }
  JsonWriter& field(const std::string& k, const std::string& v) { return key(k).value(v); }
  JsonWriter& field(const std::string& k, const char* v) { return key(k).value(v); }

  std::string str() const { return out_.str(); }

 private:
  void comma() {
    if (suppress_) {
      suppress_ = false;
      return;
    }
    if (!first_.empty()) {
      if (!first_.back()) out_ << ',';
      first_.back() = false;
    }
  }
  std::ostringstream out_;
  std::vector<bool> first_;
  bool suppress_ = false;
};

// --- report serialization ----------------------------------------------------

inline void json_put(JsonWriter& w, const LinearRelation& rel) {
  w.begin_object()
      .field("alpha", rel.alpha)
      .field("beta", rel.beta)
      .field("gamma", rel.gamma)
      .field("delta", rel.delta)
      .end_object();
}

inline void json_put(JsonWriter& w, const PdeForm& form) {
  w.begin_object()
      .field("class_id", form.class_id)
      .field("operator", operator_name(form.op))
      .field("signature",
             form.signature == Signature::MINKOWSKI ? "minkowski" : "euclidean")
      .field("p", form.p)
      .field("q", form.q)
      .field("lhs", form.lhs_transform.str())
      .field("rhs", form.rhs.str())
      .field("substitution", form.identity_sub ? "-" : form.sub_nu_of_lam.str())
      .field("lhs_inverse", form.lhs_inverse.str())
      .end_object();
}

inline std::string to_json(const PdeForm& form) {
  JsonWriter w;
  json_put(w, form);
  return w.str();
}

inline std::string to_json(const BasicClassDescriptor& d) {
  JsonWriter w;
  w.begin_object()
      .field("class_id", d.class_id)
      .field("relation", d.relation)
      .field("p", d.p)
      .field("q", d.q)
      .field("offset_a", d.offset_a)
      .field("epsilon", d.epsilon)
      .field("epsilon_assumed", d.epsilon_assumed)
      .field("flipped", d.flipped)
      .field("eta", d.eta)
      .field("family_level", d.family_level)
      .field("similarity_scale", d.similarity_scale);
  w.key("reduced");
  json_put(w, d.reduced);
  w.key("pde");
  json_put(w, d.pde);
  w.end_object();
  return w.str();
}

inline std::string to_json(const SolverReport& r) {
  JsonWriter w;
  w.begin_object()
      .field("iterations", r.iterations)
      .field("final_residual", r.final_residual)
      .field("wall_time_s", r.wall_time_s)
      .end_object();
  return w.str();
}

inline std::string to_json(const VerificationReport& r) {
  JsonWriter w;
  w.begin_object()
      .field("codazzi1_max", r.codazzi1_max)
      .field("codazzi2_max", r.codazzi2_max)
      .field("gauss_max", r.gauss_max)
      .field("nu1_dev", r.nu1_dev)
      .field("nu2_dev", r.nu2_dev)
      .field("F_max", r.F_max)
      .field("M_max", r.M_max)
      .field("codazzi1_max_full", r.codazzi1_max_full)
      .field("codazzi2_max_full", r.codazzi2_max_full)
      .field("gauss_max_full", r.gauss_max_full)
      .field("F_max_full", r.F_max_full)
      .field("M_max_full", r.M_max_full)
      .field("h_u", r.h_u)
      .field("h_v", r.h_v)
      .end_object();
  return w.str();
}

inline std::string to_json(const ParallelNaturalReport& r) {
  JsonWriter w;
  w.begin_object()
      .field("a", r.a)
      .field("epsilon", r.epsilon)
      .field("a_bar", r.a_bar)
      .field("b_bar", r.b_bar)
      .field("f0", r.f0)
      .field("g0", r.g0)
      .field("constancy_abs", r.constancy_abs)
      .field("constancy_rel", r.constancy_rel)
      .field("residual_match", r.residual_match)
      .field("identity_defect", r.identity_defect)
      .end_object();
  return w.str();
}

inline std::string to_json(const CompatibilityReport& r) {
  JsonWriter w;
  w.begin_object()
      .field("strongly_regular", r.strongly_regular)
      .field("tolerance", r.tolerance)
      .field("sign_failures", r.sign_failures)
      .field("sign_margin", r.sign_margin)
      .field("codazzi_u", r.codazzi_u)
      .field("codazzi_v", r.codazzi_v)
      .field("gauss", r.gauss)
      .field("pass", r.pass)
      .end_object();
  return w.str();
}

// --- CSV -----------------------------------------------------------------------

// One row per node, row-major (the v index varies slowest), full precision.
inline void write_field_csv(std::ostream& os, const GridSpec& grid, const Field& field) {
  if (field.n_u() != grid.n_u || field.n_v() != grid.n_v)
    throw UsageError("field shape does not match the grid");
  os << "u,v,value\n";
  for (int j = 0; j < grid.n_v; ++j)
    for (int i = 0; i < grid.n_u; ++i)
      os << json_num(grid.u(i)) << ',' << json_num(grid.v(j)) << ','
         << json_num(field(i, j)) << '\n';
}

// --- meshes ----------------------------------------------------------------------

namespace detail {

inline void require_mesh(const SurfaceGrid& s) {
  if (s.n_u < 2 || s.n_v < 2 ||
      s.frames.size() != static_cast<std::size_t>(s.n_u) * s.n_v)
    throw UsageError("mesh export needs a complete grid, at least 2 x 2");
}

inline void put_u32(std::ostream& os, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff),
                     static_cast<char>((v >> 24) & 0xff)};
  os.write(b, 4);
}

inline void put_i32(std::ostream& os, std::int32_t v) {
  put_u32(os, static_cast<std::uint32_t>(v));
}

inline void put_f32(std::ostream& os, float f) {
  std::uint32_t v;
  std::memcpy(&v, &f, 4);
  put_u32(os, v);
}

}  // namespace detail

// Wavefront OBJ, ASCII: positions, per-vertex normals, triangulated quads.
// The normal written is the surface's unit normal field (time-like in the
// ambient metric; exported componentwise).
inline void write_obj(std::ostream& os, const SurfaceGrid& s) {
  detail::require_mesh(s);
  os << "# " << s.n_u << " x " << s.n_v << " surface grid, "
     << 2 * (s.n_u - 1) * (s.n_v - 1) << " triangles\n";
  for (const Frame& f : s.frames)
    os << "v " << json_num(f.z.x1) << ' ' << json_num(f.z.x2) << ' '
       << json_num(f.z.x3) << '\n';
  for (const Frame& f : s.frames)
    os << "vn " << json_num(f.l.x1) << ' ' << json_num(f.l.x2) << ' '
       << json_num(f.l.x3) << '\n';
  for (int j = 0; j + 1 < s.n_v; ++j)
    for (int i = 0; i + 1 < s.n_u; ++i) {
      const int a = j * s.n_u + i + 1;  // OBJ indexing is 1-based
      const int b = a + 1;
      const int c = a + s.n_u + 1;
      const int d = a + s.n_u;
      os << "f " << a << "//" << a << ' ' << b << "//" << b << ' ' << c << "//" << c
         << '\n';
      os << "f " << a << "//" << a << ' ' << c << "//" << c << ' ' << d << "//" << d
         << '\n';
    }
}

// PLY, binary little-endian: per vertex x y z nx ny nz as float32, then
// triangles as uchar count + three int32 indices (0-based).
inline void write_ply(std::ostream& os, const SurfaceGrid& s) {
  detail::require_mesh(s);
  const int n_vert = s.n_u * s.n_v;
  const int n_face = 2 * (s.n_u - 1) * (s.n_v - 1);
  os << "ply\n"
     << "format binary_little_endian 1.0\n"
     << "comment " << s.n_u << " x " << s.n_v << " surface grid\n"
     << "element vertex " << n_vert << "\n"
     << "property float x\nproperty float y\nproperty float z\n"
     << "property float nx\nproperty float ny\nproperty float nz\n"
     << "element face " << n_face << "\n"
     << "property list uchar int vertex_indices\n"
     << "end_header\n";
  for (const Frame& f : s.frames) {
    detail::put_f32(os, static_cast<float>(f.z.x1));
    detail::put_f32(os, static_cast<float>(f.z.x2));
    detail::put_f32(os, static_cast<float>(f.z.x3));
    detail::put_f32(os, static_cast<float>(f.l.x1));
    detail::put_f32(os, static_cast<float>(f.l.x2));
    detail::put_f32(os, static_cast<float>(f.l.x3));
  }
  for (int j = 0; j + 1 < s.n_v; ++j)
    for (int i = 0; i + 1 < s.n_u; ++i) {
      const int a = j * s.n_u + i;
      const int b = a + 1;
      const int c = a + s.n_u + 1;
      const int d = a + s.n_u;
      os.put(static_cast<char>(3));
      detail::put_i32(os, a);
      detail::put_i32(os, b);
      detail::put_i32(os, c);
      os.put(static_cast<char>(3));
      detail::put_i32(os, a);
      detail::put_i32(os, c);
      detail::put_i32(os, d);
    }
}

}  // namespace wsurf
