#include "rbm32/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rbm32/arrangement.hpp"
#include "rbm32/cube_geometry.hpp"
#include "rbm32/decompose.hpp"
#include "rbm32/document.hpp"
#include "rbm32/membership.hpp"
#include "rbm32/mle.hpp"
#include "rbm32/sampling.hpp"
#include "rbm32/viz.hpp"

namespace rbm32 {

namespace {

using nlohmann::json;

struct Options {
  std::string input = "-";
  std::string model = "rbm32";
  bool exact = false;
  bool normalize = false;
  bool bits = false;
  bool census = false;
  std::uint64_t seed = 0;
  long count = 1000000;
  int workers = 1;
  std::string panel = "+";
  int resolution = 24;
  std::string output_dir;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path, std::istream& in) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(in), {});
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open input file '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(f), {});
}

json signs_json(const std::array<Sign, 6>& signs) {
  json j = json::array();
  for (Sign s : signs) j.push_back(std::string(1, sign_char(s)));
  return j;
}

json optional_int(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

json factor_json(const Factor& f) { return json::array({f[0], f[1]}); }

json term_json(const RankOneTensor& t) {
  return json{{"a", factor_json(t.a)}, {"b", factor_json(t.b)}, {"c", factor_json(t.c)}};
}

template <std::size_t N>
json terms_json(const std::array<RankOneTensor, N>& terms) {
  json j = json::array();
  for (const auto& t : terms) j.push_back(term_json(t));
  return j;
}

json piece_json(const std::optional<Piece>& piece) {
  return piece ? json::array({piece->axis, piece->value}) : json(nullptr);
}

int cmd_check(const Options& o, std::istream& in, std::ostream& out) {
  Model model = parse_model(o.model);
  TensorDocument doc = parse_tensor_document(read_input(o.input, in));
  json j;
  j["model"] = std::string(model_name(model));
  j["exact"] = o.exact;
  if (o.exact) {
    ExactTensor q = to_exact_tensor(doc, o.normalize);
    MembershipVerdict v = check_membership(model, q);
    auto dets = slice_determinants(q.entries());
    std::array<Sign, 6> signs;
    json d = json::array();
    for (int k = 0; k < 6; ++k) {
      signs[k] = sign_of(dets[k]);
      d.push_back(to_string(dets[k]));
    }
    j["member"] = v.member;
    j["witness_set"] = optional_int(v.witness_set);
    j["boundary_case"] = v.boundary_case;
    j["determinants"] = d;
    j["signs"] = signs_json(signs);
  } else {
    ProbTensor p = to_prob_tensor(doc, o.normalize);
    MembershipVerdict v = check_membership(model, p);
    DetSignature sig = determinants(p);
    j["member"] = v.member;
    j["witness_set"] = optional_int(v.witness_set);
    j["boundary_case"] = v.boundary_case;
    j["determinants"] = sig.values;
    j["signs"] = signs_json(sig.signs);
  }
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_decompose(const Options& o, std::istream& in, std::ostream& out) {
  Model model = parse_model(o.model);
  ProbTensor p = to_prob_tensor(parse_tensor_document(read_input(o.input, in)), o.normalize);
  json j;
  j["model"] = std::string(model_name(model));
  switch (model) {
    case Model::RBM32: {
      HadamardFactorization h = hadamard_factorize(p);
      j["kind"] = "hadamard";
      j["route"] = std::string(route_name(h.route));
      j["first"] = terms_json(h.first);
      j["second"] = terms_json(h.second);
      j["residual"] = sup_distance(h.expand(), p.entries());
      break;
    }
    case Model::M33: {
      Rank3Decomposition d = rank3_decompose(p);
      j["kind"] = "rank3";
      j["route"] = std::string(route_name(d.route));
      j["terms"] = terms_json(d.terms);
      j["residual"] = sup_distance(d.expand(), p.entries());
      break;
    }
    case Model::M32: {
      if (!in_m32(p).member) throw NotMember("tensor outside M32");
      auto terms = rank2_decompose(p.entries());
      Tensor8 e0 = terms[0].expand(), e1 = terms[1].expand(), sum;
      for (int s = 0; s < kStates; ++s) sum[s] = e0[s] + e1[s];
      j["kind"] = "rank2";
      j["terms"] = terms_json(terms);
      j["residual"] = sup_distance(sum, p.entries());
      break;
    }
    case Model::Independence:
      throw UsageError("decompose supports --model rbm32, m33 or m32");
  }
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_project(const Options& o, std::istream& in, std::ostream& out) {
  ProbTensor p = to_prob_tensor(parse_tensor_document(read_input(o.input, in)), o.normalize);
  const double unit = o.bits ? std::log(2.0) : 1.0;
  ModelProjection mp = project_to_model(p);
  json j;
  j["unit"] = o.bits ? "bits" : "nats";
  j["divergence"] = mp.divergence / unit;
  j["member"] = mp.projections.size() == 1 && !mp.projections[0].piece;
  json list = json::array();
  for (const auto& r : mp.projections) {
    json e;
    e["piece"] = piece_json(r.piece);
    e["label"] = r.piece ? json(piece_label(*r.piece)) : json(nullptr);
    e["projected"] = tensor_json(r.projected.entries());
    e["divergence"] = r.divergence / unit;
    list.push_back(e);
  }
  j["projections"] = list;
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_volume(const Options& o, std::ostream& out, std::ostream& err) {
  Model model = parse_model(o.model);
  SamplerConfig cfg{o.seed, o.count, o.workers};
  auto progress = [&](const VolumeEstimate& e) {
    err << "samples=" << e.samples << " inside=" << e.inside << " fraction=" << e.fraction
        << " stderr=" << e.standard_error << '\n';
  };
  VolumeEstimate e = estimate_volume(model, cfg, progress);
  json j{{"model", std::string(model_name(model))},
         {"samples", e.samples},
         {"inside", e.inside},
         {"fraction", e.fraction},
         {"stderr", e.standard_error},
         {"seed", o.seed},
         {"workers", o.workers}};
  out << j.dump(2) << '\n';
  return kExitOk;
}

json hyperplane_set_json(HyperplaneSet set) {
  json j = json::array();
  for (int k = 0; k < 6; ++k)
    if ((set >> k) & 1) j.push_back("L" + std::to_string(k / 2 + 1) + std::to_string(k % 2));
  return j;
}

int cmd_arrangement(const Options& o, std::ostream& out) {
  json j;
  if (o.census) {
    auto regions = census_regions(o.workers);
    CensusCounts c = count_regions(regions);
    j["feasible"] = c.feasible;
    j["in_model"] = c.in_model;
    j["m32"] = c.m32;
    json list = json::array();
    for (const auto& r : regions) {
      json e;
      e["signs"] = signs_json(r.signs);
      e["feasible"] = r.feasible;
      e["in_model"] = r.in_model;
      e["m32"] = r.m32;
      if (r.witness) {
        json w = json::array();
        for (const auto& x : *r.witness) w.push_back(to_string(x));
        e["witness"] = w;
      }
      list.push_back(e);
    }
    j["regions"] = list;
  } else {
    auto poset = build_poset();
    json nodes = json::array(), edges = json::array();
    for (std::size_t i = 0; i < poset.size(); ++i) {
      const Flat& f = poset[i];
      nodes.push_back(json{{"id", i},
                           {"defining_set", hyperplane_set_json(f.defining_set)},
                           {"closure", hyperplane_set_json(f.closure)},
                           {"dimension", f.dimension},
                           {"mobius", f.mobius}});
      for (int below : f.covers) edges.push_back(json::array({below, i}));
    }
    CharacteristicPolynomial chi = characteristic_polynomial(poset);
    json coeffs = json::array();
    for (int k = kStates; k >= 0; --k) coeffs.push_back(chi.coefficients[k].convert_to<long long>());
    j["nodes"] = nodes;
    j["edges"] = edges;
    j["characteristic_polynomial"] = coeffs;
    j["chi_at_minus_one"] = chi(-1).convert_to<long long>();
    j["chi_at_one"] = chi(1).convert_to<long long>();
    j["generic_region_count"] = generic_region_count(6, 4);
  }
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_triangulate(const Options& o, std::istream& in, std::ostream& out) {
  ProbTensor p = to_prob_tensor(parse_tensor_document(read_input(o.input, in)), o.normalize);
  if (!p.is_interior()) throw InvalidTensor("triangulation needs strictly positive entries");
  LogTensor l = LogTensor::of(p);
  Triangulation t = regular_triangulation(l);
  json tets = json::array(), volumes = json::array();
  for (TetraMask m : t.tetrahedra) {
    json v = json::array();
    for (int s : tetra_vertices(m)) v.push_back(state_label(s));
    tets.push_back(v);
    volumes.push_back(tetra_volume(m));
  }
  json faces;
  for (int k = 0; k < 6; ++k)
    faces["d" + std::to_string(k / 2 + 1) + std::to_string(k % 2)] = std::string(1, diagonal_char(t.face_slices[k]));
  json j;
  j["tetrahedra"] = tets;
  j["volumes"] = volumes;
  j["face_slices"] = faces;
  j["type"] = classify_type(t).type_id;
  j["modes"] = count_modes(p);
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_viz_export(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.panel.size() != 1) throw UsageError("--panel must be + or -");
  char panel = o.panel[0];
  if (o.output_dir.empty()) {
    write_viz_csv(out, viz_mesh(panel, o.resolution));
    return kExitOk;
  }
  std::filesystem::create_directories(o.output_dir);
  for (int axis = 1; axis <= 3; ++axis)
    for (int value = 0; value < 2; ++value) {
      Piece piece{axis, value};
      auto path = std::filesystem::path(o.output_dir) /
                  (piece_label(piece) + (panel == '+' ? "_plus" : "_minus") + ".csv");
      std::ofstream f(path);
      if (!f) throw UsageError("cannot write " + path.string());
      write_viz_csv(f, viz_piece_mesh(piece, panel, o.resolution));
      err << "wrote " << path.string() << '\n';
    }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Membership tests, certificates and geometry for the 3-bit RBM with two hidden units"};
  app.name("rbm32");
  app.require_subcommand(1);
  Options o;

  auto add_input = [&](CLI::App* c) {
    c->add_option("--input", o.input, "tensor document path, or - for stdin")->capture_default_str();
    c->add_flag("--normalize", o.normalize, "rescale entries to sum one");
  };
  auto add_model = [&](CLI::App* c) {
    c->add_option("--model", o.model, "rbm32, m33, m32 or indep")->capture_default_str();
  };

  auto* check = app.add_subcommand("check", "semi-algebraic membership test");
  add_input(check);
  add_model(check);
  check->add_flag("--exact", o.exact, "exact rational arithmetic");

  auto* decompose = app.add_subcommand("decompose", "membership certificate");
  add_input(decompose);
  add_model(decompose);

  auto* project = app.add_subcommand("project", "divergence to the model and its minimizers");
  add_input(project);
  project->add_flag("--bits", o.bits, "report divergences in bits");

  auto* volume = app.add_subcommand("volume", "Monte Carlo volume fraction of a model");
  add_model(volume);
  volume->add_option("--seed", o.seed)->capture_default_str();
  volume->add_option("--count", o.count)->capture_default_str();
  volume->add_option("--workers", o.workers)->capture_default_str()->check(CLI::PositiveNumber);

  auto* arrangement = app.add_subcommand("arrangement", "intersection poset or region census");
  arrangement->add_flag("--census", o.census, "classify all 64 sign vectors");
  arrangement->add_flag("--exact", o.exact, "accepted for symmetry; the arrangement is always exact");
  arrangement->add_option("--workers", o.workers)->capture_default_str()->check(CLI::PositiveNumber);

  auto* triangulate = app.add_subcommand("triangulate", "regular triangulation of the cube by log-probabilities");
  add_input(triangulate);

  auto* viz = app.add_subcommand("viz-export", "CSV meshes of the boundary pieces in character coordinates");
  viz->add_option("--panel", o.panel, "sign of m123: + or -")->capture_default_str();
  viz->add_option("--resolution", o.resolution)->capture_default_str();
  viz->add_option("--output-dir", o.output_dir, "write one CSV per piece instead of stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(o, in, out);
    if (decompose->parsed()) return cmd_decompose(o, in, out);
    if (project->parsed()) return cmd_project(o, in, out);
    if (volume->parsed()) return cmd_volume(o, out, err);
    if (arrangement->parsed()) return cmd_arrangement(o, out);
    if (triangulate->parsed()) return cmd_triangulate(o, in, out);
    if (viz->parsed()) return cmd_viz_export(o, out, err);
  } catch (const MalformedDocument& e) {
    err << "error: " << e.what() << '\n';
    return kExitMalformedJson;
  } catch (const InvalidTensor& e) {
    err << "error: invalid tensor: " << e.what() << '\n';
    return kExitInvalidTensor;
  } catch (const NotMember& e) {
    err << "error: not a member: " << e.what() << '\n';
    return kExitNotMember;
  } catch (const DegenerateInput& e) {
    err << "error: degenerate input: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace rbm32
