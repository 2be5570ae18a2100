#include <json.hpp>

#include "ib/scenarios.hpp"

namespace ib {

namespace {

using nlohmann::json;

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vec vec_from_json(const json& a) {
  Vec v((int)a.size());
  for (int i = 0; i < (int)a.size(); ++i) v(i) = a[(size_t)i].get<double>();
  return v;
}

json mat_to_json(const Mat& m) {  // row-major nested arrays
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const json& rows) {
  const int nr = (int)rows.size();
  const int nc = nr > 0 ? (int)rows[0].size() : 0;
  Mat m(nr, nc);
  for (int r = 0; r < nr; ++r) {
    if ((int)rows[(size_t)r].size() != nc)
      throw Inconsistent("scenario json: ragged matrix");
    for (int c = 0; c < nc; ++c)
      m(r, c) = rows[(size_t)r][(size_t)c].get<double>();
  }
  return m;
}

json body_to_json(const ConvexBody& b) {
  json j;
  switch (b.kind) {
    case ConvexBody::Kind::Polytope:
      j["kind"] = "polytope";
      j["verts"] = mat_to_json(b.verts);
      break;
    case ConvexBody::Kind::SimplexOfLabels:
      j["kind"] = "simplex";
      j["labels"] = b.labels;
      break;
    case ConvexBody::Kind::Ball:
      j["kind"] = "ball";
      j["ball_dim"] = b.ball_dim;
      j["mu_coord"] = b.mu_coord;
      break;
    case ConvexBody::Kind::ConeBall:
      j["kind"] = "cone_ball";
      j["D"] = b.cone_D;
      j["alpha"] = b.cone_alpha;
      break;
    case ConvexBody::Kind::Segment:
      j["kind"] = "segment";
      j["a"] = vec_to_json(b.verts.col(0));
      j["b"] = vec_to_json(b.verts.col(1));
      break;
  }
  return j;
}

ConvexBody body_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "polytope") return ConvexBody::polytope(mat_from_json(j.at("verts")));
  if (kind == "simplex") return ConvexBody::simplex(j.at("labels").get<int>());
  if (kind == "ball")
    return ConvexBody::ball(j.at("ball_dim").get<int>(),
                            j.at("mu_coord").get<int>());
  if (kind == "cone_ball")
    return ConvexBody::cone_ball(j.at("D").get<int>(),
                                 j.at("alpha").get<double>());
  if (kind == "segment")
    return ConvexBody::segment(vec_from_json(j.at("a")),
                               vec_from_json(j.at("b")));
  throw Inconsistent("scenario json: unknown body kind '" + kind + "'");
}

const char* kSineNames[] = {"auto", "simplex_lb", "ball", "cone_flat",
                            "bruteforce", "chain"};

SineMethod sine_from_name(const std::string& s) {
  for (int i = 0; i < 6; ++i)
    if (s == kSineNames[i]) return (SineMethod)i;
  throw Inconsistent("scenario json: unknown sine method '" + s + "'");
}

}  // namespace

std::string scenario_to_json(const Scenario& sc) {
  json j;
  j["name"] = sc.meta.name;

  json space;
  space["dim"] = sc.space.dim_Y;
  space["mu"] = vec_to_json(sc.space.mu);
  space["body"] = body_to_json(sc.space.body);
  space["ext_resolution"] = sc.space.ext_resolution;
  j["space"] = std::move(space);

  json fam;
  fam["dim_Z"] = sc.family.dim_Z;
  fam["dim_W"] = sc.family.dim_W;
  json arms = json::array();
  for (const Vec& a : sc.family.arm_embed) arms.push_back(vec_to_json(a));
  fam["arms"] = std::move(arms);
  json hs = json::array();
  for (const Vec& h : sc.family.H_grid) hs.push_back(vec_to_json(h));
  fam["H"] = std::move(hs);
  json tensors = json::array();
  for (const auto& per_arm : sc.family.F_tensor) {
    json per_w = json::array();
    for (const Mat& t : per_arm) per_w.push_back(mat_to_json(t));
    tensors.push_back(std::move(per_w));
  }
  fam["F"] = std::move(tensors);
  j["family"] = std::move(fam);

  json reward;
  json cs = json::array();
  for (const Vec& c : sc.reward.c) cs.push_back(vec_to_json(c));
  reward["c"] = std::move(cs);
  reward["c0"] = sc.reward.c0;
  j["reward"] = std::move(reward);

  json meta;
  meta["name"] = sc.meta.name;
  meta["grid"] = sc.meta.grid;
  json kvs = json::array();
  for (const KnownValue& kv : sc.meta.known_values) {
    json e;
    e["quantity"] = kv.quantity;
    e["value"] = kv.value;
    e["tolerance"] = kv.tolerance;
    e["note"] = kv.note;
    kvs.push_back(std::move(e));
  }
  meta["known_values"] = std::move(kvs);
  if (sc.meta.zerosum) {
    const ZeroSumMap& zs = *sc.meta.zerosum;
    json z;
    z["nb1"] = zs.nb1;
    z["nb2"] = zs.nb2;
    z["pure_arm"] = zs.pure_arm;
    json vab = json::array();
    for (const auto& ab : zs.vertex_ab) vab.push_back({ab[0], ab[1]});
    z["vertex_ab"] = std::move(vab);
    z["vertex_payoff"] = zs.vertex_payoff;
    meta["zerosum"] = std::move(z);
  }
  meta["sine_method"] = kSineNames[(int)sc.meta.sine_method];
  json so;
  so["chain_components"] = sc.meta.sine_opts.chain_components;
  so["support"] = sc.meta.sine_opts.support;
  so["samples"] = sc.meta.sine_opts.samples;
  so["seed"] = sc.meta.sine_opts.seed;
  meta["sine_opts"] = std::move(so);
  j["meta"] = std::move(meta);

  return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Inconsistent(std::string("scenario json: parse error: ") + e.what());
  }
  try {
    Scenario sc;
    const json& space = j.at("space");
    sc.space = make_outcome_space(vec_from_json(space.at("mu")),
                                  body_from_json(space.at("body")),
                                  space.at("ext_resolution").get<int>());
    if (sc.space.dim_Y != space.at("dim").get<int>())
      throw Inconsistent("scenario json: space dim mismatch");

    const json& fam = j.at("family");
    sc.family.dim_Z = fam.at("dim_Z").get<int>();
    sc.family.dim_W = fam.at("dim_W").get<int>();
    for (const json& a : fam.at("arms"))
      sc.family.arm_embed.push_back(vec_from_json(a));
    for (const json& h : fam.at("H"))
      sc.family.H_grid.push_back(vec_from_json(h));
    for (const json& per_arm : fam.at("F")) {
      std::vector<Mat> tensor;
      for (const json& t : per_arm) tensor.push_back(mat_from_json(t));
      sc.family.F_tensor.push_back(std::move(tensor));
    }

    const json& reward = j.at("reward");
    for (const json& c : reward.at("c"))
      sc.reward.c.push_back(vec_from_json(c));
    sc.reward.c0 = reward.at("c0").get<std::vector<double>>();

    const json& meta = j.at("meta");
    sc.meta.name = meta.at("name").get<std::string>();
    sc.meta.grid = meta.at("grid").get<std::map<std::string, double>>();
    for (const json& e : meta.at("known_values")) {
      sc.meta.known_values.push_back({e.at("quantity").get<std::string>(),
                                      e.at("value").get<double>(),
                                      e.at("tolerance").get<double>(),
                                      e.at("note").get<std::string>()});
    }
    if (meta.contains("zerosum")) {
      const json& z = meta.at("zerosum");
      ZeroSumMap zs;
      zs.nb1 = z.at("nb1").get<int>();
      zs.nb2 = z.at("nb2").get<int>();
      zs.pure_arm = z.at("pure_arm").get<std::vector<int>>();
      for (const json& ab : z.at("vertex_ab"))
        zs.vertex_ab.push_back({ab.at(0).get<int>(), ab.at(1).get<int>()});
      zs.vertex_payoff = z.at("vertex_payoff").get<std::vector<double>>();
      sc.meta.zerosum = std::move(zs);
    }
    sc.meta.sine_method = sine_from_name(meta.at("sine_method").get<std::string>());
    const json& so = meta.at("sine_opts");
    sc.meta.sine_opts.chain_components =
        so.at("chain_components").get<std::vector<double>>();
    sc.meta.sine_opts.support = so.at("support").get<std::vector<int>>();
    sc.meta.sine_opts.samples = so.at("samples").get<int>();
    sc.meta.sine_opts.seed = so.at("seed").get<std::uint64_t>();
    return sc;
  } catch (const json::exception& e) {
    throw Inconsistent(std::string("scenario json: schema error: ") + e.what());
  }
}

}  // namespace ib
