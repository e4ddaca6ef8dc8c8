// Copyright 2026 The minimaxpi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "minimaxpi/problem_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "minimaxpi/errors.hpp"

namespace minimaxpi {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string at(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

std::string dot(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(dot(path, key), "missing field");
  return *it;
}

const json* optional_field(const json& obj, const std::string& key) {
  const auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ValidationError(path, "expected a number");
  return j.get<double>();
}

std::size_t index(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ValidationError(path, "expected a nonnegative integer");
  }
  return j.get<std::size_t>();
}

const json& array(const json& j, const std::string& path) {
  if (!j.is_array()) throw ValidationError(path, "expected an array");
  return j;
}

const json& object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  return j;
}

std::vector<double> numbers(const json& j, const std::string& path) {
  std::vector<double> out;
  const json& arr = array(j, path);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(number(arr[i], at(path, i)));
  return out;
}

std::vector<std::size_t> indices(const json& j, const std::string& path) {
  std::vector<std::size_t> out;
  const json& arr = array(j, path);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(index(arr[i], at(path, i)));
  return out;
}

WeightedSpace space_from(const json& doc, const char* key, std::size_t size) {
  const json* w = optional_field(doc, key);
  if (w == nullptr) return WeightedSpace(size);
  std::vector<double> weights = numbers(*w, key);
  if (weights.size() != size) throw ValidationError(key, "expected one weight per state");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0)) throw ValidationError(at(key, i), "weight must be positive");
  }
  return WeightedSpace(std::move(weights));
}

DiscountedMarkovGame parse_markov(const json& doc, bool terminating) {
  DiscountedMarkovGame game;
  game.terminating = terminating;
  game.alpha = number(field(doc, "alpha", ""), "alpha");
  const json& states = array(field(doc, "states", ""), "states");
  const std::size_t nx = states.size();
  if (nx == 0) throw ValidationError("states", "at least one state is required");
  if (const json* w = optional_field(doc, "weights")) game.weights = numbers(*w, "weights");
  Eigen::Index n = -1;
  Eigen::Index m = -1;
  for (std::size_t x = 0; x < nx; ++x) {
    const std::string sp = at("states", x);
    const json& st = object(states[x], sp);
    const std::string pp = dot(sp, "payoff");
    const json& rows = array(field(st, "payoff", sp), pp);
    if (rows.empty()) throw ValidationError(pp, "empty payoff matrix");
    const json& first = array(rows[0], at(pp, 0));
    if (n < 0) {
      n = static_cast<Eigen::Index>(rows.size());
      m = static_cast<Eigen::Index>(first.size());
      if (m == 0) throw ValidationError(pp, "empty payoff matrix");
    }
    if (static_cast<Eigen::Index>(rows.size()) != n) {
      throw ValidationError(pp, "all payoff matrices must share one shape");
    }
    PayoffMatrix a(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto row = numbers(rows[static_cast<std::size_t>(i)], at(pp, static_cast<std::size_t>(i)));
      if (static_cast<Eigen::Index>(row.size()) != m) {
        throw ValidationError(at(pp, static_cast<std::size_t>(i)),
                              "all payoff matrices must share one shape");
      }
      for (Eigen::Index j = 0; j < m; ++j) a(i, j) = row[static_cast<std::size_t>(j)];
    }
    game.payoff.push_back(std::move(a));

    const std::string tp = dot(sp, "transitions");
    const json& trans = array(field(st, "transitions", sp), tp);
    if (static_cast<Eigen::Index>(trans.size()) != n) {
      throw ValidationError(tp, "expected one entry per row action");
    }
    std::vector<PayoffMatrix> q(nx, PayoffMatrix::Zero(n, m));
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::string ip = at(tp, static_cast<std::size_t>(i));
      const json& per_j = array(trans[static_cast<std::size_t>(i)], ip);
      if (static_cast<Eigen::Index>(per_j.size()) != m) {
        throw ValidationError(ip, "expected one entry per column action");
      }
      for (Eigen::Index j = 0; j < m; ++j) {
        const std::string jp = at(ip, static_cast<std::size_t>(j));
        const auto row = numbers(per_j[static_cast<std::size_t>(j)], jp);
        if (row.size() != nx) throw ValidationError(jp, "expected one probability per state");
        for (std::size_t y = 0; y < nx; ++y) q[y](i, j) = row[y];
      }
    }
    game.transition.push_back(std::move(q));
  }
  game.validate();
  return game;
}

std::vector<std::vector<SeparatedMinimaxModel::Move>> parse_moves(const json& doc,
                                                                  const char* key) {
  std::vector<std::vector<SeparatedMinimaxModel::Move>> out;
  const json& per_state = array(field(doc, key, ""), key);
  for (std::size_t x = 0; x < per_state.size(); ++x) {
    const std::string xp = at(key, x);
    const json& acts = array(per_state[x], xp);
    auto& moves = out.emplace_back();
    for (std::size_t a = 0; a < acts.size(); ++a) {
      const std::string ap = at(xp, a);
      const json& mv = object(acts[a], ap);
      moves.push_back({index(field(mv, "next", ap), dot(ap, "next")),
                       number(field(mv, "cost", ap), dot(ap, "cost"))});
    }
  }
  return out;
}

SeparatedMinimaxModel parse_separated(const json& doc) {
  SeparatedMinimaxModel model;
  model.alpha = number(field(doc, "alpha", ""), "alpha");
  model.min_moves = parse_moves(doc, "min_actions");
  model.max_moves = parse_moves(doc, "max_actions");
  model.space1 = space_from(doc, "weights1", model.min_moves.size());
  model.space2 = space_from(doc, "weights2", model.max_moves.size());
  model.validate();
  return model;
}

MinimaxControlModel parse_control(const json& doc) {
  MinimaxControlModel model;
  model.alpha = number(field(doc, "alpha", ""), "alpha");
  const json& states = array(field(doc, "states", ""), "states");
  for (std::size_t x = 0; x < states.size(); ++x) {
    const std::string xp = at("states", x);
    const std::string cp = dot(xp, "controls");
    const json& controls = array(field(object(states[x], xp), "controls", xp), cp);
    auto& per_u = model.transitions.emplace_back();
    for (std::size_t u = 0; u < controls.size(); ++u) {
      const std::string up = at(cp, u);
      const json& responses = array(controls[u], up);
      auto& per_v = per_u.emplace_back();
      for (std::size_t v = 0; v < responses.size(); ++v) {
        const std::string vp = at(up, v);
        const json& r = object(responses[v], vp);
        auto& outcomes = per_v.emplace_back();
        if (const json* list = optional_field(r, "outcomes")) {
          const std::string op = dot(vp, "outcomes");
          array(*list, op);
          for (std::size_t k = 0; k < list->size(); ++k) {
            const std::string kp = at(op, k);
            const json& o = object((*list)[k], kp);
            outcomes.push_back({number(field(o, "probability", kp), dot(kp, "probability")),
                                index(field(o, "next", kp), dot(kp, "next")),
                                number(field(o, "cost", kp), dot(kp, "cost"))});
          }
        } else {
          outcomes.push_back({1.0, index(field(r, "next", vp), dot(vp, "next")),
                              number(field(r, "cost", vp), dot(vp, "cost"))});
        }
      }
    }
  }
  model.space = space_from(doc, "weights", model.transitions.size());
  model.validate();
  return model;
}

std::vector<std::vector<double>> parse_phi(const json& j, const std::string& path) {
  std::vector<std::vector<double>> out;
  const json& rows = array(j, path);
  for (std::size_t x = 0; x < rows.size(); ++x) {
    if (rows[x].is_null()) {
      out.emplace_back();
    } else {
      out.push_back(numbers(rows[x], at(path, x)));
    }
  }
  return out;
}

AggregationSpec parse_aggregation(const json& j) {
  const std::string base = "aggregation";
  object(j, base);
  AggregationSpec spec;
  spec.reps.reps1 = indices(field(j, "reps1", base), dot(base, "reps1"));
  spec.reps.reps2 = indices(field(j, "reps2", base), dot(base, "reps2"));
  const json* phi1 = optional_field(j, "phi1");
  const json* phi2 = optional_field(j, "phi2");
  if ((phi1 == nullptr) != (phi2 == nullptr)) {
    throw ValidationError(base, "phi1 and phi2 must be given together");
  }
  if (phi1 != nullptr) {
    spec.phi = AggregationProbabilities{parse_phi(*phi1, dot(base, "phi1")),
                                        parse_phi(*phi2, dot(base, "phi2"))};
  }
  return spec;
}

ProblemKind parse_kind(const json& j) {
  if (!j.is_string()) throw ValidationError("kind", "expected a string");
  const auto s = j.get<std::string>();
  if (s == "discounted_markov_game") return ProblemKind::kDiscountedMarkovGame;
  if (s == "terminating_markov_game") return ProblemKind::kTerminatingMarkovGame;
  if (s == "separated_model") return ProblemKind::kSeparatedModel;
  if (s == "minimax_control") return ProblemKind::kMinimaxControl;
  throw ValidationError("kind", "unknown problem kind '" + s + "'");
}

ordered_json matrix_json(const PayoffMatrix& a) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json weights_json(const WeightedSpace& space) { return space.weights(); }

ordered_json moves_json(const std::vector<std::vector<SeparatedMinimaxModel::Move>>& moves) {
  ordered_json out = ordered_json::array();
  for (const auto& per_state : moves) {
    ordered_json acts = ordered_json::array();
    for (const auto& mv : per_state) acts.push_back({{"next", mv.next}, {"cost", mv.cost}});
    out.push_back(std::move(acts));
  }
  return out;
}

}  // namespace

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kDiscountedMarkovGame:
      return "discounted_markov_game";
    case ProblemKind::kTerminatingMarkovGame:
      return "terminating_markov_game";
    case ProblemKind::kSeparatedModel:
      return "separated_model";
    case ProblemKind::kMinimaxControl:
      return "minimax_control";
  }
  return "unknown";
}

ProblemFile parse_problem(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed problem file: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("problem file must hold a JSON object");
  const json& version = field(doc, "format_version", "");
  if (!version.is_number_integer() || version.get<int>() != ProblemFile::kFormatVersion) {
    throw ParseError("unsupported format_version (expected " +
                     std::to_string(ProblemFile::kFormatVersion) + ")");
  }
  ProblemFile out;
  out.kind = parse_kind(field(doc, "kind", ""));
  switch (out.kind) {
    case ProblemKind::kDiscountedMarkovGame:
      out.model = parse_markov(doc, false);
      break;
    case ProblemKind::kTerminatingMarkovGame:
      out.model = parse_markov(doc, true);
      break;
    case ProblemKind::kSeparatedModel:
      out.model = parse_separated(doc);
      break;
    case ProblemKind::kMinimaxControl:
      out.model = parse_control(doc);
      break;
  }
  if (const json* b = optional_field(doc, "beta")) out.beta = number(*b, "beta");
  if (const json* agg = optional_field(doc, "aggregation")) {
    out.aggregation = parse_aggregation(*agg);
  }
  return out;
}

ProblemFile load_problem(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open problem file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

std::string dump_problem(const ProblemFile& problem) {
  ordered_json doc;
  doc["format_version"] = ProblemFile::kFormatVersion;
  doc["kind"] = to_string(problem.kind);
  std::visit(
      [&](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        doc["alpha"] = model.alpha;
        if constexpr (std::is_same_v<T, DiscountedMarkovGame>) {
          if (!model.weights.empty()) doc["weights"] = model.weights;
          ordered_json states = ordered_json::array();
          for (std::size_t x = 0; x < model.states(); ++x) {
            ordered_json trans = ordered_json::array();
            for (Eigen::Index i = 0; i < model.rows(); ++i) {
              ordered_json per_j = ordered_json::array();
              for (Eigen::Index j = 0; j < model.cols(); ++j) {
                ordered_json row = ordered_json::array();
                for (std::size_t y = 0; y < model.states(); ++y) {
                  row.push_back(model.transition[x][y](i, j));
                }
                per_j.push_back(std::move(row));
              }
              trans.push_back(std::move(per_j));
            }
            ordered_json st;
            st["payoff"] = matrix_json(model.payoff[x]);
            st["transitions"] = std::move(trans);
            states.push_back(std::move(st));
          }
          doc["states"] = std::move(states);
        } else if constexpr (std::is_same_v<T, SeparatedMinimaxModel>) {
          if (!model.space1.unit_weights()) doc["weights1"] = weights_json(model.space1);
          if (!model.space2.unit_weights()) doc["weights2"] = weights_json(model.space2);
          doc["min_actions"] = moves_json(model.min_moves);
          doc["max_actions"] = moves_json(model.max_moves);
        } else {
          if (!model.space.unit_weights()) doc["weights"] = weights_json(model.space);
          ordered_json states = ordered_json::array();
          for (const auto& per_u : model.transitions) {
            ordered_json controls = ordered_json::array();
            for (const auto& per_v : per_u) {
              ordered_json responses = ordered_json::array();
              for (const auto& outcomes : per_v) {
                ordered_json list = ordered_json::array();
                for (const auto& o : outcomes) {
                  list.push_back(
                      {{"probability", o.probability}, {"next", o.next}, {"cost", o.cost}});
                }
                responses.push_back({{"outcomes", std::move(list)}});
              }
              controls.push_back(std::move(responses));
            }
            states.push_back({{"controls", std::move(controls)}});
          }
          doc["states"] = std::move(states);
        }
      },
      problem.model);
  if (problem.beta) doc["beta"] = *problem.beta;
  if (problem.aggregation) {
    ordered_json agg;
    agg["reps1"] = problem.aggregation->reps.reps1;
    agg["reps2"] = problem.aggregation->reps.reps2;
    if (problem.aggregation->phi) {
      auto rows = [](const std::vector<std::vector<double>>& phi) {
        ordered_json out = ordered_json::array();
        for (const auto& r : phi) out.push_back(r.empty() ? ordered_json(nullptr) : ordered_json(r));
        return out;
      };
      agg["phi1"] = rows(problem.aggregation->phi->phi1);
      agg["phi2"] = rows(problem.aggregation->phi->phi2);
    }
    doc["aggregation"] = std::move(agg);
  }
  return doc.dump(2) + "\n";
}

void save_problem(const std::filesystem::path& path, const ProblemFile& problem) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write problem file " + path.string());
  out << dump_problem(problem);
  if (!out) throw Error("failed writing problem file " + path.string());
}

}  // namespace minimaxpi
