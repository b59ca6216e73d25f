#include "cforge/io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace cforge::io {

namespace {

const json& field(const json& doc, const char* key) {
  if (!doc.is_object()) throw ParseError("expected a JSON object");
  auto it = doc.find(key);
  if (it == doc.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

double as_double(const json& v, const char* what) {
  if (!v.is_number()) throw ParseError(std::string(what) + ": expected a number");
  return v.get<double>();
}

std::vector<double> as_vector(const json& v, const char* what) {
  if (!v.is_array()) throw ParseError(std::string(what) + ": expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(as_double(x, what));
  return out;
}

std::vector<std::vector<double>> as_matrix(const json& v, const char* what) {
  if (!v.is_array()) throw ParseError(std::string(what) + ": expected an array of arrays");
  std::vector<std::vector<double>> out;
  for (const auto& row : v) out.push_back(as_vector(row, what));
  return out;
}

std::string kind_of(const json& doc) {
  const json& k = field(doc, "kind");
  if (!k.is_string()) throw ParseError("'kind' must be a string");
  return k.get<std::string>();
}

SparseContract sparse_from_json(const json& doc) {
  const double base = doc.contains("base") ? as_double(doc.at("base"), "base") : 0.0;
  std::map<Outcome, double> pay;
  if (doc.contains("payments")) {
    const json& list = doc.at("payments");
    if (!list.is_array()) throw ParseError("payments: expected an array");
    for (const auto& entry : list) {
      const Outcome s = outcome_from_json(field(entry, "outcome"));
      if (pay.count(s)) throw ParseError("payments: duplicate outcome");
      pay[s] = as_double(field(entry, "pay"), "pay");
    }
  }
  return make_sparse(base, std::move(pay));
}

json sparse_to_json(const SparseContract& c) {
  json pays = json::array();
  for (const auto& [s, p] : c.payments) pays.push_back({{"outcome", outcome_to_json(s)}, {"pay", p}});
  return {{"kind", "sparse"}, {"base", c.base}, {"payments", std::move(pays)}};
}

}  // namespace

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

json read_json(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  return parse_json(text);
}

json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

json to_json(const ProductSetting& s) {
  return {{"kind", "product"}, {"costs", s.costs()}, {"rewards", s.rewards()}, {"probs", s.probs()}};
}

json to_json(const ExplicitSetting& s) {
  return {{"kind", "explicit"}, {"costs", s.costs()}, {"outcome_rewards", s.outcome_rewards()},
          {"dist", s.dist()}};
}

json to_json(const Setting& setting) {
  return std::visit([](const auto& s) { return to_json(s); }, setting);
}

Setting setting_from_json(const json& doc, bool allow_no_free_action) {
  const std::string kind = kind_of(doc);
  Setting out;
  try {
    if (kind == "product") {
      out = ProductSetting(as_vector(field(doc, "costs"), "costs"), as_vector(field(doc, "rewards"), "rewards"),
                           as_matrix(field(doc, "probs"), "probs"));
    } else if (kind == "explicit") {
      out = ExplicitSetting(as_vector(field(doc, "costs"), "costs"),
                            as_vector(field(doc, "outcome_rewards"), "outcome_rewards"),
                            as_matrix(field(doc, "dist"), "dist"));
    } else {
      throw ParseError("unknown setting kind '" + kind + "'");
    }
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
  if (!allow_no_free_action && costs(out).front() != 0.0) {
    throw ArgumentError("the first action must have cost 0 (use --allow-no-free-action to override)");
  }
  return out;
}

json outcome_to_json(Outcome s) { return s.items(); }

Outcome outcome_from_json(const json& doc) {
  if (!doc.is_array()) throw ParseError("outcome: expected an array of item indices");
  std::vector<std::size_t> items;
  for (const auto& v : doc) {
    if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 63) {
      throw ParseError("outcome: item indices must be integers in [0,63]");
    }
    items.push_back(v.get<std::size_t>());
  }
  return Outcome::from_items(items);
}

json to_json(const Contract& contract) {
  return std::visit(
      [](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, SparseContract>) {
          return sparse_to_json(c);
        } else if constexpr (std::is_same_v<T, LinearContract>) {
          return {{"kind", "linear"}, {"alpha", c.alpha}};
        } else if constexpr (std::is_same_v<T, SeparableContract>) {
          return {{"kind", "separable"}, {"item_payments", c.item_payments}};
        } else {
          json s = sparse_to_json(c.sparse);
          s.erase("kind");
          return {{"kind", "mixed"}, {"sparse", std::move(s)}, {"item_payments", c.item_payments},
                  {"alpha", c.alpha}};
        }
      },
      contract);
}

Contract contract_from_json(const json& doc) {
  const std::string kind = kind_of(doc);
  auto nonneg = [](double x, const char* what) {
    if (!(std::isfinite(x) && x >= 0.0)) throw ArgumentError(std::string(what) + " must be finite and >= 0");
    return x;
  };
  if (kind == "sparse") return sparse_from_json(doc);
  if (kind == "linear") {
    const double alpha = nonneg(as_double(field(doc, "alpha"), "alpha"), "alpha");
    if (alpha > 1.0) throw ArgumentError("alpha must lie in [0,1]");
    return LinearContract{alpha};
  }
  if (kind == "separable") {
    auto pay = as_vector(field(doc, "item_payments"), "item_payments");
    for (double p : pay) nonneg(p, "item payments");
    return SeparableContract{std::move(pay)};
  }
  if (kind == "mixed") {
    MixedContract m;
    if (doc.contains("sparse")) m.sparse = sparse_from_json(doc.at("sparse"));
    if (doc.contains("item_payments")) m.item_payments = as_vector(doc.at("item_payments"), "item_payments");
    for (double p : m.item_payments) nonneg(p, "item payments");
    if (doc.contains("alpha")) m.alpha = nonneg(as_double(doc.at("alpha"), "alpha"), "alpha");
    return m;
  }
  throw ParseError("unknown contract kind '" + kind + "'");
}

json to_json(const SeparationInstance& inst) {
  return {{"weights", inst.weights}, {"mixtures", inst.mixtures}, {"reference", inst.reference}};
}

SeparationInstance separation_from_json(const json& doc) {
  SeparationInstance inst;
  inst.weights = as_vector(field(doc, "weights"), "weights");
  inst.mixtures = as_matrix(field(doc, "mixtures"), "mixtures");
  inst.reference = as_vector(field(doc, "reference"), "reference");
  inst.validate();
  return inst;
}

}  // namespace cforge::io
