#pragma once

// JSON renderings of solver results.

#include <string>

#include "json.hpp"

#include "mpwmi/certificate.hpp"
#include "mpwmi/piecewise.hpp"
#include "mpwmi/rational.hpp"

namespace mpwmi::io {

inline nlohmann::json rational_json(const Rational& r) { return r.get_str(); }

inline nlohmann::json piecewise_json(const Piecewise& f, const std::string& var) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : f.pieces())
    out.push_back({{"lo", p.lo.get_str()}, {"hi", p.hi.get_str()}, {"poly", p.poly.to_string(var)}});
  return out;
}

inline nlohmann::json certificate_json(const PieceBoundCertificate& c) {
  nlohmann::json states = nlohmann::json::array();
  for (const auto& v : c.state_vectors) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& x : v) row.push_back(x.get_str());
    states.push_back(std::move(row));
  }
  return {{"ok", c.ok},
          {"c", c.c},
          {"d", c.d},
          {"n", c.n},
          {"s", c.s},
          {"nodes", c.nodes},
          {"feeds", c.feeds},
          {"state_vectors", states},
          {"nilpotent", c.nilpotent},
          {"measured_pieces", c.measured_pieces.get_str()},
          {"total_bound", c.total_bound.get_str()},
          {"envelope", c.envelope.get_str()},
          {"all_message_pieces", c.all_message_pieces}};
}

}  // namespace mpwmi::io
