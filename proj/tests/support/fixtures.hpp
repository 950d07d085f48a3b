#pragma once

#include <string>
#include <vector>

#include "backresp/backresp.hpp"

namespace backresp::testing {

inline Model zoo_model(const zoo::ModelFamily& family) { return build_model(zoo::generate(family)); }

inline Model train_model() { return zoo_model(zoo::Train{1}); }

inline StateId id_of(const Model& m, std::string_view name) { return m.system.find(name).value(); }

inline Coalition states_of(const Model& m, std::initializer_list<std::string_view> names) {
  Coalition c(m.system.num_states());
  for (auto n : names) c.insert(id_of(m, n));
  return c;
}

inline Rational exact_of(const ResponsibilityReport& r, std::string_view name) {
  const auto* p = r.find(name);
  if (p == nullptr || !p->exact) throw std::runtime_error("no exact value for " + std::string(name));
  return *p->exact;
}

inline Rational q(long long num, long long den = 1) { return Rational(num, den); }

}  // namespace backresp::testing
