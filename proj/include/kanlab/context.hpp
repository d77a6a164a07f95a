#pragma once

#include <functional>
#include <string>
#include <utility>

#include "errors.hpp"
#include "presheaf.hpp"
#include "search.hpp"

namespace kanlab {

/// A class of maps playing the role of cofibrations. Only membership is
/// decidable here; closure under pullback is checked on the instances the
/// workbench computes.
struct CofibrationClass {
  std::string name;
  std::function<bool(const PresheafMap&)> accepts;

  static CofibrationClass monomorphisms() { return {"monomorphisms", [](const PresheafMap& m) { return is_mono(m); }}; }
  static CofibrationClass all_maps() { return {"all", [](const PresheafMap&) { return true; }}; }
};

/// The ambient category of presheaves over a base, with its interval object
/// and cofibration class.
class PresheafContext {
public:
  PresheafContext(BasePtr base, Presheaf interval, CofibrationClass cofibrations = CofibrationClass::monomorphisms(),
                  SearchBudget budget = {})
      : base_(std::move(base)), interval_(std::move(interval)), cofibrations_(std::move(cofibrations)),
        budget_(budget) {
    if (!same_base(base_, interval_.base_ptr())) throw ContractError("interval lives over a different base");
    if (auto r = validate_presheaf(interval_); !r.ok())
      throw ContractError("interval is not a presheaf: " + r.violations.front());
  }

  /// Context whose interval is the representable on the named object.
  static PresheafContext with_representable_interval(BasePtr base, const std::string& object,
                                                     CofibrationClass cof = CofibrationClass::monomorphisms(),
                                                     SearchBudget budget = {}) {
    auto interval = yoneda(base, object);
    return PresheafContext(std::move(base), std::move(interval), std::move(cof), budget);
  }

  const BasePtr& base() const { return base_; }
  const Presheaf& interval() const { return interval_; }
  const CofibrationClass& cofibrations() const { return cofibrations_; }
  SearchBudget budget() const { return budget_; }

  bool is_cofibration(const PresheafMap& m) const { return cofibrations_.accepts(m); }

  /// Maps out of the initial presheaf must be cofibrations.
  bool check_h3(const Presheaf& x) const { return is_cofibration(from_initial(x)); }

  /// A pullback of an accepted cofibration must be accepted.
  void require_h2(const PresheafMap& pulled_back, const std::string& what) const {
    if (!is_cofibration(pulled_back))
      throw ConstructionError("cofibration class '" + cofibrations_.name + "' is not closed under pullback: " + what);
  }

private:
  BasePtr base_;
  Presheaf interval_;
  CofibrationClass cofibrations_;
  SearchBudget budget_;
};

} // namespace kanlab
