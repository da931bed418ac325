#include "jsqlab/accept.hpp"

namespace jsqlab {

nlohmann::json AcceptanceReport::to_json() const { return {}; }

AcceptanceReport run_acceptance(const AcceptanceOptions&, std::ostream&) { return {}; }

}  // namespace jsqlab
