#include "bvir/report.hpp"

#include <sstream>

#include "json.hpp"

namespace bvir {

bool Report::passed() const {
  for (const CheckRecord& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string Report::to_json_text() const {
  nlohmann::json j;
  j["suite"] = suite;
  j["passed"] = passed();
  j["environment"] = {{"seed", seed},
                      {"h_step", h_step},
                      {"flow_steps_per_unit", flow_steps_per_unit},
                      {"quad_abs_tol", quad_abs_tol},
                      {"threads", threads}};
  j["wall_ms"] = wall_ms;
  nlohmann::json arr = nlohmann::json::array();
  for (const CheckRecord& c : checks) {
    nlohmann::json rec;
    rec["id"] = c.id;
    rec["inputs_digest"] = c.inputs_digest;
    rec["residual"] = c.residual;
    rec["tolerance"] = c.tolerance;
    rec["pass"] = c.pass;
    if (!c.details.empty()) rec["details"] = c.details;
    arr.push_back(rec);
  }
  j["checks"] = arr;
  return j.dump(2) + "\n";
}

std::string Report::to_csv() const {
  std::ostringstream out;
  out << "id,inputs_digest,residual,tolerance,pass\n";
  out.precision(17);
  for (const CheckRecord& c : checks) {
    out << c.id << ',' << c.inputs_digest << ',' << c.residual << ',' << c.tolerance
        << ',' << (c.pass ? "1" : "0") << '\n';
  }
  return out.str();
}

std::string digest(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

}  // namespace bvir
