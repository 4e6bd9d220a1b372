#include "cachedof/core/json_io.hpp"

namespace cachedof {

nlohmann::json params_to_json(const SystemParams& params) {
  return {{"n_files", params.n_files()},
          {"n_tx", params.n_tx()},
          {"n_rx", params.n_rx()},
          {"m_tx", to_exact_string(params.m_tx())},
          {"m_rx", to_exact_string(params.m_rx())}};
}

SystemParams params_from_json(const nlohmann::json& doc) {
  return SystemParams(doc.at("n_files").get<int>(), doc.at("n_tx").get<int>(), doc.at("n_rx").get<int>(),
                      parse_rational(doc.at("m_tx").get<std::string>()),
                      parse_rational(doc.at("m_rx").get<std::string>()));
}

}  // namespace cachedof
