#ifndef PLATES_JSON_IO_HPP
#define PLATES_JSON_IO_HPP

#include <json.hpp>
#include <string>

#include "plates/tensor.hpp"

namespace plates {

using nlohmann::json;

// {"voigt": 6x6 row-major array}, packing (11,22,33,23,13,12) with sqrt(2)
// shear weights. The loader re-validates symmetry and definiteness.
json tensor_to_json(const SymTensor4& t);
SymTensor4 tensor_from_json(const json& j);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

}  // namespace plates

#endif
