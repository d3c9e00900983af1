#include "plates/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace plates {

json tensor_to_json(const SymTensor4& t)
{
    Eigen::Matrix<double, 6, 6> m = t.voigt_matrix();
    json rows = json::array();
    for (int i = 0; i < 6; ++i) {
        json row = json::array();
        for (int j = 0; j < 6; ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return json{{"voigt", rows}};
}

SymTensor4 tensor_from_json(const json& j)
{
    if (!j.contains("voigt")) throw std::runtime_error("tensor JSON: missing \"voigt\" key");
    const json& rows = j.at("voigt");
    if (!rows.is_array() || rows.size() != 6)
        throw std::runtime_error("tensor JSON: \"voigt\" must be a 6x6 array");
    Eigen::Matrix<double, 6, 6> m;
    for (int i = 0; i < 6; ++i) {
        const json& row = rows.at(i);
        if (!row.is_array() || row.size() != 6)
            throw std::runtime_error("tensor JSON: \"voigt\" must be a 6x6 array");
        for (int k = 0; k < 6; ++k) m(i, k) = row.at(k).get<double>();
    }
    SymTensor4 t = SymTensor4::from_voigt_matrix(m);
    TensorReport r = validate_tensor(t);
    if (!r.valid())
        throw std::runtime_error("tensor JSON: matrix fails symmetry/definiteness validation");
    return t;
}

json load_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void save_json_file(const std::string& path, const json& j)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace plates
