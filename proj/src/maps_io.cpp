#include "arithdyn/maps.hpp"

#include <json.hpp>

#include <ostream>

namespace arithdyn::maps {

TriangularMap map_from_json(std::string_view text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw std::invalid_argument(std::string("map document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("dimension") || !doc.contains("components"))
        throw std::invalid_argument("map document needs \"dimension\" and \"components\"");
    if (!doc["dimension"].is_number_unsigned() || !doc["components"].is_array())
        throw std::invalid_argument("map document: \"dimension\" must be a positive integer and "
                                    "\"components\" an array of strings");

    const auto n = doc["dimension"].get<std::size_t>();
    const auto &items = doc["components"];
    if (items.size() != n)
        throw std::invalid_argument("map document declares dimension " + std::to_string(n) + " but lists " +
                                    std::to_string(items.size()) + " components");
    std::vector<Polynomial> comps;
    for (const auto &item : items) {
        if (!item.is_string())
            throw std::invalid_argument("map components must be polynomial strings");
        comps.push_back(qpoly::parse_polynomial(item.get<std::string>(), n));
    }
    return TriangularMap::validate(std::move(comps));
}

std::string map_to_json(const TriangularMap &f)
{
    nlohmann::json doc;
    doc["dimension"] = f.dimension();
    doc["components"] = nlohmann::json::array();
    for (const auto &c : f.components())
        doc["components"].push_back(qpoly::to_string(c));
    return doc.dump();
}

void write_orbit_csv(std::ostream &os, const Orbit &orbit)
{
    os << "n";
    for (std::size_t i = 1; i <= orbit.map.dimension(); ++i)
        os << ",x" << i << "_num,x" << i << "_den";
    os << '\n';
    for (std::size_t n = 0; n < orbit.points.size(); ++n) {
        os << n;
        for (const auto &x : orbit.points[n])
            os << ',' << x.get_num().get_str() << ',' << x.get_den().get_str();
        os << '\n';
    }
}

}  // namespace arithdyn::maps
