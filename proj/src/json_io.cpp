#include "segal_quant/json_io.hpp"

#include "segal_quant/errors.hpp"

#include <set>
#include <string>

namespace segal {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where)
{
    if (!obj.is_object()) {
        throw ConfigError(where + " must be an object");
    }
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& item : obj.items()) {
        if (!keys.contains(item.key())) {
            throw ConfigError("unknown key '" + item.key() + "' in " + where);
        }
    }
}

double number(const json& v, const std::string& what)
{
    if (!v.is_number()) {
        throw ConfigError(what + " must be a number");
    }
    return v.get<double>();
}

std::vector<double> numbers(const json& v, const std::string& what)
{
    if (!v.is_array()) {
        throw ConfigError(what + " must be an array of numbers");
    }
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) {
        out.push_back(number(x, what));
    }
    return out;
}

}  // namespace

json spec_to_json(const FrequencySpec& spec)
{
    json doc;
    doc["discrete"] = json::array();
    for (const auto& d : spec.discrete()) {
        doc["discrete"].push_back({{"omega", d.omega}, {"mult", d.multiplicity}});
    }
    if (!spec.continuous().empty()) {
        json nodes = json::array();
        json weights = json::array();
        for (const auto& c : spec.continuous()) {
            nodes.push_back(c.node);
            weights.push_back(c.weight);
        }
        doc["continuous"] = {{"nodes", nodes}, {"weights", weights}};
    }
    return doc;
}

FrequencySpec spec_from_json(const json& doc)
{
    reject_unknown(doc, {"discrete", "continuous"}, "spec");
    std::vector<DiscreteFrequency> discrete;
    if (doc.contains("discrete")) {
        if (!doc["discrete"].is_array()) {
            throw ConfigError("spec.discrete must be an array");
        }
        for (const auto& entry : doc["discrete"]) {
            reject_unknown(entry, {"omega", "mult"}, "spec.discrete entry");
            if (!entry.contains("omega")) {
                throw ConfigError("spec.discrete entry needs 'omega'");
            }
            int mult = 1;
            if (entry.contains("mult")) {
                if (!entry["mult"].is_number_integer()) {
                    throw ConfigError("spec.discrete mult must be an integer");
                }
                mult = entry["mult"].get<int>();
            }
            discrete.push_back({number(entry["omega"], "spec.discrete omega"), mult});
        }
    }
    std::vector<QuadratureNode> continuous;
    if (doc.contains("continuous")) {
        const auto& c = doc["continuous"];
        reject_unknown(c, {"interval", "nodes", "weights"}, "spec.continuous");
        if (c.contains("interval")) {
            if (c.contains("weights")) {
                throw ConfigError("spec.continuous: give either interval + node count or nodes + weights");
            }
            const auto interval = numbers(c["interval"], "spec.continuous.interval");
            if (interval.size() != 2) {
                throw ConfigError("spec.continuous.interval must have two entries");
            }
            if (!c.contains("nodes") || !c["nodes"].is_number_integer()) {
                throw ConfigError("spec.continuous.nodes must be an integer node count with an interval");
            }
            if (interval[0] < 0.0) {
                throw SpecError("nonpositive frequency: continuous interval starts below zero");
            }
            try {
                continuous = gauss_legendre(interval[0], interval[1], c["nodes"].get<int>());
            } catch (const InputError& e) {
                throw ConfigError(std::string("spec.continuous: ") + e.what());
            }
        } else {
            if (!c.contains("nodes") || !c.contains("weights")) {
                throw ConfigError("spec.continuous needs nodes and weights");
            }
            const auto nodes = numbers(c["nodes"], "spec.continuous.nodes");
            const auto weights = numbers(c["weights"], "spec.continuous.weights");
            if (nodes.size() != weights.size()) {
                throw ConfigError("spec.continuous nodes and weights differ in length");
            }
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                continuous.push_back({nodes[i], weights[i]});
            }
        }
    }
    return FrequencySpec(std::move(discrete), std::move(continuous));
}

json matrix_to_json(const Matrix& m)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& doc)
{
    if (!doc.is_array() || doc.empty()) {
        throw ConfigError("matrix must be a nonempty array of rows");
    }
    const auto rows = static_cast<Eigen::Index>(doc.size());
    const auto cols = static_cast<Eigen::Index>(doc[0].is_array() ? doc[0].size() : 0);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto row = numbers(doc[static_cast<std::size_t>(i)], "matrix row");
        if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw ConfigError("matrix rows differ in length");
        }
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = row[static_cast<std::size_t>(j)];
        }
    }
    return m;
}

json vector_to_json(const Vector& v)
{
    return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vector vector_from_json(const json& doc)
{
    const auto values = numbers(doc, "vector");
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json point_to_json(const PhaseSpacePoint& x)
{
    return {{"p", vector_to_json(x.p)}, {"q", vector_to_json(x.q)}};
}

PhaseSpacePoint point_from_json(const json& doc)
{
    reject_unknown(doc, {"p", "q"}, "phase-space point");
    if (!doc.contains("p") || !doc.contains("q")) {
        throw ConfigError("phase-space point needs p and q");
    }
    PhaseSpacePoint x{vector_from_json(doc["p"]), vector_from_json(doc["q"])};
    if (x.p.size() != x.q.size()) {
        throw ConfigError("phase-space point: p and q differ in length");
    }
    return x;
}

}  // namespace segal
