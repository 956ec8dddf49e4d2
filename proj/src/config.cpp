#include <mcn/config.hpp>

#include <mcn/error.hpp>

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace mcn {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what)
{
    throw ConfigError("config " + (where.empty() ? std::string("/") : where) + ": " + what);
}

const json& field(const json& obj, const std::string& where, const char* key)
{
    if (!obj.is_object()) fail(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
    return *it;
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed)
{
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || key == a;
        if (!known) fail(where, "unknown field '" + key + "'");
    }
}

double number(const json& j, const std::string& where)
{
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

std::string text(const json& j, const std::string& where)
{
    if (!j.is_string()) fail(where, "expected a string");
    return j.get<std::string>();
}

Eigen::MatrixXd matrix(const json& j, const std::string& where)
{
    if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array of rows");
    const auto rows = j.size();
    std::size_t cols = 0;
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].empty()) fail(where + "/" + std::to_string(r), "expected a non-empty row");
        if (r == 0) cols = j[r].size();
        if (j[r].size() != cols) fail(where + "/" + std::to_string(r), "dimension mismatch: ragged row");
    }
    Eigen::MatrixXd M(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                number(j[r][c], where + "/" + std::to_string(r) + "/" + std::to_string(c));
    return M;
}

Edge edge(const json& j, const std::string& where)
{
    if (!j.is_array() || j.size() != 2) fail(where, "expected an edge [from, to]");
    return {text(j[0], where + "/0"), text(j[1], where + "/1")};
}

RadioGraph radio_graph(const json& j, const std::string& where, Side side)
{
    const char* terminals_key = side == Side::Controllability ? "actuators" : "sensors";
    only_keys(j, where, {"nodes", "edges", "controller", terminals_key});
    RadioGraph g;
    g.side = side;
    const auto& nodes = field(j, where, "nodes");
    if (!nodes.is_array()) fail(where + "/nodes", "expected an array");
    for (std::size_t k = 0; k < nodes.size(); ++k) g.nodes.push_back(text(nodes[k], where + "/nodes/" + std::to_string(k)));
    const auto& edges = field(j, where, "edges");
    if (!edges.is_array()) fail(where + "/edges", "expected an array");
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto at = where + "/edges/" + std::to_string(k);
        auto e = edge(edges[k], at);
        if (std::find(g.nodes.begin(), g.nodes.end(), e.from) == g.nodes.end()) fail(at, "unknown node '" + e.from + "'");
        if (std::find(g.nodes.begin(), g.nodes.end(), e.to) == g.nodes.end()) fail(at, "unknown node '" + e.to + "'");
        g.edges.push_back(std::move(e));
    }
    g.controller = text(field(j, where, "controller"), where + "/controller");
    const auto& terms = field(j, where, terminals_key);
    if (!terms.is_array()) fail(where + "/" + terminals_key, "expected an array");
    for (std::size_t k = 0; k < terms.size(); ++k)
        g.terminals.push_back(text(terms[k], where + "/" + terminals_key + "/" + std::to_string(k)));
    return g;
}

std::vector<ComponentSchedule> schedules(const json& j, const std::string& where, const RadioGraph& g, int frame_length)
{
    if (!j.is_array()) fail(where, "expected an array of per-component schedules");
    std::vector<ComponentSchedule> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto at = where + "/" + std::to_string(i);
        if (!j[i].is_object()) fail(at, "expected an object mapping slot -> edge list");
        ComponentSchedule sched;
        sched.frame_length = frame_length;
        std::set<Edge> seen;
        for (const auto& [key, edges] : j[i].items()) {
            const auto slot_at = at + "/" + key;
            int slot = 0;
            try {
                std::size_t used = 0;
                slot = std::stoi(key, &used);
                if (used != key.size()) throw std::invalid_argument(key);
            } catch (const std::exception&) {
                fail(slot_at, "slot key must be an integer");
            }
            if (slot < 1 || slot > frame_length) fail(slot_at, "slot outside 1.." + std::to_string(frame_length));
            if (!edges.is_array()) fail(slot_at, "expected an edge list");
            auto& list = sched.slots[slot];
            for (std::size_t k = 0; k < edges.size(); ++k) {
                const auto e_at = slot_at + "/" + std::to_string(k);
                auto e = edge(edges[k], e_at);
                if (!g.has_node(e.from)) fail(e_at, "unknown node '" + e.from + "'");
                if (!g.has_node(e.to)) fail(e_at, "unknown node '" + e.to + "'");
                if (!seen.insert(e).second) fail(e_at, "link " + to_string(e) + " scheduled twice");
                list.push_back(std::move(e));
            }
        }
        out.push_back(std::move(sched));
    }
    return out;
}

std::vector<ComponentWeights> weights(const json& j, const std::string& where, const RadioGraph& g)
{
    if (!j.is_array()) fail(where, "expected an array of per-component weight lists");
    std::vector<ComponentWeights> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto at = where + "/" + std::to_string(i);
        if (!j[i].is_array()) fail(at, "expected a list of [from, to, weight]");
        ComponentWeights w;
        for (std::size_t k = 0; k < j[i].size(); ++k) {
            const auto e_at = at + "/" + std::to_string(k);
            const auto& item = j[i][k];
            if (!item.is_array() || item.size() != 3) fail(e_at, "expected [from, to, weight]");
            Edge e{text(item[0], e_at + "/0"), text(item[1], e_at + "/1")};
            if (!g.has_node(e.from)) fail(e_at, "unknown node '" + e.from + "'");
            if (!g.has_node(e.to)) fail(e_at, "unknown node '" + e.to + "'");
            if (!w.weights.emplace(e, number(item[2], e_at + "/2")).second)
                fail(e_at, "weight for " + to_string(e) + " given twice");
        }
        out.push_back(std::move(w));
    }
    return out;
}

std::string locate(std::string_view doc, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < byte && k < doc.size(); ++k) {
        if (doc[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

json edge_json(const Edge& e) { return json::array({e.from, e.to}); }

json matrix_json(const Eigen::MatrixXd& M)
{
    json rows = json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

json graph_json(const RadioGraph& g)
{
    json j;
    j["nodes"] = g.nodes;
    j["edges"] = json::array();
    for (const auto& e : g.edges) j["edges"].push_back(edge_json(e));
    j["controller"] = g.controller;
    j[g.side == Side::Controllability ? "actuators" : "sensors"] = g.terminals;
    return j;
}

json schedules_json(const std::vector<ComponentSchedule>& s)
{
    json out = json::array();
    for (const auto& sched : s) {
        json slots = json::object();
        for (const auto& [slot, edges] : sched.slots) {
            json list = json::array();
            for (const auto& e : edges) list.push_back(edge_json(e));
            slots[std::to_string(slot)] = std::move(list);
        }
        out.push_back(std::move(slots));
    }
    return out;
}

json weights_json(const std::vector<ComponentWeights>& w)
{
    json out = json::array();
    for (const auto& cw : w) {
        json list = json::array();
        for (const auto& [e, value] : cw.weights) list.push_back(json::array({e.from, e.to, value}));
        out.push_back(std::move(list));
    }
    return out;
}

}  // namespace

Mcn load_mcn(std::string_view document)
{
    json root;
    try {
        root = json::parse(document.begin(), document.end());
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error at " + locate(document, e.byte) + ": " + e.what());
    }
    if (!root.is_object()) fail("", "top level must be an object");
    only_keys(root, "", {"plant", "delta", "frame_length", "controllability", "observability", "schedules_r",
                         "schedules_o", "weights_r", "weights_o", "fault_candidates"});

    Mcn mcn;
    const auto& plant = field(root, "", "plant");
    only_keys(plant, "/plant", {"kind", "A", "B", "C"});
    const auto kind = text(field(plant, "/plant", "kind"), "/plant/kind");
    if (kind == "continuous")
        mcn.plant.kind = PlantKind::Continuous;
    else if (kind == "discrete")
        mcn.plant.kind = PlantKind::Discrete;
    else
        fail("/plant/kind", "expected \"continuous\" or \"discrete\"");
    mcn.plant.A = matrix(field(plant, "/plant", "A"), "/plant/A");
    mcn.plant.B = matrix(field(plant, "/plant", "B"), "/plant/B");
    mcn.plant.C = matrix(field(plant, "/plant", "C"), "/plant/C");

    mcn.delta = number(field(root, "", "delta"), "/delta");
    const auto& frame = field(root, "", "frame_length");
    if (!frame.is_number_integer() || frame.get<long long>() < 1) fail("/frame_length", "expected a positive integer");
    mcn.frame_length = frame.get<int>();

    mcn.g_r = radio_graph(field(root, "", "controllability"), "/controllability", Side::Controllability);
    mcn.g_o = radio_graph(field(root, "", "observability"), "/observability", Side::Observability);
    mcn.schedules_r = schedules(field(root, "", "schedules_r"), "/schedules_r", mcn.g_r, mcn.frame_length);
    mcn.schedules_o = schedules(field(root, "", "schedules_o"), "/schedules_o", mcn.g_o, mcn.frame_length);
    mcn.weights_r = weights(field(root, "", "weights_r"), "/weights_r", mcn.g_r);
    mcn.weights_o = weights(field(root, "", "weights_o"), "/weights_o", mcn.g_o);

    if (auto it = root.find("fault_candidates"); it != root.end()) {
        if (!it->is_array()) fail("/fault_candidates", "expected an array of node ids");
        for (std::size_t k = 0; k < it->size(); ++k) {
            const auto at = "/fault_candidates/" + std::to_string(k);
            try {
                mcn.fault_candidates.push_back(resolve_node(mcn, text((*it)[k], at)));
            } catch (const ConfigError& e) {
                fail(at, e.what());
            }
        }
    }

    check_integrity(mcn);
    return mcn;
}

Mcn load_mcn_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_mcn(ss.str());
}

std::string dump_config(const Mcn& mcn)
{
    json root;
    root["plant"]["kind"] = mcn.plant.kind == PlantKind::Continuous ? "continuous" : "discrete";
    root["plant"]["A"] = matrix_json(mcn.plant.A);
    root["plant"]["B"] = matrix_json(mcn.plant.B);
    root["plant"]["C"] = matrix_json(mcn.plant.C);
    root["delta"] = mcn.delta;
    root["frame_length"] = mcn.frame_length;
    root["controllability"] = graph_json(mcn.g_r);
    root["observability"] = graph_json(mcn.g_o);
    root["schedules_r"] = schedules_json(mcn.schedules_r);
    root["schedules_o"] = schedules_json(mcn.schedules_o);
    root["weights_r"] = weights_json(mcn.weights_r);
    root["weights_o"] = weights_json(mcn.weights_o);
    if (!mcn.fault_candidates.empty()) {
        json list = json::array();
        for (const auto& c : mcn.fault_candidates)
            list.push_back(std::string(c.side == Side::Controllability ? "r:" : "o:") + c.id);
        root["fault_candidates"] = std::move(list);
    }
    return root.dump(2) + "\n";
}

}  // namespace mcn
