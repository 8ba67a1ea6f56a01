#include "preempt/report.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "preempt/error.hpp"
#include "preempt/stats/fdr.hpp"

namespace preempt {

using ojson = nlohmann::ordered_json;

Table& Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw InputError("table '" + name + "': row has " + std::to_string(row.size()) + " cells, expected " +
                         std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
    return *this;
}

void ExperimentReport::set_scalar(const std::string& key, Cell value) {
    for (auto& [k, v] : scalars_) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    scalars_.emplace_back(key, std::move(value));
}

Table& ExperimentReport::add_table(std::string name, std::vector<std::string> columns) {
    tables_.push_back({std::move(name), std::move(columns), {}});
    return tables_.back();
}

void ExperimentReport::add_test(ReportedTest t) {
    if (find_test(t.id) != nullptr) throw InputError("report already has a test named '" + t.id + "'");
    if (!(t.p >= 0.0 && t.p <= 1.0)) throw InputError("test '" + t.id + "' has p outside [0, 1]");
    t.p_adjusted = t.p;
    tests_.push_back(std::move(t));
}

void ExperimentReport::absorb(const ExperimentReport& other) {
    for (const auto& [k, v] : other.scalars_) set_scalar(k, v);
    for (const auto& t : other.tables_) tables_.push_back(t);
    for (const auto& t : other.tests_) add_test(t);
    for (const auto& n : other.notes_) notes_.push_back(n);
    for (const auto& f : other.figures_) figures_.push_back(f);
}

void ExperimentReport::apply_fdr(double q) {
    fdr_q_ = q;
    std::vector<double> p;
    for (const auto& t : tests_) p.push_back(t.p);
    const auto res = stats::bh_fdr(p, q);
    for (std::size_t i = 0; i < tests_.size(); ++i) {
        tests_[i].p_adjusted = res.adjusted[i];
        tests_[i].rejected = res.rejected[i];
    }
}

const ReportedTest* ExperimentReport::find_test(const std::string& id) const {
    for (const auto& t : tests_) {
        if (t.id == id) return &t;
    }
    return nullptr;
}

const Table* ExperimentReport::find_table(const std::string& name) const {
    for (const auto& t : tables_) {
        if (t.name == name) return &t;
    }
    return nullptr;
}

const Cell* ExperimentReport::find_scalar(const std::string& key) const {
    for (const auto& [k, v] : scalars_) {
        if (k == key) return &v;
    }
    return nullptr;
}

namespace {

ojson number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "NaN";
    return v > 0 ? "Infinity" : "-Infinity";
}

ojson cell_json(const Cell& c) {
    if (std::holds_alternative<double>(c)) return number(std::get<double>(c));
    if (std::holds_alternative<std::int64_t>(c)) return std::get<std::int64_t>(c);
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    return nullptr;
}

double json_number(const nlohmann::json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "Infinity") return std::numeric_limits<double>::infinity();
        if (s == "-Infinity") return -std::numeric_limits<double>::infinity();
        if (s == "NaN") return std::numeric_limits<double>::quiet_NaN();
    }
    throw InputError("report: expected a number");
}

Cell json_cell(const nlohmann::json& j) {
    if (j.is_null()) return std::monostate{};
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "Infinity" || s == "-Infinity" || s == "NaN") return json_number(j);
        return s;
    }
    throw InputError("report: unsupported cell value");
}

}  // namespace

std::string cell_text(const Cell& c) {
    if (std::holds_alternative<double>(c)) {
        std::ostringstream os;
        os << std::setprecision(10) << std::get<double>(c);
        return os.str();
    }
    if (std::holds_alternative<std::int64_t>(c)) return std::to_string(std::get<std::int64_t>(c));
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    return "";
}

std::string to_json(const ExperimentReport& r) {
    ojson j;
    j["experiment"] = r.experiment();
    j["scalars"] = ojson::object();
    for (const auto& [k, v] : r.scalars()) j["scalars"][k] = cell_json(v);
    j["tables"] = ojson::array();
    for (const auto& t : r.tables()) {
        ojson tj;
        tj["name"] = t.name;
        tj["columns"] = t.columns;
        tj["rows"] = ojson::array();
        for (const auto& row : t.rows) {
            ojson rj = ojson::array();
            for (const auto& c : row) rj.push_back(cell_json(c));
            tj["rows"].push_back(rj);
        }
        j["tables"].push_back(tj);
    }
    j["fdr_q"] = r.fdr_q();
    j["tests"] = ojson::array();
    for (const auto& t : r.tests()) {
        ojson tj;
        tj["id"] = t.id;
        tj["description"] = t.description;
        tj["statistic_name"] = t.statistic_name;
        tj["statistic"] = number(t.statistic);
        tj["df"] = t.df ? number(*t.df) : ojson(nullptr);
        tj["p"] = t.p;
        tj["p_fdr"] = t.p_adjusted;
        tj["rejected"] = t.rejected;
        tj["effect_size"] = t.effect_size ? number(*t.effect_size) : ojson(nullptr);
        j["tests"].push_back(tj);
    }
    j["notes"] = r.notes();
    j["figures"] = ojson::array();
    for (const auto& f : r.figures()) j["figures"].push_back(f.name + ".svg");
    return j.dump(2);
}

ExperimentReport report_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("report: invalid JSON: ") + e.what());
    }
    try {
        ExperimentReport r(j.at("experiment").get<std::string>());
        // iterate in document order; nlohmann::json sorts keys, ordered_json does not
        const auto oj = ojson::parse(text);
        for (const auto& [k, v] : oj.at("scalars").items()) r.set_scalar(k, json_cell(nlohmann::json(v)));
        for (const auto& tj : j.at("tables")) {
            auto& t = r.add_table(tj.at("name").get<std::string>(), tj.at("columns").get<std::vector<std::string>>());
            for (const auto& row : tj.at("rows")) {
                std::vector<Cell> cells;
                for (const auto& c : row) cells.push_back(json_cell(c));
                t.add_row(std::move(cells));
            }
        }
        for (const auto& tj : j.at("tests")) {
            ReportedTest t;
            t.id = tj.at("id").get<std::string>();
            t.description = tj.value("description", "");
            t.statistic_name = tj.value("statistic_name", "");
            t.statistic = json_number(tj.at("statistic"));
            if (!tj.at("df").is_null()) t.df = json_number(tj.at("df"));
            t.p = tj.at("p").get<double>();
            if (tj.contains("effect_size") && !tj.at("effect_size").is_null()) {
                t.effect_size = json_number(tj.at("effect_size"));
            }
            r.add_test(std::move(t));
        }
        for (const auto& n : j.value("notes", nlohmann::json::array())) r.add_note(n.get<std::string>());
        r.apply_fdr(j.value("fdr_q", 0.05));
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("report: unexpected structure: ") + e.what());
    }
}

void write_table_csv(std::ostream& out, const Table& t) {
    const auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) {
            if (ch == '"') q += '"';
            q += ch;
        }
        return q + "\"";
    };
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << quote(t.columns[i]);
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << quote(cell_text(row[i]));
        out << '\n';
    }
}

}  // namespace preempt
