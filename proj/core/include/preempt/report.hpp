#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace preempt {

using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    Table& add_row(std::vector<Cell> row);  // throws InputError on a width mismatch
};

struct ReportedTest {
    std::string id;           // unique within a report, e.g. "exp1.strong_vs_none"
    std::string description;
    std::string statistic_name;  // "t", "r", ...
    double statistic = 0.0;
    std::optional<double> df;
    double p = 1.0;
    std::optional<double> effect_size;
    double p_adjusted = 1.0;  // filled by apply_fdr
    bool rejected = false;
};

struct Figure {
    std::string name;  // file stem, e.g. "exp3_scaling"
    std::string svg;
};

class ExperimentReport {
public:
    ExperimentReport() = default;
    explicit ExperimentReport(std::string experiment) : experiment_(std::move(experiment)) {}

    const std::string& experiment() const noexcept { return experiment_; }

    void set_scalar(const std::string& key, Cell value);
    Table& add_table(std::string name, std::vector<std::string> columns);
    void add_test(ReportedTest t);  // throws InputError on a duplicate id
    void add_note(std::string note) { notes_.push_back(std::move(note)); }
    void add_figure(Figure f) { figures_.push_back(std::move(f)); }

    /// Appends every scalar, table, test, note and figure of `other`.
    void absorb(const ExperimentReport& other);

    /// Benjamini-Hochberg over every test in the report (the run-scoped family).
    void apply_fdr(double q = 0.05);
    double fdr_q() const noexcept { return fdr_q_; }

    const std::vector<std::pair<std::string, Cell>>& scalars() const noexcept { return scalars_; }
    const std::vector<Table>& tables() const noexcept { return tables_; }
    const std::vector<ReportedTest>& tests() const noexcept { return tests_; }
    const std::vector<std::string>& notes() const noexcept { return notes_; }
    const std::vector<Figure>& figures() const noexcept { return figures_; }

    const ReportedTest* find_test(const std::string& id) const;
    const Table* find_table(const std::string& name) const;
    const Cell* find_scalar(const std::string& key) const;

private:
    std::string experiment_;
    std::vector<std::pair<std::string, Cell>> scalars_;
    std::vector<Table> tables_;
    std::vector<ReportedTest> tests_;
    std::vector<std::string> notes_;
    std::vector<Figure> figures_;
    double fdr_q_ = 0.05;
};

/// JSON document with scalars, tables, tests (raw and adjusted p), notes
/// and figure names. Figures themselves are written separately.
std::string to_json(const ExperimentReport& r);
ExperimentReport report_from_json(const std::string& json);

void write_table_csv(std::ostream& out, const Table& t);
std::string cell_text(const Cell& c);

}  // namespace preempt
