#include "bnw/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "bnw/rng.hpp"

namespace bnw {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(s);
    while (std::getline(in, field, sep)) out.push_back(trim(field));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

}  // namespace

std::string to_string(VarRole role) {
    switch (role) {
        case VarRole::dimension: return "dimension";
        case VarRole::target: return "target";
        case VarRole::control: return "control";
    }
    return "?";
}

VarRole parse_role(const std::string& text) {
    if (text == "dimension") return VarRole::dimension;
    if (text == "target") return VarRole::target;
    if (text == "control") return VarRole::control;
    throw DataError("unknown variable role '" + text + "' (expected dimension, target, or control)");
}

int VariableSpec::category_index(const std::string& label) const {
    for (std::size_t k = 0; k < categories.size(); ++k)
        if (categories[k] == label) return static_cast<int>(k);
    return -1;
}

double VariableSpec::score_of(int category) const {
    if (scores) return (*scores)[static_cast<std::size_t>(category)];
    if (categories.size() <= 1) return 0.0;
    return static_cast<double>(category) / static_cast<double>(categories.size() - 1);
}

void VariableSpec::validate() const {
    if (name.empty()) throw DataError("variable with empty name");
    if (categories.empty()) throw DataError("variable '" + name + "' has no categories");
    std::set<std::string> seen(categories.begin(), categories.end());
    if (seen.size() != categories.size())
        throw DataError("variable '" + name + "' has duplicate categories");
    if (scores) {
        if (scores->size() != categories.size())
            throw DataError("variable '" + name + "': score mapping covers " +
                            std::to_string(scores->size()) + " categories, expected " +
                            std::to_string(categories.size()));
        for (double v : *scores)
            if (!(v >= 0.0 && v <= 1.0))
                throw DataError("variable '" + name + "': score " + std::to_string(v) +
                                " outside [0,1]");
    }
}

Dataset::Dataset(std::vector<VariableSpec> schema, std::vector<std::int32_t> cells)
    : schema_(std::move(schema)), cells_(std::move(cells)) {
    if (schema_.size() < 2) throw DataError("dataset needs at least 2 variables");
    std::set<std::string> names;
    int targets = 0;
    for (const auto& v : schema_) {
        v.validate();
        if (!names.insert(v.name).second)
            throw DataError("duplicate variable name '" + v.name + "'");
        if (v.role == VarRole::target) ++targets;
    }
    if (targets != 1)
        throw DataError("schema must declare exactly one target variable, found " +
                        std::to_string(targets));
    if (cells_.size() % schema_.size() != 0)
        throw DataError("cell count is not a multiple of the variable count");
    n_ = cells_.size() / schema_.size();
    if (n_ < 1) throw DataError("dataset needs at least 1 row");
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < schema_.size(); ++j) {
            std::int32_t c = cells_[i * schema_.size() + j];
            if (c < 0 || c >= schema_[j].cardinality())
                throw DataError("cell (" + std::to_string(i + 1) + ", " + schema_[j].name +
                                ") holds index " + std::to_string(c) + " outside cardinality " +
                                std::to_string(schema_[j].cardinality()));
        }
}

int Dataset::var_index(const std::string& name) const {
    for (std::size_t j = 0; j < schema_.size(); ++j)
        if (schema_[j].name == name) return static_cast<int>(j);
    throw DataError("unknown variable '" + name + "'");
}

std::vector<int> Dataset::dimension_vars() const {
    std::vector<int> out;
    for (std::size_t j = 0; j < schema_.size(); ++j)
        if (schema_[j].role == VarRole::dimension) out.push_back(static_cast<int>(j));
    return out;
}

std::vector<std::string> Dataset::dimension_names() const {
    std::vector<std::string> out;
    for (const auto& v : schema_)
        if (v.role == VarRole::dimension) out.push_back(v.name);
    return out;
}

int Dataset::target_var() const {
    for (std::size_t j = 0; j < schema_.size(); ++j)
        if (schema_[j].role == VarRole::target) return static_cast<int>(j);
    throw DataError("schema has no target variable");
}

std::int64_t ContingencyTable::at(const std::vector<int>& levels) const {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < cards.size(); ++k)
        idx = idx * static_cast<std::size_t>(cards[k]) + static_cast<std::size_t>(levels[k]);
    return cells[idx];
}

ContingencyTable ContingencyTable::marginalize(const std::vector<int>& keep_positions) const {
    ContingencyTable out;
    for (int p : keep_positions) {
        out.var_ids.push_back(var_ids[static_cast<std::size_t>(p)]);
        out.cards.push_back(cards[static_cast<std::size_t>(p)]);
    }
    std::size_t out_size = 1;
    for (int c : out.cards) out_size *= static_cast<std::size_t>(c);
    out.cells.assign(out_size, 0);
    out.total = total;

    std::vector<int> levels(cards.size(), 0);
    for (std::size_t idx = 0; idx < cells.size(); ++idx) {
        std::size_t out_idx = 0;
        for (int p : keep_positions)
            out_idx = out_idx * static_cast<std::size_t>(cards[static_cast<std::size_t>(p)]) +
                      static_cast<std::size_t>(levels[static_cast<std::size_t>(p)]);
        out.cells[out_idx] += cells[idx];
        for (std::size_t k = cards.size(); k-- > 0;) {
            if (++levels[k] < cards[k]) break;
            levels[k] = 0;
        }
    }
    return out;
}

ContingencyTable counts(const Dataset& data, const std::vector<int>& var_ids) {
    if (var_ids.empty()) throw DataError("counts: empty variable list");
    std::set<int> dedup(var_ids.begin(), var_ids.end());
    if (dedup.size() != var_ids.size()) throw DataError("counts: duplicate variable");
    ContingencyTable t;
    t.var_ids = var_ids;
    std::size_t size = 1;
    for (int id : var_ids) {
        if (id < 0 || id >= static_cast<int>(data.n_vars()))
            throw DataError("counts: variable index out of range");
        t.cards.push_back(data.variable(static_cast<std::size_t>(id)).cardinality());
        size *= static_cast<std::size_t>(t.cards.back());
    }
    t.cells.assign(size, 0);
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        const std::int32_t* row = data.row(i);
        std::size_t idx = 0;
        for (std::size_t k = 0; k < var_ids.size(); ++k)
            idx = idx * static_cast<std::size_t>(t.cards[k]) +
                  static_cast<std::size_t>(row[var_ids[k]]);
        ++t.cells[idx];
    }
    t.total = static_cast<std::int64_t>(data.n_rows());
    return t;
}

ContingencyTable counts(const Dataset& data, const std::vector<std::string>& vars) {
    std::vector<int> ids;
    ids.reserve(vars.size());
    for (const auto& v : vars) ids.push_back(data.var_index(v));
    return counts(data, ids);
}

namespace {

const std::vector<double>* mapping_for(const ScoreMappings& mapping, const VariableSpec& spec) {
    auto it = mapping.find(spec.name);
    if (it == mapping.end()) return nullptr;
    if (it->second.size() != spec.categories.size())
        throw DataError("score mapping for '" + spec.name + "' covers " +
                        std::to_string(it->second.size()) + " categories, expected " +
                        std::to_string(spec.categories.size()));
    for (double v : it->second)
        if (!(v >= 0.0 && v <= 1.0))
            throw DataError("score mapping for '" + spec.name + "' has value " +
                            std::to_string(v) + " outside [0,1]");
    return &it->second;
}

}  // namespace

std::vector<double> achievement_column(const Dataset& data, const std::string& var,
                                       const ScoreMappings& mapping) {
    int j = data.var_index(var);
    const VariableSpec& spec = data.variable(static_cast<std::size_t>(j));
    const std::vector<double>* table = mapping_for(mapping, spec);
    std::vector<double> out(data.n_rows());
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        int c = data.cell(i, static_cast<std::size_t>(j));
        out[i] = table ? (*table)[static_cast<std::size_t>(c)] : spec.score_of(c);
    }
    return out;
}

ScoreMatrix achievement_scores(const Dataset& data, const ScoreMappings& mapping) {
    ScoreMatrix m;
    m.dims = data.dimension_names();
    m.n = data.n_rows();
    m.values.resize(m.n * m.dims.size());
    for (std::size_t d = 0; d < m.dims.size(); ++d) {
        std::vector<double> col = achievement_column(data, m.dims[d], mapping);
        for (std::size_t i = 0; i < m.n; ++i) m.values[i * m.dims.size() + d] = col[i];
    }
    return m;
}

std::vector<VariableSpec> load_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open schema file '" + path + "'");
    std::vector<VariableSpec> schema;
    VariableSpec current;
    bool open = false;
    auto flush = [&] {
        if (open) {
            current.validate();
            schema.push_back(current);
            current = VariableSpec{};
            open = false;
        }
    };
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        std::size_t colon = line.find(':');
        if (colon == std::string::npos)
            throw DataError("schema line " + std::to_string(lineno) + ": expected 'key: value'");
        std::string key = trim(line.substr(0, colon));
        std::string value = trim(line.substr(colon + 1));
        if (key == "variable") {
            flush();
            current.name = value;
            open = true;
        } else if (!open) {
            throw DataError("schema line " + std::to_string(lineno) + ": '" + key +
                            "' before any 'variable:'");
        } else if (key == "role") {
            current.role = parse_role(value);
        } else if (key == "categories") {
            current.categories = split(value, ',');
        } else if (key == "scores") {
            std::vector<double> vals;
            for (const auto& s : split(value, ',')) {
                try {
                    vals.push_back(std::stod(s));
                } catch (const std::exception&) {
                    throw DataError("schema line " + std::to_string(lineno) +
                                    ": bad score value '" + s + "'");
                }
            }
            current.scores = std::move(vals);
        } else {
            throw DataError("schema line " + std::to_string(lineno) + ": unknown key '" + key +
                            "'");
        }
    }
    flush();
    if (schema.empty()) throw DataError("schema file '" + path + "' declares no variables");
    return schema;
}

Dataset load_csv(const std::string& path, std::vector<VariableSpec> schema, LoadReport* report) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open data file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError("data file '" + path + "' is empty");
    std::vector<std::string> header = split(line, ',');

    // Header may permute the schema order; cells are stored in schema order.
    std::vector<int> col_to_var(header.size(), -1);
    std::vector<bool> seen(schema.size(), false);
    for (std::size_t c = 0; c < header.size(); ++c) {
        int j = -1;
        for (std::size_t k = 0; k < schema.size(); ++k)
            if (schema[k].name == header[c]) j = static_cast<int>(k);
        if (j < 0)
            throw DataError("data column '" + header[c] + "' does not appear in the schema");
        if (seen[static_cast<std::size_t>(j)])
            throw DataError("data column '" + header[c] + "' appears twice");
        seen[static_cast<std::size_t>(j)] = true;
        col_to_var[c] = j;
    }
    for (std::size_t k = 0; k < schema.size(); ++k)
        if (!seen[k]) throw DataError("schema variable '" + schema[k].name + "' missing from data");

    std::vector<std::int32_t> cells;
    std::vector<std::int32_t> rowbuf(schema.size());
    std::size_t rowno = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++rowno;
        std::vector<std::string> fields = split(line, ',');
        if (fields.size() != header.size())
            throw DataError("row " + std::to_string(rowno) + ": " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(header.size()));
        bool incomplete = false;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            int j = col_to_var[c];
            if (fields[c].empty()) {  // missing value: refuse the row, never impute
                incomplete = true;
                continue;
            }
            int cat = schema[static_cast<std::size_t>(j)].category_index(fields[c]);
            if (cat < 0)
                throw DataError("row " + std::to_string(rowno) + ", column '" +
                                schema[static_cast<std::size_t>(j)].name + "': unknown category '" +
                                fields[c] + "'");
            rowbuf[static_cast<std::size_t>(j)] = cat;
        }
        if (incomplete) {
            if (report) report->dropped_rows.push_back(rowno);
            continue;
        }
        cells.insert(cells.end(), rowbuf.begin(), rowbuf.end());
    }
    if (cells.empty()) throw DataError("data file '" + path + "' has no complete rows");
    return Dataset(std::move(schema), std::move(cells));
}

std::string to_csv(const Dataset& data) {
    std::ostringstream out;
    for (std::size_t j = 0; j < data.n_vars(); ++j) {
        if (j) out << ',';
        out << data.variable(j).name;
    }
    out << '\n';
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        for (std::size_t j = 0; j < data.n_vars(); ++j) {
            if (j) out << ',';
            out << data.variable(j).categories[static_cast<std::size_t>(data.cell(i, j))];
        }
        out << '\n';
    }
    return out.str();
}

Dataset bootstrap_resample(const Dataset& data, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t n = data.n_rows();
    const std::size_t m = data.n_vars();
    std::vector<std::int32_t> cells(n * m);
    for (std::size_t i = 0; i < n; ++i) {
        const std::int32_t* src = data.row(uniform_index(rng, n));
        std::copy(src, src + m, cells.begin() + static_cast<std::ptrdiff_t>(i * m));
    }
    return Dataset(data.schema(), std::move(cells));
}

}  // namespace bnw
