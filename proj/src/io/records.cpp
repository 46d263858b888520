#include "crosseai/io/records.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "crosseai/errors.hpp"

namespace crosseai::io {
namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

// Reads a header-addressed CSV. Blank lines are skipped; an empty file has
// no rows.
class CsvTable {
public:
    CsvTable(const std::filesystem::path& path, std::initializer_list<const char*> required) : path_(path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
        std::string line;
        std::size_t lineno = 0;
        bool have_header = false;
        while (std::getline(in, line)) {
            ++lineno;
            if (trim(line).empty()) continue;
            auto fields = split_csv_line(line);
            for (auto& f : fields) f = trim(f);
            if (!have_header) {
                for (std::size_t i = 0; i < fields.size(); ++i) columns_[fields[i]] = i;
                have_header = true;
                continue;
            }
            rows_.push_back({lineno, std::move(fields)});
        }
        if (!have_header) return;
        for (const char* name : required) {
            if (!columns_.contains(name)) throw FormatError(path.string() + ": missing column '" + name + "'");
        }
    }

    struct Row {
        std::size_t line;
        std::vector<std::string> fields;
    };

    const std::vector<Row>& rows() const { return rows_; }

    const std::string& get(const Row& row, const char* name) const {
        const std::size_t i = columns_.at(name);
        if (i >= row.fields.size()) fail(row, std::string("missing value for '") + name + "'");
        return row.fields[i];
    }

    double number(const Row& row, const char* name) const {
        const std::string& s = get(row, name);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
            fail(row, std::string("'") + name + "' is not a number: '" + s + "'");
        }
        return v;
    }

    int integer(const Row& row, const char* name) const {
        const std::string& s = get(row, name);
        int v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            fail(row, std::string("'") + name + "' is not an integer: '" + s + "'");
        }
        return v;
    }

    [[noreturn]] void fail(const Row& row, const std::string& why) const {
        throw FormatError(path_.string() + ":" + std::to_string(row.line) + ": " + why);
    }

private:
    std::filesystem::path path_;
    std::map<std::string, std::size_t> columns_;
    std::vector<Row> rows_;
};

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(std::move(cur));
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<GroundTruthRecord> read_annotations(const std::filesystem::path& path) {
    const CsvTable csv(path, {"image_id", "label", "x", "y", "w", "h", "img_w", "img_h"});
    std::vector<GroundTruthRecord> out;
    for (const auto& row : csv.rows()) {
        const double x = csv.number(row, "x");
        const double y = csv.number(row, "y");
        const double w = csv.number(row, "w");
        const double h = csv.number(row, "h");
        const int img_w = csv.integer(row, "img_w");
        const int img_h = csv.integer(row, "img_h");
        if (img_w < 1 || img_h < 1) csv.fail(row, "image dimensions must be positive");
        if (!(w > 0.0 && h > 0.0)) csv.fail(row, "box extent must be positive");
        if (x < 0.0 || y < 0.0 || x + w > img_w || y + h > img_h) csv.fail(row, "box exceeds image bounds");

        GroundTruthRecord r;
        r.image_id = csv.get(row, "image_id");
        r.label = csv.get(row, "label");
        if (r.image_id.empty() || r.label.empty()) csv.fail(row, "empty image_id or label");
        r.box = BoundingBox{static_cast<int>(std::floor(x)), static_cast<int>(std::floor(y)),
                            static_cast<int>(std::ceil(x + w)), static_cast<int>(std::ceil(y + h))};
        r.image_dims = Dims{img_w, img_h};
        out.push_back(std::move(r));
    }
    return out;
}

void write_annotations(const std::filesystem::path& path, std::span<const GroundTruthRecord> records) {
    std::ostringstream os;
    os << "image_id,label,x,y,w,h,img_w,img_h\n";
    for (const auto& r : records) {
        os << quote(r.image_id) << ',' << quote(r.label) << ',' << r.box.x1 << ',' << r.box.y1 << ',' << r.box.width()
           << ',' << r.box.height() << ',' << r.image_dims.width << ',' << r.image_dims.height << '\n';
    }
    write_text(path, os.str());
}

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path) {
    const CsvTable csv(path, {"image_id", "label", "x1", "y1", "x2", "y2", "map_w", "map_h"});
    std::vector<PredictionRecord> out;
    for (const auto& row : csv.rows()) {
        PredictionRecord r;
        r.image_id = csv.get(row, "image_id");
        r.label = csv.get(row, "label");
        r.box = BoundingBox{csv.integer(row, "x1"), csv.integer(row, "y1"), csv.integer(row, "x2"), csv.integer(row, "y2")};
        r.map_dims = Dims{csv.integer(row, "map_w"), csv.integer(row, "map_h")};
        if (!r.box.valid_within(r.map_dims)) csv.fail(row, "box is empty or outside the map");
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_predictions(std::span<const PredictionRecord> records) {
    std::ostringstream os;
    os << "image_id,label,x1,y1,x2,y2,map_w,map_h\n";
    for (const auto& r : records) {
        os << quote(r.image_id) << ',' << quote(r.label) << ',' << r.box.x1 << ',' << r.box.y1 << ',' << r.box.x2 << ','
           << r.box.y2 << ',' << r.map_dims.width << ',' << r.map_dims.height << '\n';
    }
    return os.str();
}

void write_predictions(const std::filesystem::path& path, std::span<const PredictionRecord> records) {
    write_text(path, format_predictions(records));
}

std::string format_failures(std::span<const FailureRecord> records) {
    std::ostringstream os;
    os << "image_id,label,reason\n";
    for (const auto& r : records) os << quote(r.image_id) << ',' << quote(r.label) << ',' << quote(r.reason) << '\n';
    return os.str();
}

void write_failures(const std::filesystem::path& path, std::span<const FailureRecord> records) {
    write_text(path, format_failures(records));
}

std::vector<MetadataRecord> read_metadata(const std::filesystem::path& path) {
    const CsvTable csv(path, {"image_id", "patient_id", "labels"});
    std::vector<MetadataRecord> out;
    for (const auto& row : csv.rows()) {
        MetadataRecord r;
        r.image_id = csv.get(row, "image_id");
        r.patient_id = csv.get(row, "patient_id");
        std::stringstream labels(csv.get(row, "labels"));
        std::string label;
        while (std::getline(labels, label, '|')) {
            label = trim(label);
            if (!label.empty()) r.labels.insert(label);
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace crosseai::io
