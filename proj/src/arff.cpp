#include "uclso/arff.hpp"

#include "uclso/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string_view>
#include <unordered_map>

namespace uclso {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool iequals(std::string_view a, std::string_view b) {
    return std::ranges::equal(a, b, [](char x, char y) {
        return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
    });
}

bool starts_with_keyword(std::string_view line, std::string_view keyword) {
    if (line.size() < keyword.size() || !iequals(line.substr(0, keyword.size()), keyword)) {
        return false;
    }
    return line.size() == keyword.size() || std::isspace(static_cast<unsigned char>(line[keyword.size()]));
}

/// Cursor over one line that reads ARFF tokens (bare words or quoted strings).
class Lexer {
  public:
    Lexer(std::string_view text, const std::string &file, std::size_t line) : text_(text), file_(file), line_(line) {}

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    [[nodiscard]] bool done() {
        skip_space();
        return pos_ >= text_.size();
    }
    [[nodiscard]] char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }
    [[nodiscard]] std::string_view rest() {
        skip_space();
        return text_.substr(pos_);
    }

    /// Reads a quoted string or a bare token ending at whitespace or any of `stops`.
    std::string token(std::string_view stops) {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of line");
        const char q = text_[pos_];
        std::string out;
        if (q == '\'' || q == '"') {
            ++pos_;
            while (pos_ < text_.size() && text_[pos_] != q) {
                if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
                out.push_back(text_[pos_++]);
            }
            if (pos_ >= text_.size()) fail("unterminated quoted string");
            ++pos_;
            return out;
        }
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
               stops.find(text_[pos_]) == std::string_view::npos) {
            out.push_back(text_[pos_++]);
        }
        if (out.empty()) fail("empty token");
        return out;
    }

    [[noreturn]] void fail(const std::string &what) const { throw parse_error(file_, line_, what); }

  private:
    std::string_view text_;
    std::size_t pos_ = 0;
    const std::string &file_;
    std::size_t line_;
};

struct Attribute {
    std::string name;
    bool nominal = false;
    std::vector<std::string> values;  // nominal only
};

double parse_number(std::string_view text, const Lexer &lex) {
    if (text == "?") lex.fail("missing values ('?') are not supported");
    double value = 0.0;
    const char *first = text.data();
    const char *last = text.data() + text.size();
    if (!text.empty() && text.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) lex.fail("invalid numeric value '" + std::string(text) + "'");
    return value;
}

/// Where one ARFF attribute lands in the output matrices.
struct Column {
    bool is_label = false;
    std::size_t target = 0;  // label column, or first feature column
};

class RowBuilder {
  public:
    RowBuilder(const std::vector<Attribute> &attrs, const std::vector<Column> &cols, std::size_t d, std::size_t q)
        : attrs_(attrs), cols_(cols), features_(d), labels_(q) {}

    void reset(bool sparse) {
        std::ranges::fill(features_, 0.0);
        std::ranges::fill(labels_, std::uint8_t{0});
        seen_.assign(attrs_.size(), false);
        if (sparse) {
            // sparse rows default every attribute to numeric 0 / the first nominal value
            for (std::size_t a = 0; a < attrs_.size(); ++a) {
                if (attrs_[a].nominal && !cols_[a].is_label) {
                    features_[cols_[a].target] = 1.0;
                }
            }
        }
    }

    void set(std::size_t a, std::string_view raw, const Lexer &lex) {
        if (seen_[a]) lex.fail("attribute index " + std::to_string(a) + " given twice");
        seen_[a] = true;
        const Attribute &attr = attrs_[a];
        const Column &col = cols_[a];
        if (raw == "?") lex.fail("missing values ('?') are not supported");
        if (col.is_label) {
            double v = 0.0;
            if (attr.nominal) {
                const auto idx = nominal_index(attr, raw, lex);
                v = parse_number(attr.values[idx], lex);
            } else {
                v = parse_number(raw, lex);
            }
            if (v != 0.0 && v != 1.0) lex.fail("label '" + attr.name + "' has non-binary value '" + std::string(raw) + "'");
            labels_[col.target] = static_cast<std::uint8_t>(v);
        } else if (attr.nominal) {
            const auto idx = nominal_index(attr, raw, lex);
            for (std::size_t v = 0; v < attr.values.size(); ++v) {
                features_[col.target + v] = v == idx ? 1.0 : 0.0;
            }
        } else {
            features_[col.target] = parse_number(raw, lex);
        }
    }

    void finish_dense(const Lexer &lex) const {
        if (std::ranges::find(seen_, false) != seen_.end()) {
            lex.fail("row has fewer values than the " + std::to_string(attrs_.size()) + " declared attributes");
        }
    }

    [[nodiscard]] const std::vector<double> &features() const { return features_; }
    [[nodiscard]] const std::vector<std::uint8_t> &labels() const { return labels_; }

  private:
    static std::size_t nominal_index(const Attribute &attr, std::string_view raw, const Lexer &lex) {
        const auto it = std::ranges::find(attr.values, raw);
        if (it == attr.values.end()) {
            lex.fail("value '" + std::string(raw) + "' not declared for nominal attribute '" + attr.name + "'");
        }
        return static_cast<std::size_t>(it - attr.values.begin());
    }

    const std::vector<Attribute> &attrs_;
    const std::vector<Column> &cols_;
    std::vector<double> features_;
    std::vector<std::uint8_t> labels_;
    std::vector<bool> seen_;
};

Attribute parse_attribute(Lexer &lex) {
    Attribute attr;
    attr.name = lex.token("{");
    if (lex.accept('{')) {
        attr.nominal = true;
        if (!lex.accept('}')) {
            do {
                attr.values.push_back(lex.token(",}"));
            } while (lex.accept(','));
            lex.expect('}');
        }
        if (attr.values.empty()) lex.fail("nominal attribute '" + attr.name + "' declares no values");
        if (!lex.done()) lex.fail("trailing text after nominal value list");
        return attr;
    }
    const std::string type = lex.token("");
    if (!(iequals(type, "numeric") || iequals(type, "real") || iequals(type, "integer"))) {
        lex.fail("unsupported attribute type '" + type + "' for '" + attr.name + "'");
    }
    return attr;
}

std::string quote_name(const std::string &name) {
    const bool plain = !name.empty() && std::ranges::none_of(name, [](char c) {
        return std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '{' || c == '}' || c == '\'' ||
               c == '"' || c == '%' || c == '\\';
    });
    if (plain) return name;
    std::string out = "'";
    for (const char c : name) {
        if (c == '\'' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('\'');
    return out;
}

std::string xml_escape(const std::string &s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string xml_unescape(std::string_view s) {
    static const std::pair<std::string_view, char> entities[] = {
        {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}};
    std::string out;
    for (std::size_t i = 0; i < s.size();) {
        bool matched = false;
        if (s[i] == '&') {
            for (const auto &[entity, ch] : entities) {
                if (s.substr(i, entity.size()) == entity) {
                    out.push_back(ch);
                    i += entity.size();
                    matched = true;
                    break;
                }
            }
        }
        if (!matched) out.push_back(s[i++]);
    }
    return out;
}

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

std::vector<std::string> parse_mulan_labels(std::istream &in, const std::string &source) {
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    std::vector<std::string> names;
    std::size_t pos = 0;
    while ((pos = text.find("<label", pos)) != std::string::npos) {
        const std::size_t after = pos + 6;
        if (after >= text.size() || !(std::isspace(static_cast<unsigned char>(text[after])) || text[after] == '>' || text[after] == '/')) {
            pos = after;  // e.g. <labels>
            continue;
        }
        const std::size_t end = text.find('>', after);
        if (end == std::string::npos) {
            throw parse_error(source, 0, "unterminated <label> element");
        }
        const std::string_view tag(text.data() + after, end - after);
        const std::size_t attr = tag.find("name");
        std::size_t q = attr == std::string_view::npos ? attr : tag.find_first_of("\"'", attr);
        if (q == std::string_view::npos) {
            const auto line = static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n')) + 1;
            throw parse_error(source, line, "<label> element without a name attribute");
        }
        const std::size_t close = tag.find(tag[q], q + 1);
        if (close == std::string_view::npos) {
            throw parse_error(source, 0, "unterminated label name");
        }
        names.push_back(xml_unescape(tag.substr(q + 1, close - q - 1)));
        pos = end;
    }
    if (names.empty()) {
        throw parse_error(source, 0, "no <label> elements found");
    }
    return names;
}

std::vector<std::string> read_mulan_labels(const std::filesystem::path &xml_path) {
    std::ifstream in(xml_path);
    if (!in) {
        throw parse_error(xml_path.string(), 0, "cannot open file");
    }
    return parse_mulan_labels(in, xml_path.string());
}

MultiLabelDataset parse_arff(std::istream &in, const std::vector<std::string> &label_names, const std::string &source) {
    std::vector<Attribute> attrs;
    std::string line;
    std::size_t line_no = 0;
    bool in_data = false;

    while (!in_data && std::getline(in, line)) {
        ++line_no;
        const std::string_view body = trim(line);
        if (body.empty() || body.front() == '%') continue;
        Lexer lex(body, source, line_no);
        if (starts_with_keyword(body, "@relation")) continue;
        if (starts_with_keyword(body, "@attribute")) {
            Lexer attr_lex(body.substr(10), source, line_no);
            attrs.push_back(parse_attribute(attr_lex));
        } else if (starts_with_keyword(body, "@data")) {
            in_data = true;
        } else {
            lex.fail("unexpected header line");
        }
    }
    if (!in_data) throw parse_error(source, line_no, "missing @data section");
    if (attrs.empty()) throw parse_error(source, line_no, "no attributes declared");

    std::unordered_map<std::string, std::size_t> by_name;
    for (std::size_t a = 0; a < attrs.size(); ++a) {
        if (!by_name.emplace(attrs[a].name, a).second) {
            throw parse_error(source, 0, "duplicate attribute '" + attrs[a].name + "'");
        }
    }

    std::vector<Column> cols(attrs.size());
    for (std::size_t l = 0; l < label_names.size(); ++l) {
        const auto it = by_name.find(label_names[l]);
        if (it == by_name.end()) {
            throw parse_error(source, 0, "label '" + label_names[l] + "' listed in the XML is not an ARFF attribute");
        }
        if (cols[it->second].is_label) {
            throw parse_error(source, 0, "label '" + label_names[l] + "' listed twice");
        }
        cols[it->second] = {true, l};
    }

    std::vector<std::string> feature_names;
    std::size_t inputs = 0;
    bool has_nominal = false;
    for (std::size_t a = 0; a < attrs.size(); ++a) {
        if (cols[a].is_label) continue;
        ++inputs;
        cols[a].target = feature_names.size();
        if (attrs[a].nominal) {
            has_nominal = true;
            for (const auto &v : attrs[a].values) feature_names.push_back(attrs[a].name + "=" + v);
        } else {
            feature_names.push_back(attrs[a].name);
        }
    }
    const std::size_t d = feature_names.size();
    const std::size_t q = label_names.size();
    if (d == 0) throw parse_error(source, 0, "no feature attributes left after removing labels");

    Matrix features;
    std::vector<std::vector<std::uint8_t>> label_rows;
    RowBuilder row(attrs, cols, d, q);
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = trim(line);
        if (body.empty() || body.front() == '%') continue;
        Lexer lex(body, source, line_no);
        if (lex.accept('{')) {
            row.reset(true);
            if (!lex.accept('}')) {
                do {
                    const std::string idx_text = lex.token(",}");
                    std::size_t idx = 0;
                    const auto [ptr, ec] = std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), idx);
                    if (ec != std::errc{} || ptr != idx_text.data() + idx_text.size() || idx >= attrs.size()) {
                        lex.fail("invalid sparse attribute index '" + idx_text + "'");
                    }
                    row.set(idx, lex.token(",}"), lex);
                } while (lex.accept(','));
                lex.expect('}');
            }
        } else {
            row.reset(false);
            for (std::size_t a = 0; a < attrs.size(); ++a) {
                if (a > 0) lex.expect(',');
                row.set(a, lex.token(","), lex);
            }
            row.finish_dense(lex);
        }
        if (!lex.done()) lex.fail("trailing text after row: '" + std::string(lex.rest()) + "'");
        features.append_row(row.features());
        label_rows.push_back(row.labels());
    }
    if (label_rows.empty()) throw parse_error(source, line_no, "no data rows");

    LabelMatrix labels(label_rows.size(), q);
    for (std::size_t r = 0; r < label_rows.size(); ++r) {
        for (std::size_t l = 0; l < q; ++l) labels.set(r, l, label_rows[r][l]);
    }
    MultiLabelDataset ds(std::move(features), std::move(labels), std::move(feature_names), label_names);
    ds.set_source_info(inputs, has_nominal);
    return ds;
}

MultiLabelDataset load_mulan(const std::filesystem::path &arff_path, const std::filesystem::path &xml_path) {
    const auto labels = read_mulan_labels(xml_path);
    std::ifstream in(arff_path);
    if (!in) {
        throw parse_error(arff_path.string(), 0, "cannot open file");
    }
    return parse_arff(in, labels, arff_path.string());
}

void write_arff(std::ostream &out, const MultiLabelDataset &ds, const std::string &relation) {
    out << "@relation " << quote_name(relation) << "\n\n";
    for (const auto &name : ds.feature_names()) out << "@attribute " << quote_name(name) << " numeric\n";
    for (const auto &name : ds.label_names()) out << "@attribute " << quote_name(name) << " {0,1}\n";
    out << "\n@data\n";
    const auto &x = ds.features();
    const auto &y = ds.labels();
    for (std::size_t r = 0; r < ds.num_instances(); ++r) {
        for (std::size_t c = 0; c < x.cols(); ++c) {
            if (c > 0) out << ',';
            out << format_double(x(r, c));
        }
        for (std::size_t l = 0; l < y.cols(); ++l) out << ',' << static_cast<int>(y(r, l));
        out << '\n';
    }
}

void write_mulan_xml(std::ostream &out, const MultiLabelDataset &ds) {
    out << "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n";
    out << "<labels xmlns=\"http://mulan.sourceforge.net/labels\">\n";
    for (const auto &name : ds.label_names()) out << "<label name=\"" << xml_escape(name) << "\"></label>\n";
    out << "</labels>\n";
}

}  // namespace uclso
