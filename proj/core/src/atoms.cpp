#include "indep/atoms.hpp"

#include <algorithm>
#include <cctype>
#include <iterator>
#include <sstream>
#include <utility>

namespace indep {

namespace {

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

VarSet sorted_unique(std::vector<Variable> vs) {
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

VarSet to_set(std::span<const Variable> seq) {
    return sorted_unique(std::vector<Variable>(seq.begin(), seq.end()));
}

// Recursive-descent reader over a single atom.
class AtomReader {
public:
    explicit AtomReader(std::string_view text) : text_(text) {}

    Atom read() {
        VarSet left = varlist();
        skip_ws();
        if (!at_separator()) fail("expected '_|_'");
        pos_ += 3;
        bool conditional = false;
        VarSet condition;
        if (pos_ < text_.size() && text_[pos_] == '{') {
            ++pos_;
            conditional = true;
            condition = varlist();
            skip_ws();
            expect('}');
        }
        VarSet right = varlist();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        if (conditional)
            return Atom::conditional(std::move(left), std::move(right), std::move(condition));
        return Atom::marginal(std::move(left), std::move(right));
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg + " at position " + std::to_string(pos_), pos_);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0)
            ++pos_;
    }

    bool at_separator() const { return text_.substr(pos_).starts_with("_|_"); }

    void expect(char c) {
        if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    VarSet varlist() {
        skip_ws();
        if (text_.substr(pos_).starts_with("(")) {
            ++pos_;
            skip_ws();
            expect(')');
            return {};
        }
        std::vector<Variable> vars;
        vars.push_back(identifier());
        for (;;) {
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == ',') {
                ++pos_;
                vars.push_back(identifier());
            } else {
                break;
            }
        }
        return sorted_unique(std::move(vars));
    }

    Variable identifier() {
        skip_ws();
        if (pos_ >= text_.size() || at_separator() || (!is_ident_start(text_[pos_]) && !is_ident_char(text_[pos_])))
            fail("expected variable name");
        const std::size_t start = pos_;
        if (!is_ident_start(text_[pos_])) bad_identifier(start);
        while (pos_ < text_.size() && is_ident_char(text_[pos_]) && !at_separator()) ++pos_;
        // A name directly followed by an illegal character is reported as one bad identifier.
        if (pos_ < text_.size() && !at_separator() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
            text_[pos_] != ',' && text_[pos_] != '}')
            bad_identifier(start);
        return Variable(std::string(text_.substr(start, pos_ - start)));
    }

    [[noreturn]] void bad_identifier(std::size_t start) const {
        std::size_t end = start;
        while (end < text_.size() && !std::isspace(static_cast<unsigned char>(text_[end])) && text_[end] != ',' &&
               text_[end] != '}')
            ++end;
        throw ParseError("invalid variable name '" + std::string(text_.substr(start, end - start)) +
                             "' at position " + std::to_string(start),
                         start);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())) != 0) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())) != 0) s.remove_suffix(1);
    return s;
}

VarSet parse_var_declaration(std::string_view body, std::size_t line) {
    std::vector<Variable> vars;
    std::size_t start = 0;
    while (start <= body.size()) {
        std::size_t comma = body.find(',', start);
        if (comma == std::string_view::npos) comma = body.size();
        std::string_view name = trim(body.substr(start, comma - start));
        if (!name.empty()) {
            if (!Variable::is_valid_name(name))
                throw ParseError("line " + std::to_string(line) + ": invalid variable name '" +
                                     std::string(name) + "'",
                                 start, line);
            vars.emplace_back(std::string(name));
        }
        start = comma + 1;
    }
    return sorted_unique(std::move(vars));
}

}  // namespace

Variable::Variable(std::string name) : name_(std::move(name)) {
    if (!is_valid_name(name_)) throw std::invalid_argument("invalid variable name '" + name_ + "'");
}

bool Variable::is_valid_name(std::string_view name) noexcept {
    if (name.empty() || !is_ident_start(name.front())) return false;
    return std::all_of(name.begin(), name.end(), is_ident_char);
}

VarSet make_varset(std::vector<Variable> vars) { return sorted_unique(std::move(vars)); }

VarSet make_varset(std::initializer_list<std::string_view> names) {
    std::vector<Variable> vars;
    for (auto n : names) vars.emplace_back(std::string(n));
    return sorted_unique(std::move(vars));
}

VarSet set_union(const VarSet& a, const VarSet& b) {
    VarSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

VarSet set_intersection(const VarSet& a, const VarSet& b) {
    VarSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

VarSet set_difference(const VarSet& a, const VarSet& b) {
    VarSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool is_subset(const VarSet& sub, const VarSet& super) {
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

bool contains(const VarSet& set, const Variable& v) {
    return std::binary_search(set.begin(), set.end(), v);
}

Atom::Atom(VarSet left, VarSet right, VarSet condition, AtomKind kind)
    : left_(std::move(left)), right_(std::move(right)), condition_(std::move(condition)), kind_(kind) {}

Atom Atom::marginal(VarSet left, VarSet right) {
    return Atom(sorted_unique(std::move(left)), sorted_unique(std::move(right)), {}, AtomKind::marginal);
}

Atom Atom::conditional(VarSet left, VarSet right, VarSet condition) {
    return Atom(sorted_unique(std::move(left)), sorted_unique(std::move(right)),
                sorted_unique(std::move(condition)), AtomKind::conditional);
}

VarSet Atom::vars() const { return set_union(set_union(left_, right_), condition_); }

Atom Atom::swapped() const { return Atom(right_, left_, condition_, kind_); }

Atom Atom::lifted() const { return Atom(left_, right_, condition_, AtomKind::conditional); }

std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    if (auto c = a.left_ <=> b.left_; c != 0) return c;
    if (auto c = a.right_ <=> b.right_; c != 0) return c;
    return a.condition_ <=> b.condition_;
}

Atom canonicalize(std::span<const Variable> left, std::span<const Variable> right,
                  std::span<const Variable> condition) {
    if (condition.empty()) return Atom::marginal(to_set(left), to_set(right));
    return Atom::conditional(to_set(left), to_set(right), to_set(condition));
}

AtomSet::AtomSet(std::vector<Atom> atoms, VarSet extra_vars) {
    for (const auto& a : atoms) add(a);
    declare(extra_vars);
}

void AtomSet::add(const Atom& a) {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a);
    if (it == atoms_.end() || *it != a) atoms_.insert(it, a);
    declare(a.vars());
}

void AtomSet::declare(const Variable& v) {
    auto it = std::lower_bound(universe_.begin(), universe_.end(), v);
    if (it == universe_.end() || *it != v) universe_.insert(it, v);
}

void AtomSet::declare(const VarSet& vs) { universe_ = set_union(universe_, vs); }

bool AtomSet::contains(const Atom& a) const {
    return std::binary_search(atoms_.begin(), atoms_.end(), a);
}

bool AtomSet::all_marginal() const {
    return std::all_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.is_marginal(); });
}

ParseError::ParseError(const std::string& what, std::size_t position, std::size_t line)
    : std::runtime_error(what), position_(position), line_(line) {}

Atom parse_atom(std::string_view text) { return AtomReader(text).read(); }

std::string format_varlist(const VarSet& vs) {
    if (vs.empty()) return "()";
    std::string out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i != 0) out += ',';
        out += vs[i].name();
    }
    return out;
}

std::string format_atom(const Atom& a) {
    std::string out = format_varlist(a.left());
    out += " _|_";
    if (!a.is_marginal()) out += "{" + format_varlist(a.condition()) + "}";
    out += ' ';
    out += format_varlist(a.right());
    return out;
}

AtomSet parse_atom_list(std::string_view text) {
    AtomSet sigma;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t semi = text.find(';', start);
        if (semi == std::string_view::npos) semi = text.size();
        std::string_view piece = trim(text.substr(start, semi - start));
        if (!piece.empty()) {
            try {
                sigma.add(parse_atom(piece));
            } catch (const ParseError& e) {
                throw ParseError("in '" + std::string(piece) + "': " + e.what(), e.position());
            }
        }
        start = semi + 1;
    }
    return sigma;
}

AtomSet parse_atom_file(std::string_view text) {
    AtomSet sigma;
    std::size_t line_no = 0;
    bool seen_content = false;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = trim(text.substr(start, nl - start));
        ++line_no;
        start = nl + 1;
        if (line.empty() || line.front() == '#') continue;
        if (!seen_content && line.starts_with("vars:")) {
            sigma.declare(parse_var_declaration(line.substr(5), line_no));
            seen_content = true;
            continue;
        }
        seen_content = true;
        try {
            sigma.add(parse_atom(line));
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), e.position(), line_no);
        } catch (const std::invalid_argument& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), 0, line_no);
        }
    }
    return sigma;
}

std::string format_atom_file(const AtomSet& sigma) {
    std::ostringstream out;
    out << "vars: ";
    for (std::size_t i = 0; i < sigma.universe().size(); ++i) {
        if (i != 0) out << ',';
        out << sigma.universe()[i].name();
    }
    out << '\n';
    for (const auto& a : sigma) out << format_atom(a) << '\n';
    return out.str();
}

}  // namespace indep
