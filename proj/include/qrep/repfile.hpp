#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <qrep/rep.hpp>

namespace qrep {

// Line-oriented text format for representations:
//
//   qrep 1
//   field Q              (or: field Fp 5)
//   vertices x y
//   arrow a1 x y
//   arrow a2 x y
//   dims 1 2
//   mat a1 2 1
//   0
//   1
//   mat a2 2 1
//   1
//   0
//   end
//
// serialize_rep emits vertices, arrows and matrix blocks in quiver order and
// entries in the canonical form of S::str(), so serialize after parse
// reproduces a canonical file byte for byte. parse_rep accepts arrow and
// vertex lists in any order; dims are positional relative to the vertices
// line and matrix blocks are matched by arrow id.

template <class S>
std::string serialize_rep(const Rep<S>& m) {
    std::ostringstream out;
    out << "qrep 1\n";
    if (m.field.rational)
        out << "field Q\n";
    else
        out << "field Fp " << m.field.p << "\n";
    out << "vertices";
    for (size_t v = 0; v < m.quiver.num_vertices(); ++v) out << ' ' << m.quiver.vertex(v);
    out << '\n';
    for (const auto& a : m.quiver.arrows())
        out << "arrow " << a.id << ' ' << a.src << ' ' << a.tgt << '\n';
    out << "dims";
    for (size_t d : m.dims) out << ' ' << d;
    out << '\n';
    for (size_t a = 0; a < m.quiver.num_arrows(); ++a) {
        const Matrix<S>& x = m.mats[a];
        out << "mat " << m.quiver.arrow(a).id << ' ' << x.rows() << ' ' << x.cols() << '\n';
        for (size_t i = 0; i < x.rows(); ++i) {
            for (size_t j = 0; j < x.cols(); ++j) {
                if (j) out << ' ';
                out << x.at(i, j).str();
            }
            out << '\n';
        }
    }
    out << "end\n";
    return out.str();
}

namespace detail {

inline std::vector<std::string> repfile_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

inline std::vector<std::string> repfile_tokens(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> toks;
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

inline size_t repfile_size(const std::string& tok, const char* what) {
    size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(tok, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != tok.size())
        throw std::runtime_error(std::string("parse_rep: bad ") + what + " '" + tok + "'");
    return static_cast<size_t>(v);
}

template <class S>
S repfile_scalar(const std::string& tok, const FieldInfo& f) {
    if constexpr (std::is_same_v<S, Rat>) {
        (void)f;
        try {
            return Rat::from_string(tok);
        } catch (const std::exception&) {
            throw std::runtime_error("parse_rep: bad entry '" + tok + "'");
        }
    } else {
        size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(tok, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != tok.size())
            throw std::runtime_error("parse_rep: bad entry '" + tok + "'");
        return scalar_traits<S>::from_long(v, f);
    }
}

}  // namespace detail

// Field named in the header, without committing to a scalar type. Used to
// dispatch between parse_rep<Rat> and parse_rep<Fp>.
inline FieldInfo repfile_field(const std::string& text) {
    auto lines = detail::repfile_lines(text);
    if (lines.empty() || detail::repfile_tokens(lines[0]) != std::vector<std::string>{"qrep", "1"})
        throw std::runtime_error("parse_rep: missing 'qrep 1' header");
    for (const auto& line : lines) {
        auto toks = detail::repfile_tokens(line);
        if (toks.empty() || toks[0] != "field") continue;
        if (toks.size() == 2 && toks[1] == "Q") return FieldInfo::Q();
        if (toks.size() == 3 && toks[1] == "Fp") {
            size_t p = detail::repfile_size(toks[2], "modulus");
            if (p < 2) throw std::runtime_error("parse_rep: bad modulus");
            return FieldInfo::Fp(static_cast<long long>(p));
        }
        throw std::runtime_error("parse_rep: bad field line '" + line + "'");
    }
    throw std::runtime_error("parse_rep: missing field line");
}

template <class S>
Rep<S> parse_rep(const std::string& text) {
    FieldInfo f = repfile_field(text);
    if (f.rational != std::is_same_v<S, Rat>)
        throw std::runtime_error("parse_rep: field mismatch, file says " + f.str());

    auto lines = detail::repfile_lines(text);
    size_t idx = 0;
    auto next = [&]() -> std::vector<std::string> {
        if (idx >= lines.size()) throw std::runtime_error("parse_rep: unexpected end of file");
        return detail::repfile_tokens(lines[idx++]);
    };

    next();  // qrep 1, checked by repfile_field
    next();  // field line, ditto

    auto vtoks = next();
    if (vtoks.empty() || vtoks[0] != "vertices" || vtoks.size() < 2)
        throw std::runtime_error("parse_rep: missing vertices line");
    std::vector<std::string> file_vertices(vtoks.begin() + 1, vtoks.end());

    std::vector<Quiver::Arrow> file_arrows;
    std::vector<std::string> toks = next();
    while (!toks.empty() && toks[0] == "arrow") {
        if (toks.size() != 4) throw std::runtime_error("parse_rep: bad arrow line");
        file_arrows.push_back({toks[1], toks[2], toks[3]});
        toks = next();
    }

    if (toks.empty() || toks[0] != "dims" || toks.size() != file_vertices.size() + 1)
        throw std::runtime_error("parse_rep: missing or missized dims line");
    std::unordered_map<std::string, size_t> dim_of;
    for (size_t v = 0; v < file_vertices.size(); ++v)
        dim_of[file_vertices[v]] = detail::repfile_size(toks[v + 1], "dimension");

    std::unordered_map<std::string, Matrix<S>> mat_of;
    toks = next();
    while (!toks.empty() && toks[0] == "mat") {
        if (toks.size() != 4) throw std::runtime_error("parse_rep: bad mat line");
        std::string id = toks[1];
        size_t rows = detail::repfile_size(toks[2], "row count");
        size_t cols = detail::repfile_size(toks[3], "column count");
        if (mat_of.count(id)) throw std::runtime_error("parse_rep: duplicate mat block " + id);
        Matrix<S> x(rows, cols);
        for (size_t i = 0; i < rows; ++i) {
            if (idx >= lines.size()) throw std::runtime_error("parse_rep: unexpected end of file");
            auto row = detail::repfile_tokens(lines[idx++]);
            if (row.size() != cols)
                throw std::runtime_error("parse_rep: matrix row length mismatch in " + id);
            for (size_t j = 0; j < cols; ++j) x.at(i, j) = detail::repfile_scalar<S>(row[j], f);
        }
        mat_of.emplace(id, std::move(x));
        toks = next();
    }

    if (toks != std::vector<std::string>{"end"})
        throw std::runtime_error("parse_rep: missing end line");
    while (idx < lines.size())
        if (!detail::repfile_tokens(lines[idx++]).empty())
            throw std::runtime_error("parse_rep: trailing content after end");

    Quiver q;
    try {
        q = Quiver(file_vertices, file_arrows);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("parse_rep: bad quiver: ") + e.what());
    }
    std::vector<size_t> dims(q.num_vertices());
    for (size_t v = 0; v < q.num_vertices(); ++v) dims[v] = dim_of.at(q.vertex(v));
    std::vector<Matrix<S>> mats;
    for (size_t a = 0; a < q.num_arrows(); ++a) {
        auto it = mat_of.find(q.arrow(a).id);
        if (it == mat_of.end())
            throw std::runtime_error("parse_rep: missing mat block " + q.arrow(a).id);
        mats.push_back(it->second);
    }
    try {
        return Rep<S>(std::move(q), f, std::move(dims), std::move(mats));
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("parse_rep: ") + e.what());
    }
}

}  // namespace qrep
