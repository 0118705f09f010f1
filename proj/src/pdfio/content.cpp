#include "tracemark/pdfio/content.hpp"

namespace tracemark::pdfio {

std::vector<ContentOp> parse_content(std::string_view data) {
    std::vector<ContentOp> ops;
    Lexer lx(data);
    ContentOp cur;
    bool fresh = true;
    for (;;) {
        lx.skip_whitespace();
        if (lx.pos() >= data.size()) break;
        if (fresh) {
            cur.begin = lx.pos();
            fresh = false;
        }
        std::string kw;
        auto obj = lx.next(&kw);
        if (obj) {
            cur.operands.push_back(std::move(*obj));
            continue;
        }
        cur.op = kw;
        if (kw == "BI") {
            // Inline image: dictionary pairs up to ID, binary data up to EI.
            std::size_t id = data.find("ID", lx.pos());
            if (id == std::string_view::npos) throw PdfSyntaxError(lx.pos(), "inline image without ID");
            std::size_t p = id + 3;
            for (;;) {
                p = data.find("EI", p);
                if (p == std::string_view::npos) throw PdfSyntaxError(id, "inline image without EI");
                const bool before = p > 0 && is_pdf_whitespace(data[p - 1]);
                const bool after = p + 2 >= data.size() || is_pdf_whitespace(data[p + 2]);
                if (before && after) break;
                p += 2;
            }
            lx.seek(p + 2);
        }
        cur.end = lx.pos();
        ops.push_back(std::move(cur));
        cur = ContentOp{};
        fresh = true;
    }
    if (!cur.operands.empty()) throw PdfSyntaxError(data.size(), "operands without operator");
    return ops;
}

std::string write_op(const ContentOp& op) {
    std::string out;
    for (const Object& o : op.operands) {
        out += write_object(o);
        out += ' ';
    }
    out += op.op;
    return out;
}

Matrix Matrix::from_operands(const std::vector<Object>& v) {
    if (v.size() != 6) throw Error("matrix needs six operands");
    return {v[0].as_number(), v[1].as_number(), v[2].as_number(),
            v[3].as_number(), v[4].as_number(), v[5].as_number()};
}

Matrix Matrix::operator*(const Matrix& m) const {
    return {a * m.a + b * m.c,       a * m.b + b * m.d,       c * m.a + d * m.c,
            c * m.b + d * m.d,       e * m.a + f * m.c + m.e, e * m.b + f * m.d + m.f};
}

void Matrix::apply(double x, double y, double& ox, double& oy) const {
    ox = a * x + c * y + e;
    oy = b * x + d * y + f;
}

} // namespace tracemark::pdfio
