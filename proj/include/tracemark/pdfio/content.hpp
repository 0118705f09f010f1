#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tracemark/pdfio/object.hpp"

namespace tracemark::pdfio {

struct ContentOp {
    std::string op;
    std::vector<Object> operands;
    /// Byte range in the decoded stream, so unchanged operators are copied verbatim.
    std::size_t begin = 0;
    std::size_t end = 0;
};

std::vector<ContentOp> parse_content(std::string_view data);
std::string write_op(const ContentOp& op);

struct Matrix {
    double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

    static Matrix translate(double x, double y) { return {1, 0, 0, 1, x, y}; }
    static Matrix from_operands(const std::vector<Object>& v);
    /// this * m (apply this first, then m).
    Matrix operator*(const Matrix& m) const;
    void apply(double x, double y, double& ox, double& oy) const;
};

} // namespace tracemark::pdfio
