#pragma once

#include <functional>
#include <string>
#include <vector>

namespace preempt::svg {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Curve {
    std::string label;
    std::function<double(double)> f;
};

struct ScatterOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    int width = 640;
    int height = 420;
};

/// Scatter of `points` with optional fitted curves drawn across the x range.
std::string scatter(const std::vector<Point>& points, const std::vector<Curve>& curves, const ScatterOptions& opts);

struct Bar {
    std::string label;
    double value = 0.0;
    double error = 0.0;  // half-length of the error bar; 0 draws none
};

struct BarOptions {
    std::string title;
    std::string y_label;
    int width = 640;
    int height = 420;
};

/// Vertical bars from a zero baseline (negative values hang below it).
std::string bar_chart(const std::vector<Bar>& bars, const BarOptions& opts);

std::string escape(const std::string& s);

}  // namespace preempt::svg
