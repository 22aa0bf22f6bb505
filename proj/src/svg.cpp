#include "tailwalk/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tailwalk/errors.hpp"

namespace tailwalk {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 400;
constexpr int kMargin = 56;

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void axis_frame(std::string& out, double x0, double x1, double y0, double y1,
                const std::string& x_label, const std::string& y_label) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "<rect x='%d' y='%d' width='%d' height='%d' fill='none' stroke='black'/>\n",
                  kMargin, kMargin, kWidth - 2 * kMargin, kHeight - 2 * kMargin);
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x='%d' y='%d' font-size='12' text-anchor='middle'>%s</text>\n",
                  kWidth / 2, kHeight - 12, x_label.c_str());
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x='14' y='%d' font-size='12' text-anchor='middle' "
                  "transform='rotate(-90 14 %d)'>%s</text>\n",
                  kHeight / 2, kHeight / 2, y_label.c_str());
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x='%d' y='%d' font-size='10'>%s</text>\n"
                  "<text x='%d' y='%d' font-size='10' text-anchor='end'>%s</text>\n",
                  kMargin, kHeight - kMargin + 14, fmt(x0).c_str(), kWidth - kMargin,
                  kHeight - kMargin + 14, fmt(x1).c_str());
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x='%d' y='%d' font-size='10' text-anchor='end'>%s</text>\n"
                  "<text x='%d' y='%d' font-size='10' text-anchor='end'>%s</text>\n",
                  kMargin - 4, kHeight - kMargin, fmt(y0).c_str(), kMargin - 4, kMargin + 10,
                  fmt(y1).c_str());
    out += buf;
}

}  // namespace

std::string render_curve_svg(const std::vector<double>& times, const std::vector<double>& values,
                             double marker_t, const std::string& y_label) {
    if (times.empty() || times.size() != values.size())
        throw InputError("render_curve_svg: empty or mismatched data");
    double x0 = times.front(), x1 = times.back();
    double y0 = 0.0, y1 = *std::max_element(values.begin(), values.end());
    if (y1 <= y0) y1 = 1.0;
    double xr = x1 > x0 ? x1 - x0 : 1.0;
    auto px = [&](double t) { return kMargin + (t - x0) / xr * (kWidth - 2 * kMargin); };
    auto py = [&](double v) {
        return kHeight - kMargin - (v - y0) / (y1 - y0) * (kHeight - 2 * kMargin);
    };

    std::string out;
    char buf[128];
    out += "<svg xmlns='http://www.w3.org/2000/svg' width='640' height='400'>\n";
    out += "<rect width='640' height='400' fill='white'/>\n";
    axis_frame(out, x0, x1, y0, y1, "t", y_label);
    out += "<polyline fill='none' stroke='steelblue' stroke-width='1.5' points='";
    for (size_t i = 0; i < times.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(times[i]), py(values[i]));
        out += buf;
    }
    out += "'/>\n";
    if (std::isfinite(marker_t) && marker_t >= x0 && marker_t <= x1) {
        std::snprintf(buf, sizeof buf,
                      "<line x1='%.2f' y1='%d' x2='%.2f' y2='%d' stroke='firebrick' "
                      "stroke-dasharray='5,4'/>\n",
                      px(marker_t), kMargin, px(marker_t), kHeight - kMargin);
        out += buf;
    }
    out += "</svg>\n";
    return out;
}

std::string render_curve_svg(const FidelityCurve& curve, double marker_t) {
    return render_curve_svg(curve.times, curve.values, marker_t, "fidelity");
}

std::string render_spectrum_svg(const std::vector<BoundState>& states) {
    double lo = -2.5, hi = 2.5;
    for (const BoundState& s : states) {
        lo = std::min(lo, s.lambda - 1.0);
        hi = std::max(hi, s.lambda + 1.0);
    }
    auto px = [&](double v) { return kMargin + (v - lo) / (hi - lo) * (kWidth - 2 * kMargin); };
    const int ymid = kHeight / 2;

    std::string out;
    char buf[256];
    out += "<svg xmlns='http://www.w3.org/2000/svg' width='640' height='400'>\n";
    out += "<rect width='640' height='400' fill='white'/>\n";
    // continuous band [-2, 2]
    std::snprintf(buf, sizeof buf,
                  "<rect x='%.2f' y='%d' width='%.2f' height='%d' fill='lightsteelblue' "
                  "opacity='0.6'/>\n",
                  px(-2.0), kMargin, px(2.0) - px(-2.0), kHeight - 2 * kMargin);
    out += buf;
    std::snprintf(buf, sizeof buf, "<line x1='%d' y1='%d' x2='%d' y2='%d' stroke='black'/>\n",
                  kMargin, ymid, kWidth - kMargin, ymid);
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x='%d' y='%d' font-size='10'>%s</text>\n"
                  "<text x='%d' y='%d' font-size='10' text-anchor='end'>%s</text>\n",
                  kMargin, ymid + 16, fmt(lo).c_str(), kWidth - kMargin, ymid + 16,
                  fmt(hi).c_str());
    out += buf;
    for (const BoundState& s : states) {
        std::snprintf(buf, sizeof buf,
                      "<circle cx='%.2f' cy='%d' r='4' fill='firebrick'/>\n"
                      "<text x='%.2f' y='%d' font-size='10' text-anchor='middle'>%s</text>\n",
                      px(s.lambda), ymid, px(s.lambda), ymid - 10, fmt(s.lambda).c_str());
        out += buf;
    }
    std::snprintf(buf, sizeof buf,
                  "<text x='%d' y='%d' font-size='12' text-anchor='middle'>eigenvalue</text>\n",
                  kWidth / 2, kHeight - 12);
    out += buf;
    out += "</svg>\n";
    return out;
}

}  // namespace tailwalk
