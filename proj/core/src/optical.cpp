#include "orf/optical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include "orf/errors.hpp"

namespace orf {

namespace {

// Maps 16-bit uniform draws to integer noise values distributed as a
// Gaussian rounded to whole counts. Frames need ~10⁶ draws, and pixels are
// 8-bit anyway, so the rounded distribution is all that matters.
class QuantizedGaussian {
public:
    explicit QuantizedGaussian(double sigma) : table_(kSize) {
        const int reach = static_cast<int>(std::ceil(6.0 * sigma)) + 1;
        auto cdf = [sigma](double x) { return 0.5 * std::erfc(-x / (sigma * std::numbers::sqrt2)); };
        std::size_t filled = 0;
        for (int n = -reach; n <= reach; ++n) {
            const std::size_t upto = static_cast<std::size_t>(std::llround(cdf(n + 0.5) * kSize));
            while (filled < std::min(upto, kSize)) table_[filled++] = static_cast<std::int16_t>(n);
        }
        while (filled < kSize) table_[filled++] = static_cast<std::int16_t>(reach);
    }

    // One draw from `rng` seeds a splitmix64 stream for the whole frame.
    template <typename Fn>
    void generate(std::mt19937_64& rng, std::size_t count, Fn&& sink) const {
        std::uint64_t state = rng();
        std::size_t i = 0;
        while (i < count) {
            state += 0x9E3779B97F4A7C15ull;
            std::uint64_t bits = state;
            bits = (bits ^ (bits >> 30)) * 0xBF58476D1CE4E5B9ull;
            bits = (bits ^ (bits >> 27)) * 0x94D049BB133111EBull;
            bits ^= bits >> 31;
            if (i + 4 <= count) {
                sink(i, table_[bits & 0xFFFFu]);
                sink(i + 1, table_[(bits >> 16) & 0xFFFFu]);
                sink(i + 2, table_[(bits >> 32) & 0xFFFFu]);
                sink(i + 3, table_[bits >> 48]);
                i += 4;
                continue;
            }
            for (; i < count; ++i) {
                sink(i, table_[bits & 0xFFFFu]);
                bits >>= 16;
            }
        }
    }

private:
    static constexpr std::size_t kSize = 1u << 16;
    std::vector<std::int16_t> table_;
};

static_assert(sizeof(Rgb) == 3, "Rgb must be tightly packed");

std::uint8_t clamp_channel(int value) { return static_cast<std::uint8_t>(std::clamp(value, 0, 255)); }

}  // namespace

void CameraModel::validate() const {
    if (width_px <= 0) throw ConfigurationError("must be positive", "camera.width_px");
    if (height_px <= 0) throw ConfigurationError("must be positive", "camera.height_px");
    if (!(frame_rate_hz > 0.0)) throw ConfigurationError("must be positive", "camera.frame_rate_hz");
    if (!(hfov_deg > 0.0 && hfov_deg < 180.0)) throw ConfigurationError("must lie in (0, 180)", "camera.hfov_deg");
}

Hsv rgb_to_hsv(Rgb pixel) {
    const double r = pixel.r / 255.0, g = pixel.g / 255.0, b = pixel.b / 255.0;
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double delta = mx - mn;
    double h = 0.0;
    if (delta > 0.0) {
        if (mx == r) {
            h = 60.0 * std::fmod((g - b) / delta, 6.0);
        } else if (mx == g) {
            h = 60.0 * ((b - r) / delta + 2.0);
        } else {
            h = 60.0 * ((r - g) / delta + 4.0);
        }
        if (h < 0.0) h += 360.0;
        if (h >= 360.0) h -= 360.0;
    }
    return {h, mx > 0.0 ? delta / mx : 0.0, mx};
}

Rgb hsv_to_rgb(const Hsv& hsv) {
    const double c = hsv.v * hsv.s;
    const double hp = std::fmod(hsv.h, 360.0) / 60.0;
    const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    std::array<double, 3> rgb{};
    switch (static_cast<int>(hp)) {
        case 0: rgb = {c, x, 0}; break;
        case 1: rgb = {x, c, 0}; break;
        case 2: rgb = {0, c, x}; break;
        case 3: rgb = {0, x, c}; break;
        case 4: rgb = {x, 0, c}; break;
        default: rgb = {c, 0, x}; break;
    }
    const double m = hsv.v - c;
    auto to_byte = [m](double ch) { return clamp_channel(static_cast<int>(std::lround((ch + m) * 255.0))); };
    return {to_byte(rgb[0]), to_byte(rgb[1]), to_byte(rgb[2])};
}

std::optional<PixelPoint> project_to_pixel(const CameraModel& camera, const MountAngles& mount,
                                           const Vec3& world_point) {
    const OrientedFrame frame = OrientedFrame::from_angles(mount);
    if (!frame.in_front(world_point)) return std::nullopt;
    const RelativeAngles rel = frame.relative_angles(world_point);
    const double scale = camera.pixels_per_degree();
    const PixelPoint p{camera.width_px / 2.0 + scale * rel.azimuth_deg,
                       camera.height_px / 2.0 - scale * rel.elevation_deg};
    if (p.u < 0.0 || p.u > camera.width_px || p.v < 0.0 || p.v > camera.height_px) return std::nullopt;
    return p;
}

Frame render_frame(const CameraModel& camera, const MountAngles& mount, const SensorState& sensor,
                   const LabelSpec& label, const PixelNoise& noise, double timestamp_s) {
    Frame frame{camera.width_px, camera.height_px,
                std::vector<Rgb>(static_cast<std::size_t>(camera.width_px) * camera.height_px, label.background),
                timestamp_s};

    if (const auto centre = project_to_pixel(camera, mount, sensor.position)) {
        const double range = sensor.position.norm();
        const double w = rad_to_deg(label.width_m / range) * camera.pixels_per_degree();
        const double h = rad_to_deg(label.height_m / range) * camera.pixels_per_degree();
        // Pixel i is painted when its centre i + 0.5 falls in [c - w/2, c + w/2).
        const int u0 = std::max(0, static_cast<int>(std::ceil(centre->u - w / 2.0 - 0.5)));
        const int u1 = std::min(camera.width_px, static_cast<int>(std::ceil(centre->u + w / 2.0 - 0.5)));
        const int v0 = std::max(0, static_cast<int>(std::ceil(centre->v - h / 2.0 - 0.5)));
        const int v1 = std::min(camera.height_px, static_cast<int>(std::ceil(centre->v + h / 2.0 - 0.5)));
        for (int v = v0; v < v1; ++v) {
            for (int u = u0; u < u1; ++u) frame.at(u, v) = label.color;
        }
    }

    if (noise.sigma > 0.0 && noise.rng != nullptr) {
        const QuantizedGaussian gaussian(noise.sigma);
        auto* channels = reinterpret_cast<std::uint8_t*>(frame.pixels.data());
        gaussian.generate(*noise.rng, frame.pixels.size() * 3, [channels](std::size_t i, int delta) {
            channels[i] = clamp_channel(channels[i] + delta);
        });
    }
    return frame;
}

void HsvThresholds::validate() const {
    auto hue = [](double v, const char* field) {
        if (!(v >= 0.0 && v <= 360.0)) throw ConfigurationError("hue must lie in [0, 360]", field);
    };
    hue(hue_min_deg, "detection.hue_min_deg");
    hue(hue_max_deg, "detection.hue_max_deg");
    if (!(sat_min >= 0.0 && sat_min <= sat_max && sat_max <= 1.0)) {
        throw ConfigurationError("saturation range must be a non-empty subset of [0, 1]", "detection.sat_min");
    }
    if (!(val_min >= 0.0 && val_min <= val_max && val_max <= 1.0)) {
        throw ConfigurationError("value range must be a non-empty subset of [0, 1]", "detection.val_min");
    }
}

bool HsvThresholds::contains(const Hsv& hsv) const {
    const bool hue_ok = hue_min_deg <= hue_max_deg ? (hsv.h >= hue_min_deg && hsv.h <= hue_max_deg)
                                                   : (hsv.h >= hue_min_deg || hsv.h <= hue_max_deg);
    return hue_ok && hsv.s >= sat_min && hsv.s <= sat_max && hsv.v >= val_min && hsv.v <= val_max;
}

std::optional<Detection> detect_label(const Frame& frame, const HsvThresholds& thresholds, int min_area_px) {
    // Saturation and value depend only on the largest and smallest channel, so
    // most pixels are rejected by table before the hue is computed.
    std::vector<std::uint8_t> sv_ok(256 * 256, 0);
    for (int mx = 0; mx < 256; ++mx) {
        const double v = mx / 255.0;
        if (v < thresholds.val_min || v > thresholds.val_max) continue;
        for (int mn = 0; mn <= mx; ++mn) {
            const double sat = mx > 0 ? (v - mn / 255.0) / v : 0.0;
            sv_ok[mx * 256 + mn] = sat >= thresholds.sat_min && sat <= thresholds.sat_max;
        }
    }

    const std::size_t count = frame.pixels.size();
    // 0 = background, 1 = unvisited foreground, 2 = visited.
    std::vector<std::uint8_t> mask(count, 0);
    bool any = false;
    for (std::size_t i = 0; i < count; ++i) {
        const Rgb p = frame.pixels[i];
        const int mx = std::max({p.r, p.g, p.b});
        const int mn = std::min({p.r, p.g, p.b});
        if (!sv_ok[mx * 256 + mn]) continue;
        if (thresholds.contains(rgb_to_hsv(p))) {
            mask[i] = 1;
            any = true;
        }
    }
    if (!any) return std::nullopt;

    std::optional<Detection> best;
    std::vector<std::size_t> stack;
    for (std::size_t seed = 0; seed < count; ++seed) {
        if (mask[seed] != 1) continue;
        Detection d;
        d.bbox = {frame.width, frame.height, -1, -1};
        double sum_u = 0.0, sum_v = 0.0;
        mask[seed] = 2;
        stack.push_back(seed);
        while (!stack.empty()) {
            const std::size_t idx = stack.back();
            stack.pop_back();
            const int u = static_cast<int>(idx % frame.width);
            const int v = static_cast<int>(idx / frame.width);
            ++d.area_px;
            sum_u += u + 0.5;
            sum_v += v + 0.5;
            d.bbox.u_min = std::min(d.bbox.u_min, u);
            d.bbox.u_max = std::max(d.bbox.u_max, u);
            d.bbox.v_min = std::min(d.bbox.v_min, v);
            d.bbox.v_max = std::max(d.bbox.v_max, v);
            auto visit = [&](std::size_t n) {
                if (mask[n] == 1) {
                    mask[n] = 2;
                    stack.push_back(n);
                }
            };
            if (u > 0) visit(idx - 1);
            if (u + 1 < frame.width) visit(idx + 1);
            if (v > 0) visit(idx - frame.width);
            if (v + 1 < frame.height) visit(idx + frame.width);
        }
        if (!best || d.area_px > best->area_px) {
            d.centroid = {sum_u / d.area_px, sum_v / d.area_px};
            best = d;
        }
    }

    if (!best || best->area_px < min_area_px) return std::nullopt;
    best->offset_u = best->centroid.u - frame.width / 2.0;
    best->offset_v = best->centroid.v - frame.height / 2.0;
    return best;
}

ServoGains ServoGains::matched(const CameraModel& camera) {
    const double k = 1.0 / camera.pixels_per_degree();
    return {k, k};
}

MountAngles offsets_to_angles(double offset_u, double offset_v, const ServoGains& gains) {
    return {gains.pan_deg_per_px * offset_u, -gains.tilt_deg_per_px * offset_v};
}

void write_ppm(const Frame& frame, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "P6\n" << frame.width << ' ' << frame.height << "\n255\n";
    for (const Rgb& p : frame.pixels) {
        const char bytes[3] = {static_cast<char>(p.r), static_cast<char>(p.g), static_cast<char>(p.b)};
        out.write(bytes, 3);
    }
    if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace orf
