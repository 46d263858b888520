#pragma once

#include <compare>
#include <ostream>

#include "crosseai/saliency_map.hpp"

namespace crosseai {

/// Integer pixel rectangle; (x1, y1) inclusive, (x2, y2) exclusive.
struct BoundingBox {
    int x1 = 0;
    int y1 = 0;
    int x2 = 0;
    int y2 = 0;

    int width() const noexcept { return x2 - x1; }
    int height() const noexcept { return y2 - y1; }
    long long area() const noexcept { return static_cast<long long>(width()) * height(); }

    bool valid_within(Dims d) const noexcept { return 0 <= x1 && x1 < x2 && x2 <= d.width && 0 <= y1 && y1 < y2 && y2 <= d.height; }

    bool contains(const BoundingBox& o) const noexcept { return x1 <= o.x1 && y1 <= o.y1 && o.x2 <= x2 && o.y2 <= y2; }
    bool contains_pixel(int x, int y) const noexcept { return x1 <= x && x < x2 && y1 <= y && y < y2; }
    bool overlaps(const BoundingBox& o) const noexcept { return x1 < o.x2 && o.x1 < x2 && y1 < o.y2 && o.y1 < y2; }

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
    friend auto operator<=>(const BoundingBox&, const BoundingBox&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const BoundingBox& b) {
    return os << '(' << b.x1 << ',' << b.y1 << ',' << b.x2 << ',' << b.y2 << ')';
}

}  // namespace crosseai
