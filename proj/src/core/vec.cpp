// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/core/vec.hpp"

namespace matforge {

Vec3 Affine::normal(Vec3 n) const {
    // cofactor matrix == det * inverse-transpose; the scale drops out after normalisation
    const auto& a = m;
    Vec3 c0{a[1][1] * a[2][2] - a[1][2] * a[2][1], a[1][2] * a[2][0] - a[1][0] * a[2][2],
            a[1][0] * a[2][1] - a[1][1] * a[2][0]};
    Vec3 c1{a[0][2] * a[2][1] - a[0][1] * a[2][2], a[0][0] * a[2][2] - a[0][2] * a[2][0],
            a[0][1] * a[2][0] - a[0][0] * a[2][1]};
    Vec3 c2{a[0][1] * a[1][2] - a[0][2] * a[1][1], a[0][2] * a[1][0] - a[0][0] * a[1][2],
            a[0][0] * a[1][1] - a[0][1] * a[1][0]};
    float det = a[0][0] * c0.x + a[0][1] * c0.y + a[0][2] * c0.z;
    Vec3 out = c0 * n.x + c1 * n.y + c2 * n.z;
    return normalize(det < 0 ? -out : out);
}

Affine Affine::translation(Vec3 t) {
    Affine a;
    a.m[0][3] = t.x;
    a.m[1][3] = t.y;
    a.m[2][3] = t.z;
    return a;
}

Affine Affine::scaling(Vec3 s) {
    Affine a;
    a.m[0][0] = s.x;
    a.m[1][1] = s.y;
    a.m[2][2] = s.z;
    return a;
}

Affine Affine::rotation_y(float angle) { return rotation({0, 1, 0}, angle); }

Affine Affine::rotation(Vec3 axis, float angle) {
    axis = normalize(axis);
    float c = std::cos(angle), s = std::sin(angle), t = 1 - c;
    float x = axis.x, y = axis.y, z = axis.z;
    Affine a;
    a.m[0][0] = t * x * x + c;
    a.m[0][1] = t * x * y - s * z;
    a.m[0][2] = t * x * z + s * y;
    a.m[1][0] = t * x * y + s * z;
    a.m[1][1] = t * y * y + c;
    a.m[1][2] = t * y * z - s * x;
    a.m[2][0] = t * x * z - s * y;
    a.m[2][1] = t * y * z + s * x;
    a.m[2][2] = t * z * z + c;
    return a;
}

Affine operator*(const Affine& a, const Affine& b) {
    Affine r;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 4; ++j) {
            float v = (j == 3) ? a.m[i][3] : 0.0f;
            for (int k = 0; k < 3; ++k) v += a.m[i][k] * b.m[k][j];
            r.m[i][j] = v;
        }
    }
    return r;
}

}  // namespace matforge
