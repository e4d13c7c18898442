#!/usr/bin/env python3
# Copyright 2026 The ladder360 Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Independent ERP -> CMP -> ERP roundtrip of a sinusoid card (luma only).

Written directly from the face basis table and longitude/latitude formulas
with numpy; shares nothing with the C++ converter. Prints the roundtrip
PSNR/WS-PSNR that the acceptance suite freezes.
"""
import sys
import numpy as np

# center, right, down per face, in the stable face order
FACES = [
    ((0, 0, 1), (1, 0, 0), (0, -1, 0)),    # front
    ((0, 0, -1), (-1, 0, 0), (0, -1, 0)),  # back
    ((-1, 0, 0), (0, 0, 1), (0, -1, 0)),   # left
    ((1, 0, 0), (0, 0, -1), (0, -1, 0)),   # right
    ((0, 1, 0), (1, 0, 0), (0, 0, 1)),     # top
    ((0, -1, 0), (1, 0, 0), (0, 0, -1)),   # bottom
]


def sinusoid(w, h, fx, fy):
    i = np.arange(w)[None, :]
    j = np.arange(h)[:, None]
    v = 127.5 + 127.5 * np.sin(2 * np.pi * (fx * (i + 0.5) / w + fy * (j + 0.5) / h))
    return np.floor(v + 0.5).clip(0, 255)


def bilinear(img, x, y, wrap):
    h, w = img.shape
    x0 = np.floor(x).astype(np.int64)
    y0 = np.floor(y).astype(np.int64)
    ax, ay = x - x0, y - y0

    def px(xx, yy):
        xx = np.mod(xx, w) if wrap else np.clip(xx, 0, w - 1)
        return img[np.clip(yy, 0, h - 1), xx]

    top = (1 - ax) * px(x0, y0) + ax * px(x0 + 1, y0)
    bot = (1 - ax) * px(x0, y0 + 1) + ax * px(x0 + 1, y0 + 1)
    return np.floor((1 - ay) * top + ay * bot + 0.5).clip(0, 255)


def erp_to_faces(erp, n):
    h, w = erp.shape
    c = 2 * (np.arange(n) + 0.5) / n - 1
    u, v = np.meshgrid(c, c)
    faces = []
    for center, right, down in FACES:
        d = [center[k] + u * right[k] + v * down[k] for k in range(3)]
        norm = np.sqrt(d[0] ** 2 + d[1] ** 2 + d[2] ** 2)
        x, y, z = d[0] / norm, d[1] / norm, d[2] / norm
        lon = np.arctan2(x, z)
        lat = np.arcsin(np.clip(y, -1, 1))
        ex = (lon + np.pi) / (2 * np.pi) * w - 0.5
        ey = (np.pi / 2 - lat) / np.pi * h - 0.5
        faces.append(bilinear(erp, ex, ey, True))
    return faces


def faces_to_erp(faces, w, h):
    n = faces[0].shape[0]
    lon = (np.arange(w) + 0.5) / w * 2 * np.pi - np.pi
    lat = np.pi / 2 - (np.arange(h) + 0.5) / h * np.pi
    lon, lat = np.meshgrid(lon, lat)
    x, y, z = np.cos(lat) * np.sin(lon), np.sin(lat), np.cos(lat) * np.cos(lon)
    ax, ay, az = np.abs(x), np.abs(y), np.abs(z)
    m = np.maximum(np.maximum(ax, ay), az)
    # tie priority: front/back, then left/right, then top/bottom
    face = np.where(az == m, np.where(z > 0, 0, 1),
                    np.where(ax == m, np.where(x < 0, 2, 3), np.where(y > 0, 4, 5)))
    out = np.zeros((h, w))
    for k, (center, right, down) in enumerate(FACES):
        sel = face == k
        dc = x[sel] * center[0] + y[sel] * center[1] + z[sel] * center[2]
        fu = (x[sel] * right[0] + y[sel] * right[1] + z[sel] * right[2]) / dc
        fv = (x[sel] * down[0] + y[sel] * down[1] + z[sel] * down[2]) / dc
        px = (fu + 1) * n / 2 - 0.5
        py = (fv + 1) * n / 2 - 0.5
        out[sel] = bilinear(faces[k], px, py, False)
    return out


def scores(ref, dist):
    h, w = ref.shape
    err = (ref - dist) ** 2
    mse = err.mean()
    wts = np.cos((np.arange(h) + 0.5 - h / 2) * np.pi / h)[:, None] * np.ones((1, w))
    wmse = (err * wts).sum() / wts.sum()
    to_db = lambda e: 10 * np.log10(255.0 ** 2 / e)
    return to_db(mse), to_db(wmse)


def main():
    w, h, n = (int(a) for a in sys.argv[1:4]) if len(sys.argv) > 3 else (4096, 2048, 2048)
    fx, fy = 4.0, 2.0
    erp = sinusoid(w, h, fx, fy)
    back = faces_to_erp(erp_to_faces(erp, n), w, h)
    p, ws = scores(erp, back)
    print(f"{w}x{h} face {n}: psnr {p:.6f} wspsnr {ws:.6f}")


if __name__ == "__main__":
    main()
