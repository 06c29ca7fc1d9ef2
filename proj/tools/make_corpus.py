#!/usr/bin/env python3
"""Build the desk corpus of 8-bit grayscale P5 images under data/corpus.

Sources are the sample photographs bundled with scikit-image and
scikit-learn. Color images are converted with Rec.601 luma weights.
"""

import argparse
import pathlib

import numpy as np
from PIL import Image
from skimage import data as skdata
from sklearn.datasets import load_sample_image

SKIMAGE = [
    "astronaut.png", "brick.png", "camera.png", "cell.png", "chelsea.png",
    "clock_motion.png", "coffee.png", "coins.png", "grass.png", "gravel.png",
    "hubble_deep_field.jpg", "ihc.png", "microaneurysms.png", "moon.png",
    "motorcycle_left.png", "motorcycle_right.png", "page.png", "retina.jpg",
    "rocket.jpg", "text.png",
]
SKLEARN = ["china.jpg", "flower.jpg"]
KEEP_NATIVE = {"coffee"}
LUMA = np.array([0.299, 0.587, 0.114])


def to_gray8(img):
    if isinstance(img, Image.Image) and img.mode in ("P", "PA", "LA", "RGBA", "CMYK"):
        img = img.convert("RGB")
    img = np.asarray(img)
    if img.ndim == 3:
        img = img[..., :3].astype(np.float64)
        if img.max() <= 1.0:
            img = img * 255.0
        img = img @ LUMA
    elif img.dtype == np.bool_:
        img = img.astype(np.float64) * 255.0
    elif img.dtype.kind == "f" and img.max() <= 1.0:
        img = img * 255.0
    elif img.dtype == np.uint16:
        img = img.astype(np.float64) / 257.0
    return np.clip(np.floor(img.astype(np.float64) + 0.5), 0, 255).astype(np.uint8)


def limit_size(gray, long_side):
    h, w = gray.shape
    scale = long_side / max(h, w)
    if scale >= 1.0:
        return gray
    size = (max(1, round(w * scale)), max(1, round(h * scale)))
    return np.asarray(Image.fromarray(gray).resize(size, Image.LANCZOS))


def write_pgm(path, gray):
    h, w = gray.shape
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (w, h))
        f.write(np.ascontiguousarray(gray).tobytes())


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "corpus"))
    ap.add_argument("--long-side", type=int, default=512)
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    data_dir = pathlib.Path(skdata.data_dir)
    sources = [(name.split(".")[0], lambda n=name: Image.open(data_dir / n)) for name in SKIMAGE]
    sources += [(name.split(".")[0], lambda n=name: load_sample_image(n)) for name in SKLEARN]
    for name, fetch in sources:
        gray = to_gray8(fetch())
        if name not in KEEP_NATIVE:
            gray = limit_size(gray, args.long_side)
        write_pgm(out / f"{name}.pgm", gray)
        print(f"{name}.pgm {gray.shape[0]}x{gray.shape[1]}")


if __name__ == "__main__":
    main()
