#!/usr/bin/env python3
"""Export the UCI optical-digits images bundled with scikit-learn to IDX.

Produces data/digits-images-idx3-ubyte: 1797 handwritten 8x8 digit images
in the big-endian IDX format used by the MNIST distribution. Pixel values
0..16 are rescaled to the 0..255 byte range.
"""
import struct
import sys

from sklearn.datasets import load_digits


def main(out_path: str) -> None:
    images = load_digits().images  # (1797, 8, 8), float values 0..16
    n, rows, cols = images.shape
    with open(out_path, "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, n, rows, cols))
        scaled = (images / 16.0 * 255.0).round().astype("uint8")
        f.write(scaled.tobytes(order="C"))
    print(f"wrote {out_path}: {n} images of {rows}x{cols}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/digits-images-idx3-ubyte")
