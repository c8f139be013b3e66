#!/usr/bin/env python3
"""Writes tiny solid-colour images in the catalog layout.

The real corpus (DermNet-derived) is not redistributable; these stand-ins
let the service and tests run. Point MEDITOOLS_IMAGE_ROOT at a real tree for
actual use.
"""
import argparse
import pathlib

from PIL import Image

IMAGES = {
    "Bullous Disease": ["bullous-pemphigoid-1.png", "pemphigus-vulgaris-2.jpg"],
    "Psoriasis": ["plaque-psoriasis-1.png", "guttate-psoriasis-3.jpg"],
    "Eczema": ["atopic-dermatitis-1.png"],
    "Acne and Rosacea": ["acne-vulgaris-1.jpg", "rosacea-2.png"],
    "Melanoma Skin Cancer Nevi and Moles": ["nodular-melanoma-1.png"],
}


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("root", type=pathlib.Path)
    args = parser.parse_args()
    shade = 40
    for condition, files in IMAGES.items():
        folder = args.root / condition
        folder.mkdir(parents=True, exist_ok=True)
        for name in files:
            shade = (shade + 37) % 256
            image = Image.new("RGB", (4, 4), (shade, 90, 200 - shade // 2))
            image.save(folder / name)


if __name__ == "__main__":
    main()
