"""
Phase and -ln|F| images of iterated maps, written as PPM files.

Usage: python demos/renders.py [output-directory]
"""

import os
import sys

from hardyscale.render import RenderSpec, count_zero_peaks, preset_target, render_field, write_ppm


def main(out_dir="demo_output"):
    os.makedirs(out_dir, exist_ok=True)
    jobs = [
        ("fig2_phase.ppm", RenderSpec(preset_target("fig2"), width=768, height=384)),
        ("fig2_neglog.ppm", RenderSpec(preset_target("fig2"), width=768, height=384,
                                       mode="neglog")),
        ("fig3_phase.ppm", RenderSpec(preset_target("fig3"), width=768, height=384)),
        ("fig4_phase.ppm", RenderSpec(preset_target("fig4"), width=768, height=384,
                                      y_range=(0.0, 2.0))),
    ]
    for name, spec in jobs:
        path = os.path.join(out_dir, name)
        print(f"{path}: {write_ppm(spec, path)} bytes")
    spec = RenderSpec(preset_target("fig2", 5), y_range=(0, 8), width=1025, height=4096,
                      mode="neglog")
    print(f"zeros of the 5th iterate seen as peaks: {count_zero_peaks(render_field(spec)[0])}")


if __name__ == "__main__":
    main(*sys.argv[1:])
