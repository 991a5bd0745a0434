"""Rebuild the Lorenz attractor from a single observed coordinate.

Walks the standard reconstruction recipe end to end: look at the delay the
autocorrelation rule proposes, pick a dimension from false-nearest-neighbor
fractions, embed, and eyeball the result as a coarse terminal scatter.
Run with: python3 demos/reconstruct_attractor.py
"""

import numpy as np

from phaseshape import (
    DEFAULT_DELAYS,
    EmbeddingParams,
    GenConfig,
    attractor_diameter,
    autocorrelation,
    delay_embed,
    estimate_delay,
    estimate_dimension,
    fnn_fractions,
    lorenz_generate,
)


def ascii_scatter(xs, ys, width=64, height=22):
    """Render a 2-d point cloud as a character grid, darker = denser."""
    ramp = " .:-=+*#%@"
    grid = np.zeros((height, width))
    cx = np.clip(((xs - xs.min()) / np.ptp(xs) * (width - 1)).astype(int), 0, width - 1)
    cy = np.clip(((ys - ys.min()) / np.ptp(ys) * (height - 1)).astype(int), 0, height - 1)
    np.add.at(grid, (cy, cx), 1.0)
    top = grid.max()
    lines = []
    for row in grid[::-1]:  # y axis points up
        idx = np.where(row > 0, 1 + (row / top * (len(ramp) - 2)).astype(int), 0)
        lines.append("".join(ramp[i] for i in idx))
    return "\n".join(lines)


def main():
    traj = lorenz_generate(GenConfig(n=3000))
    x = traj.channels[0]
    print(f"observed channel: {x.name}, {x.n} samples, dt = {x.dt}")

    est = estimate_delay(x)
    r = autocorrelation(x)
    print(f"autocorrelation delay: tau = {est.tau} ({est.method})")
    print(f"  r({est.tau - 1}) = {r[est.tau - 1]:+.4f}   r({est.tau}) = {r[est.tau]:+.4f}")

    # The x channel decorrelates very slowly, so the first zero crossing
    # lands past a full orbit and smears the reconstruction. The bundled
    # experiments therefore pin a much shorter working delay per system.
    tau = DEFAULT_DELAYS["lorenz"]
    print(f"using the conventional working delay instead: tau = {tau}")

    fractions = fnn_fractions(x, tau=tau, m_max=6)
    print("\nfalse nearest neighbors by dimension:")
    for m, f in enumerate(fractions, start=1):
        bar = "#" * int(round(f * 40))
        print(f"  m = {m}   {f:7.4f}  {bar}")
    dim = estimate_dimension(fractions)
    print(f"chosen dimension: m = {dim.m} (converged = {dim.converged})")

    ps = delay_embed(x, EmbeddingParams(m=dim.m, tau=tau))
    print(f"\nembedded cloud: {ps.points.shape[0]} points in {ps.points.shape[1]}-d")
    print(f"attractor diameter: {attractor_diameter(ps):.2f}")
    print("\nprojection onto delay coordinates 0 and 2 (both lobes visible):")
    print(ascii_scatter(ps.points[:, 0], ps.points[:, 2]))

    # The same cloud built from y or z looks qualitatively identical;
    # that is the point of the embedding theorem. Swap the channel index
    # above and rerun to see it.


if __name__ == "__main__":
    main()
