"""Walk through the bit-to-symbol plumbing of the link.

Shows the Gray-labeled constellations, the unit-energy normalization, and
how interleaved coded bits tile into (channel use, antenna, bit) slots.
"""

import numpy as np

from mimolink import layout_for, layout_index, layout_unindex, make_constellation, map_block

print("=== 16-QAM Gray table ===")
c = make_constellation("qam16")
for bits, point in zip(c.labels, c.points):
    print("".join(map(str, bits)), "->", f"{point:+.4f}")
print("average symbol energy:", np.mean(np.abs(c.points) ** 2))

print("\nFlipping one label bit always moves along a single axis:")
ref = map_block([0, 1, 1, 0], c)
for b in range(4):
    bits = np.array([0, 1, 1, 0])
    bits[b] ^= 1
    moved = map_block(bits, c)
    axis = "I" if moved.imag == ref.imag else "Q"
    print(f"  flip bit {b}: {ref:+.3f} -> {moved:+.3f}  ({axis} axis)")

print("\n=== frame layout: 1152 info bits, rate 1/2, 4 antennas, 16-QAM ===")
layout = layout_for(m_t=4, m_r=4, bits_per_symbol=4, coded_len=2304)
print(f"{layout.coded_len} coded bits fill {layout.uses} channel uses")
for k in (0, 1, 4, 16, 2303):
    u, t, b = layout_unindex(k, layout)
    print(f"  coded bit {k:4d} lives in use {u:3d}, antenna {t}, bit {b}",
          "(round trip ok)" if layout_index(u, t, b, layout) == k else "BROKEN")
