"""Gradient search on (S^3)^3 recovers the exact quaternion solutions."""

import numpy as np

from homtorus import enum_q8, search_su2, torus_presentation
from homtorus.projrep import defect, projectively_equivalent
from homtorus.su2core import Quat, canonical_q8, classify_image

p = torus_presentation()
w = (1, 0, 1)

raw = search_su2(p, w, num_seeds=50, rng_seed=0, cluster=False)
print(f"{len(raw)} of 50 starts converged")
print("largest defect:", max(d for _, d in raw))

clusters = search_su2(p, w, num_seeds=50, rng_seed=0)
exact = enum_q8(p, w)
for rep, d in clusters:
    labels, _ = canonical_q8(rep.images, 1e-5)
    print(classify_image(rep.images, 1e-5).tag.value, [str(q) for q in labels])
    hit = [projectively_equivalent(p, rep, e, 1e-5) is not None for e in exact]
    print("  matches exact classes:", hit)

# a defect surface slice: vary the first generator around a great circle
rep = exact[0]
angles = np.linspace(0, 2 * np.pi, 9)
for t in angles:
    q = Quat(np.cos(t), np.sin(t), 0, 0) * rep.images[0]
    print(f"  t = {t:4.2f}  defect = {defect(p, (q,) + rep.images[1:], rep.signs):.4f}")
