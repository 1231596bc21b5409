"""Quaternion representations of the 3-torus group and their twisting orbits."""

from homtorus import cupforms, decompose_class, enum_q8, lambda3_mod2, torus_presentation
from homtorus.orbitact import cover_reducibility
from homtorus.projrep import cocycle_classes, twisted_h1_dim

p = torus_presentation()
dim, classes = cocycle_classes(p)
print(f"relator sign classes: 2^{dim}")

# Every nonzero class carries exactly two conjugacy classes of Q8-valued
# projective representations, swapped by twisting.
for w in classes:
    if not any(w):
        continue
    reps = enum_q8(p, w)
    d = decompose_class(p, w)
    print("w =", "".join(map(str, w)), "|", ", ".join(str(r) for r in reps))
    for o in d.orbits:
        stab = " ".join(str(c) for c in o.stabilizer)
        print(f"    orbit of size {o.size}, stabiliser {{{stab}}}")
    print("    H^1 twisted:", [twisted_h1_dim(p, r) for r in reps],
          " cover:", [cover_reducibility(p, r).value for r in reps])
    print("    two-orbit parity:", lambda3_mod2(d))

print("triple cup product:", cupforms.triple_eval(cupforms.torus_form(), [1, 0, 0], [0, 1, 0], [0, 0, 1]))

# The zero class looks very different: orbits of size 4 and 8 only.
print("zero class orbit sizes:", sorted(decompose_class(p, (0, 0, 0)).sizes))
