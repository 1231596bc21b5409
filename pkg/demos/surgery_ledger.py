"""Rohlin and Casson bookkeeping for 0-surgery on the Borromean rings."""

from homtorus.manifest import load_fixture
from homtorus.rohlin import casson_closed_form, casson_ledger, rho3_direct, rho_ladder, spin_structures
from homtorus.rohlin import verify_casson_rohlin

m = load_fixture("t3")
d = m.surgery
print("linking matrix:\n", d.linking_matrix)
print("spin structures:", ["".join(map(str, c)) for c in spin_structures(d)])

lad = rho_ladder(d)
print("first differences: ", lad.rho1)
print("second differences:", lad.rho2)
print("third difference:  ", lad.rho3, "(direct eight-term sum:", rho3_direct(d), ")")

print("Casson ledger:", casson_ledger(d), "closed form:", casson_closed_form(d))

report = verify_casson_rohlin(m.presentation, d)
print(report.summary())
