"""Embedding the family of Z_k into the family of Hirzebruch surfaces.

The Hirzebruch surface F_k sits in P^1 x P^{k+1} cut out by
z_0 (x_1, ..., x_k) = z_1 (x_2, ..., x_{k+1}); its (k-1)-parameter family
bends the equation to z_0 (x_1, ..., x_k) = z_1 (x_2 + t_1 x_0, ...,
x_k + t_{k-1} x_0, x_{k+1}).  The chart maps

    x_{n+1} = z^{k-n} u + sum_{i>n} t_i z^{i-n}
    y_{n+1} = xi^n v - sum_{i<=n} t_i xi^{n-i}

embed the Z_k family fibrewise; the defining equations hold identically as
polynomials in (z, u, t_1, ..., t_{k-1}), verified below symbolically.

Run:  python demos/04_hirzebruch_embedding.py
"""

from fractions import Fraction as Q

from localsurfaces import hirzebruch_embed_check

for k in (2, 3, 4):
    report = hirzebruch_embed_check(k)
    print(f"=== k = {k} ===")
    print("  U-chart fibre coordinates [x_0 : ... : x_{k+1}]:")
    for i, x in enumerate(report.x):
        print(f"    x_{i} = {x}")
    print("  defining-equation residuals on U:",
          [str(r) for r in report.residuals_u])
    print("  defining-equation residuals on V:",
          [str(r) for r in report.residuals_v])
    print("  charts agree on the overlap:", report.overlap_consistent)
    assert report.all_zero and report.overlap_consistent
    print()

print("=== t = 0 recovers the plain embedding of Z_3 ===")
report = hirzebruch_embed_check(3)
x0 = report.x_at([0, 0])
print("  (z, u) -> ([1 : z], [" + " : ".join(str(p) for p in x0) + "])")

print()
print("=== numeric spot check at (z, u) = (1, 1), t = (1, 0) ===")
x = [p.evaluate(1, 1) for p in report.x_at([Q(1), Q(0)])]
lhs = x[1:4]
rhs = [x[2] + Q(1) * x[0], x[3] + Q(0) * x[0], x[4]]
print(f"  z_0*(x_1, x_2, x_3) = {lhs}")
print(f"  z_1*(x_2 + t_1 x_0, x_3 + t_2 x_0, x_4) = {rhs}")
assert lhs == rhs
