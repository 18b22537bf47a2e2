# %% [markdown]
# Parametric families with closed-form invariants, and a numerical sanity check.

# %%
from firstint.families import (ExtensionParams, LogFamilyParams, PlanarTheta, classify_planar, extend_case1,
                               log_family, planar_branch)
from firstint.lie import verify
from firstint.numeric import drift, rk4

theta = PlanarTheta(1, 0, 0, -1, -1, 1, 1, -1)
print(classify_planar(theta))
print(str(planar_branch(theta).integral).strip())

# %%
# Adding a third term y1 y2 (1, -1) keeps an invariant of degree four.
ext = extend_case1(ExtensionParams(theta, 1, 1, (1, 1)))
print(str(ext.system).strip())
print(str(ext.integral).strip())
print("determinant", ext.determinant)

# %%
# Along RK4 trajectories the invariant should drift at O(h^4).
for h in (0.1, 0.05, 0.025):
    rep = drift(ext.integral, rk4(ext.system, (0.6, 0.8), h, 5))
    print(f"h={h:<6} max drift {rep.max_drift:.3e}")

# %% [markdown]
# A logarithmic invariant family indexed by the power q of y'.

# %%
for q in range(3, 7):
    fam = log_family(LogFamilyParams(0, -1, 2, -3, q))
    print(f"q={q} verified={verify(fam.integral, fam.system).holds}", len(fam.integral.inner), "inner terms")

fam = log_family(LogFamilyParams(0, -1, 2, -3, 4))
rep = drift(fam.integral, rk4(fam.system, (0.1, 0.1), 1e-3, 1.0))
print(str(fam.integral).strip())
print(str(rep).strip())
print("relative drift", rep.max_drift / abs(rep.initial))
