# %% [markdown]
# Finding polynomial invariants by searching integral arrays.
# Start from the rotation field y1' = y2, y2' = -y1 written in multinomial form.

# %%
from firstint import parse_system, search, synthesize
from firstint.arrays import IntegralArray, validate
from firstint.lie import verify

rotation = parse_system("""
mvf 2
term 1 0 | -1 1
term 0 -1 | 1 -1
""")
print(rotation)

# %%
# One row, two columns: both terms cancel inside a single collected monomial.
arr = IntegralArray(((1, 0),))
report = validate(arr, rotation)
print("valid", report.ok, "coupling row", report.matrix.row(0))
syn = synthesize(arr, rotation)
print(str(syn.integral).strip())

# %%
# Exhaustive search up to 2x2 finds the same invariant and nothing else.
for res in search(rotation, 2, 2):
    print(res.array.cells, verify(res.integral, rotation).holds)
    print(str(res.integral).strip())

# %% [markdown]
# A three-term system from a second-order scalar equation,
# y'' = -y^-1 y'^2 + y + y^3, reduced to first order.

# %%
from firstint.system import ScalarODE, reduce_scalar_ode

ode = ScalarODE.from_terms(2, [(-1, (-1, 2)), (1, (1, 0)), (1, (3, 0))])
s = reduce_scalar_ode(ode)
for res in search(s, 3, 3):
    print(str(res.integral).strip())
