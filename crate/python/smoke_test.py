"""Smoke test for the gcmeta Python module.

Build and install first:  maturin build --release -m crates/py/Cargo.toml -o dist && pip install dist/gcmeta-*.whl
"""

import gcmeta

p = gcmeta.Program("a :- b.\nb :- a.\na.\nb.\n")
assert len(p) == 4 and p.is_ground
assert p.flags()["hcf"]
assert gcmeta.brute_force(p) == [["a", "b"]]

meta = gcmeta.transform(p)
sets = gcmeta.solve(meta)
assert len(sets) == 2, sets
orders = sorted(l for s in sets for l in s if l.startswith("phi("))
assert orders == ['phi("a","b")', 'phi("b","a")'], orders
assert all({'inS("a")', 'inS("b")'} <= set(s) for s in sets)

guess = gcmeta.Program("time(0). time(1).\ndunk(T) v -dunk(T) :- time(T).\nflush(T) v -flush(T) :- time(T).\n:- flush(T), dunk(T).\n")
check = gcmeta.Program(
    "armed(0) v -armed(0).\n"
    "armed(T1) :- armed(T), not -armed(T1), time(T), T1=T+1.\n"
    "dunked(T1) :- dunked(T), T1=T+1.\n"
    "dunked(T1) :- dunk(T), T1=T+1.\n"
    "armed(T1) v -armed(T1) :- dunk(T), armed(T), T1=T+1.\n"
    "-armed(T1) :- flush(T), dunked(T), T1=T+1.\n"
    ":- not armed(2).\n"
)
integrated, renames, warnings = gcmeta.integrate(guess, check, "mod")
assert not warnings and not renames
plans = gcmeta.solve(integrated, project=["dunk", "flush"])
assert plans == [["-dunk(1)", "-flush(0)", "dunk(0)", "flush(1)"]], plans

assert gcmeta.solve(gcmeta.Program("a :- not a.")) == []
try:
    gcmeta.Program("a :- .")
except ValueError:
    pass
else:
    raise AssertionError("parse error not raised")

ok, report = gcmeta.verify("qbf", [2], [0, 1, 2], "all")
assert ok, report
print("smoke test passed")
