"""Seeded search for states with negative slack in the conjectured relations.

Nothing found here is a proof: the output is conjecture-support evidence. The
proven ``guanlei`` relation is scanned alongside as a numerics control.

    python3 demos/conjecture_search.py
"""

from cvur.conjecture_lab import gaussian_pure, make_family, scan

runs = [
    ("conjecture4", "fock_superposition", {"m": 3}),
    ("conjecture4", "fock_superposition", {"m": 5}),
    ("conjecture3", "fock_superposition", {}),
    ("conjecture1", "gaussian_pure2", {}),
    ("guanlei", "fock_superposition", {}),
]
for relation, family, options in runs:
    result = scan(relation, make_family(family), iters=300, seed=0, options=options)
    name = relation + (f" m={options['m']}" if options else "")
    print(f"{name:<17} over {family:<18} best slack {result.best_slack:+.3e}  ({result.label})")

# refining the best samples drives the equidistributed relation towards its vacuum minimum
refined = scan("conjecture4", make_family("fock_superposition", d=4), iters=50, seed=0, optimize=True, top_k=2)
print(f"conjecture4 m=3, refined: best slack {refined.best_slack:+.3e}")
print(f"tight_ccv over pure Gaussians: {scan('tight_ccv', gaussian_pure(1), 200).best_slack:+.1e} (saturation family)")
