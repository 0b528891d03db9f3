"""Build the acceptance formula for the parity machine and search for a run.

The witness T lists one packed configuration per time step.
"""

import sys

from sublin.snl import PARITY, build_acceptance_formula, cert_size, decode_config, packing_for, search_snl, simulate

x = sys.argv[1] if len(sys.argv) > 1 else "1101"
formula, model = build_acceptance_formula(PARITY, x)
res = search_snl(formula, model)
print(f"input {x!r}: simulate={simulate(PARITY, x)} decide={res.found}")
print(f"|U| = {cert_size(model)}, positions = {model.positions}, candidates visited = {res.visited}")

if res.found:
    pk = packing_for(PARITY, len(x))
    for i, config in sorted(res.witness):
        state, head, _, work = decode_config(PARITY, pk, config, len(x))
        print(f"  T({i}) = {config}  state={PARITY.states[state]} head={head} work={''.join(work)}")
