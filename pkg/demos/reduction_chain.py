"""Walk one random 2CNF formula through the short reductions and back.

Each hop prints the size parameters so the linear growth is visible.
"""

import sys

from sublin import reductions as red
from sublin.instances import gen_random, serialize
from sublin.solvers import solve_2sat, solve_lp

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 7

f = gen_random("2sat", {"n": 6, "m": 14}, seed)
print(serialize(f))
print(f"2sat      m_vbl={f.m_vbl:3} m_cls={f.m_cls:3} sat={solve_2sat(f).satisfiable}")

g = red.R1(f)
print(f"2sat3     m_vbl={g.m_vbl:3} m_cls={g.m_cls:3} sat={solve_2sat(g).satisfiable}")

lp = red.R4(g)
print(f"lp23      m_col={lp.m_col:3} m_row={lp.m_row:3} feasible={solve_lp(lp).feasible}")

back = red.R5(lp)
print(f"2sat3     m_vbl={back.m_vbl:3} m_cls={back.m_cls:3} sat={solve_2sat(back).satisfiable}")

# the Turing reduction asks one reachability question per literal pair
plan = red.twosat3_to_reach_queries(g)
print(f"queries   {len(plan.queries)} on a {plan.graph.num_vertices}-vertex implication graph")

chain = red.compose(red.R4, red.R5)
print(f"composite {chain.name}: k={chain.decl.k} e={chain.decl.e} short={chain.decl.short}")
