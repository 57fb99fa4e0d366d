"""
A population trapped by single replacements
===========================================

Two 4-covers of the 8-vertex instance sit at total Hamming distance 6.
No single swap helps, yet swapping both members reaches the optimum 8.
"""

from divcover import paper_instance
from divcover.covers import enumerate_covers, is_non_excessive
from divcover.landscape import is_strict_local_optimum, lemma3_population, optimal_diversity

g = paper_instance()
print("edges:", g.sorted_edges())

# every cover with at most four vertices
for c in enumerate_covers(g, 4):
    tag = "" if is_non_excessive(g, c) else "  (excessive)"
    print(f"  {c.to_bitstring()}  {c}{tag}")

###############################################################################
# The start population and its best single replacement

p = lemma3_population()
ok, move = is_strict_local_optimum(g, 4, p)
print("\nstart:", [str(x) for x in p], "D =", p.diversity)
print("strict local optimum:", ok)
print(f"best move: replace member {move.index} with {move.cover}, delta {move.delta}")

###############################################################################
# The global optimum, by exhaustive search over multisets

opt = optimal_diversity(g, 4, 2)
print("\noptimum D =", opt.value, "witness:", [str(x) for x in opt.witnesses[0]])

# larger populations get stuck the same way
from divcover.landscape import lemma4_population

for mu in (4, 6):
    q = lemma4_population(mu)
    print(f"mu={mu}: D = {q.diversity}, optimum {optimal_diversity(g, 4, mu).value}, "
          f"locally optimal: {is_strict_local_optimum(g, 4, q)[0]}")
