# Eight messages, three per server. Six servers suffice for rate 3/8.

import numpy as np

from pidkit import build_full_rate, verify
from pidkit.matrix import rank, submatrix
from pidkit.simulator import random_messages, run_delivery

s = build_full_rate(8, 3)
print(f"N={s.N} p={s.p} L={s.L} rate={s.rate} eta={s.eta}")
for n, held in enumerate(s.storage.sets, 1):
    print(f"  server {n}: W{held}  answers {s.D[n - 1]} symbol(s)")

# W1 lives on servers 1, 4, 5; the decoder restricted to their columns is invertible
cols = s.decoding_columns(1)
print("decoding columns for W1:", cols)
print("rank of that 3x3 block:", rank(submatrix(s.G, None, cols)))

for k in range(1, 9):
    print(f"  rank [F{k} | H] = {rank(s.privacy_matrix(k))} of {s.download}")

rng = np.random.default_rng(0)
ok = sum(run_delivery(s, k, random_messages(s, rng), seed=i).success for i in range(200) for k in range(1, 9))
print(f"{ok}/1600 deliveries decoded")

rep = verify(s)
print("verification ok:", rep.ok, "| exhaustive:", rep.exhaustive_privacy.status, f"({rep.exhaustive_privacy.states} states)")
