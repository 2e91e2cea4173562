# Three servers, one message each, one bit per message.
# Each server adds its share of two shared random bits, so the user sees
# three uniform bits whichever message is delivered, and the XOR of the
# three answers is the delivered bit.

from pidkit import build_basic, run_delivery, verify

s = build_basic(3, 1)
print("storage:", s.storage.to_lists())
print("G =", s.G.to_lists())
print("H =", s.H.to_lists())

messages = [[1], [0], [1]]
for k in (1, 2, 3):
    t = run_delivery(s, k, messages, seed=5)
    print(f"deliver W{k}: z={t.z} answers={[a[0] for a in t.answers]} decoded={t.decoded[0]}")

# the answer triple is uniform over {0,1}^3 for every k
for k in (1, 2, 3):
    seen = {}
    for z1 in (0, 1):
        for z2 in (0, 1):
            for w in (0, 1):
                msgs = [[0]] * 3
                msgs[k - 1] = [w]
                a = run_delivery(s, k, msgs, z=[z1, z2]).answers
                seen[a] = seen.get(a, 0) + 1
    print(f"k={k}: {len(seen)} distinct answer triples, each seen {set(seen.values())} time(s)")

report = verify(s)
print("verification ok:", report.ok, "| exhaustive:", report.exhaustive_privacy.status)
