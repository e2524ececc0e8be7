"""
Synthetic training data without a network
=========================================

Each seed triplet (neutral, masculine, feminine) is dropped into the
same context frame, so the three sentences differ only at the slot.
The prompted two-round generator lives in the same module and takes any
client with a ``send(prompt, temperature)`` method; its token is read
from NEVL_API_TOKEN.
"""

from collections import Counter

from nevl.synthgen import build_round1_prompt, holdout_split, offline_generate, starter_seeds

seeds = list(starter_seeds())
print(len(seeds), "seed triplets, e.g.", seeds[3].neutral, "/", seeds[3].masculine, "/", seeds[3].feminine)

examples = offline_generate(seeds, n_per_seed=3, rng_seed=7)
for e in examples[:3]:
    print(f"  {e.label.value}  {e.text}")
print(Counter(e.label.value for e in examples))

# hold out whole seeds so the test side never shares a seed with training
train, test = holdout_split(examples, 0.2, rng_seed=7)
print(len(train), "train /", len(test), "held out")

# what the online path would send for round 1
print(build_round1_prompt(seeds[:2])[-300:])
