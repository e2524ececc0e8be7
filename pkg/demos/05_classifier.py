"""
A reference-free classifier: gendered or neutral?
=================================================

Hashed character n-grams, determiners and suffixes feed a logistic
model trained by SGD. With offline data and a seed-level split this
takes a few seconds.
"""

import tempfile
from pathlib import Path

from nevl.classifier import TrainConfig, evaluate, load_model, predict, save_model, train
from nevl.synthgen import holdout_split, offline_generate, starter_seeds

examples = offline_generate(list(starter_seeds()), n_per_seed=8, rng_seed=1)
train_set, test_set = holdout_split(examples, 0.2, rng_seed=1)
model = train(train_set, TrainConfig(rng_seed=1))

report = evaluate(model, [(e.text, e.label) for e in test_set])
print({k: round(v, 2) for k, v in report.to_dict()["accuracy"].items()})
print("confusion (rows gold, cols predicted; gendered, neutral):", report.confusion)

for text in ("Il personale docente ha votato.", "Le professoresse hanno votato.", "Ogni persona che studia ha votato."):
    p = predict(model, text)
    print(f"{p.label.value:9s} {p.probability:.3f}  {text}")

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "model.bin"
    save_model(model, path)
    print("saved", path.stat().st_size, "bytes; reload identical:", load_model(path).metadata == model.metadata)
