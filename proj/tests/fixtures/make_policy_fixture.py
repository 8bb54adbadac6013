"""Regenerates the policy parity fixture.

Writes policy_fixture.json (weights in the adr-policy-v1 format) and
policy_fixture_expected.json (an observation and the logits numpy computes
for it). The C++ acceptance suite checks policy_forward against these logits
without any Python at test time.
"""
import json
import pathlib

import numpy as np

HERE = pathlib.Path(__file__).parent
DIMS = [358, 256, 256, 51]


def fmt(x):
    return float("%.17g" % x)


def main():
    rng = np.random.default_rng(20240601)
    layers = []
    for i, (n_in, n_out) in enumerate(zip(DIMS[:-1], DIMS[1:])):
        w = rng.normal(0.0, 1.0 / np.sqrt(n_in), size=(n_out, n_in))
        b = rng.normal(0.0, 0.1, size=n_out)
        layers.append((w, b, "tanh" if i < len(DIMS) - 2 else "identity"))

    obs = rng.uniform(0.0, 1.0, size=DIMS[0])
    x = obs
    for w, b, act in layers:
        x = w @ x + b
        if act == "tanh":
            x = np.tanh(x)

    doc = {
        "format": "adr-policy-v1",
        "observation_layout": "adr-obs-v1",
        "dims": DIMS,
        "layers": [
            {
                "in": int(w.shape[1]),
                "out": int(w.shape[0]),
                "activation": act,
                "weights": [fmt(v) for v in w.reshape(-1)],
                "bias": [fmt(v) for v in b],
            }
            for w, b, act in layers
        ],
    }
    (HERE / "policy_fixture.json").write_text(json.dumps(doc, separators=(",", ":")))
    expected = {"observation": [fmt(v) for v in obs], "logits": [fmt(v) for v in x]}
    (HERE / "policy_fixture_expected.json").write_text(json.dumps(expected, indent=1))


if __name__ == "__main__":
    main()
