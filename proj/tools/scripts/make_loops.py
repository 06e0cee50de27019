"""Regenerates the bundled example loops in data/loops/."""

import json
import math
import pathlib

import numpy as np

OUT = pathlib.Path(__file__).resolve().parents[2] / "data" / "loops"


def encode(rho):
    return [[[round(float(z.real), 17), round(float(z.imag), 17)] for z in row] for row in rho]


def pure(v):
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def trace_distance(a, b):
    return float(np.abs(np.linalg.eigvalsh(a - b)).sum())


def write(name, n, samples):
    steps = [trace_distance(samples[i], samples[i + 1]) for i in range(len(samples) - 1)]
    assert max(steps) <= 0.02, (name, max(steps))
    doc = {"n": n, "samples": [encode(r) for r in samples]}
    (OUT / name).write_text(json.dumps(doc, indent=1) + "\n")
    print(name, len(samples), "samples, max step", round(max(steps), 5))


def loop_n2():
    # Rays of cos(pi t) e0 + sin(pi t) e1: out through e1 and back to e0.
    ts = np.linspace(0.0, 1.0, 401)
    samples = [pure([math.cos(math.pi * t), math.sin(math.pi * t)]) for t in ts]
    samples[-1] = samples[0]
    write("loop_n2.json", 2, samples)


def loop_n3():
    e = np.eye(3, dtype=complex)
    samples = []

    def seg(f, count):
        for k in range(count):
            samples.append(f(k / count))

    # pure rotation from e0 towards e2
    a_end = 0.4 * math.pi
    v_end = math.cos(a_end) * e[0] + math.sin(a_end) * e[2]
    seg(lambda s: pure(math.cos(a_end * s) * e[0] + math.sin(a_end * s) * e[2]), 160)
    # mix into the rank-2 plateau (|e1><e1| + |e2><e2|)/2
    plateau0 = 0.5 * (pure(e[1]) + pure(e[2]))
    seg(lambda s: (1 - s) * pure(v_end) + s * plateau0, 120)

    # rotate inside the plateau
    def plateau(b):
        u = math.cos(b) * e[1] + 1j * math.sin(b) * e[0]
        return 0.5 * (pure(u) + pure(e[2]))

    b_end = math.pi / 3
    seg(lambda s: plateau(b_end * s), 90)
    # unmix to the pure state e2, which carries no weight under P^3_1
    seg(lambda s: (1 - s) * plateau(b_end) + s * pure(e[2]), 120)
    # pure rotation from e2 back to e0
    seg(lambda s: pure(math.cos(0.5 * math.pi * s) * e[2] + math.sin(0.5 * math.pi * s) * e[0]), 160)
    samples.append(pure(e[0]))
    write("loop_n3.json", 3, samples)


if __name__ == "__main__":
    loop_n2()
    loop_n3()
