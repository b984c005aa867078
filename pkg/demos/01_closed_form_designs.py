"""Tour of the closed-form design families and their certification.

Builds each explicit family, prints the constant of its sum-of-powers
identity, and certifies it three independent ways: the potential, the
monomial cubature rule (unit-norm case), and the reproducing identity
at random probes.
"""

import numpy as np

from sphdesign import (
    bessel_residual,
    cubature_residual,
    equally_spaced_lines,
    is_design,
    kempner_24pt,
    new_11pt_d5,
    norm_profile,
    reznick_11pt,
    stroud_design,
    three_mubs_r4,
    twelve_point_design,
)
from sphdesign.core import Mode

rng = np.random.default_rng(0)

families = [
    ("3 equally spaced lines in R^2", equally_spaced_lines(2), 2),
    ("6 equally spaced lines in R^2", equally_spaced_lines(5), 5),
    ("12 points from four frames on isoclinic planes", twelve_point_design(rng.uniform(0, 2 * np.pi, 4)), 2),
    ("three mutually unbiased bases of R^4", three_mubs_r4(), 2),
    ("Reznick 11-point weighted design, R^3", reznick_11pt(), 3),
    ("D5-symmetric 11-point weighted design, R^3", new_11pt_d5(), 3),
    ("Stroud degree-5 rule, R^4", stroud_design(4), 2),
    ("Stroud degree-5 rule, R^5", stroud_design(5), 2),
    ("Stroud degree-5 rule, R^6", stroud_design(6), 2),
    ("Kempner 24-point design, R^4", kempner_24pt(), 3),
]

for name, config, t in families:
    ok, f = is_design(config, t)
    line = f"{name:55s} (t={t}, d={config.d}, n={config.n}): f = {f:9.2e}"
    line += f", bessel = {bessel_residual(config, t):8.1e}"
    if config.mode == Mode.EQUAL_NORM:
        line += f", cubature = {cubature_residual(config, t):8.1e}"
    print(line, "OK" if ok else "FAIL")

print()
print("weighted designs carry their cubature weights in the column norms:")
for name, config in [("Reznick", reznick_11pt()), ("D5-symmetric", new_11pt_d5())]:
    clusters = ", ".join(f"{rep:.4f} x{cnt}" for rep, cnt in norm_profile(config))
    print(f"  {name}: {clusters}")

print()
print("the weighted 11-point designs encode sixth-power identities:")
for name, config, constant in [
    ("Reznick", reznick_11pt(), 540.0),
    ("D5-symmetric", new_11pt_d5(), 40500.0),
]:
    x = rng.standard_normal(3)
    lhs = np.sum((x @ config.entries) ** 6)
    print(f"  {name}: sum <x,v>^6 / ||x||^6 = {lhs / np.linalg.norm(x)**6:.6f}"
          f"  (expected {constant})")
