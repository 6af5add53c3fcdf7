#!/usr/bin/env python3
"""Calibrate and emit the bundled PV inventory fixture (data/panel_cn_nl.inv).

The upstream LCA database this model was built against is proprietary and is
not redistributed. This script holds a hand-built seed inventory for a framed
multi-Si panel (MG-Si -> solar-grade Si -> CZ ingot -> wafer -> cell -> panel,
production electricity from the CN grid, freight to the deployment market) and
calibrates two free scales against the published headline figures:

  * alpha - scales all process electricity inputs,
  * beta  - scales freight distances (tkm inputs),

so that the cradle-to-gate total is 118.0 kg CO2eq/m2 with transport
contributing 0.81% of it. Everything else (material masses, process
emissions, emission factors) stays at its literature-typical seed value.

The verification at the bottom is an independent dense Leontief solve in
numpy; the C++ library must reproduce these numbers from the emitted file.
"""

import numpy as np

GWP = {"co2": 1.0, "ch4": 29.8, "n2o": 273.0}

TECHS = {"coal": 1050.0, "gas": 490.0, "nuclear": 12.0,
         "wind": 11.0, "solar": 45.0, "hydro": 24.0}
MIXES = {
    "CN": [("coal", 0.60), ("gas", 0.03), ("nuclear", 0.05),
           ("wind", 0.09), ("solar", 0.08), ("hydro", 0.15)],
    "NL": [("gas", 0.60), ("coal", 0.05), ("wind", 0.20),
           ("solar", 0.10), ("nuclear", 0.03), ("hydro", 0.02)],
}

TARGET_TOTAL = 118.0          # kg CO2eq per m2 of panel
TARGET_TRANSPORT_SHARE = 0.0081

# inputs: (activity, amount, unit, scale-tag); tag "alpha" marks electricity,
# "beta" marks freight. Amounts are per one output unit of the activity.
ACTIVITIES = {
    "mg-si": dict(
        name="Silicon, metallurgical grade", unit="kg", location="CN",
        stage=True,
        inputs=[("quartz", 2.6, "kg", None),
                ("electricity-CN", 12.0, "kWh", "alpha")],
        emissions=[("co2", 4.8), ("ch4", 1.0e-4)]),
    "so-si": dict(
        name="Silicon, solar grade, Siemens route", unit="kg", location="CN",
        stage=True,
        inputs=[("mg-si", 1.13, "kg", None),
                ("chemicals", 1.5, "kg", None),
                ("electricity-CN", 30.0, "kWh", "alpha")],
        emissions=[]),
    "cz-si": dict(
        name="Silicon ingot, Czochralski", unit="kg", location="CN",
        stage=True,
        inputs=[("so-si", 1.1, "kg", None),
                ("electricity-CN", 14.0, "kWh", "alpha")],
        emissions=[]),
    "wafer": dict(
        name="Silicon wafer", unit="m2", location="CN", stage=True,
        inputs=[("cz-si", 1.6, "kg", None),
                ("sic-slurry", 0.5, "kg", None),
                ("electricity-CN", 6.0, "kWh", "alpha")],
        emissions=[]),
    "cell": dict(
        name="Photovoltaic cell", unit="m2", location="CN", stage=True,
        inputs=[("wafer", 1.04, "m2", None),
                ("silver-paste", 0.01, "kg", None),
                ("electricity-CN", 10.0, "kWh", "alpha")],
        emissions=[("n2o", 2.0e-4)]),
    "pv-panel": dict(
        name="Photovoltaic panel, framed", unit="m2", location="CN",
        stage=True, root=True,
        inputs=[("cell", 1.025, "m2", None),
                ("aluminium-frame", 2.6, "kg", None),
                ("solar-glass", 9.0, "kg", None),
                ("eva-foil", 1.0, "kg", None),
                ("backsheet", 0.5, "kg", None),
                ("electricity-CN", 6.0, "kWh", "alpha"),
                # ~14 kg/m2 panel over a long sea leg plus regional road haul
                ("transport-sea", 266.0, "tkm", "beta"),
                ("transport-road", 21.0, "tkm", "beta")],
        emissions=[]),
    # leaf materials: embodied emissions only, location-independent
    "quartz": dict(name="Quartz sand", unit="kg",
                   emissions=[("co2", 0.03)]),
    "chemicals": dict(name="Process chemicals, unspecified", unit="kg",
                      emissions=[("co2", 1.2)]),
    "sic-slurry": dict(name="Silicon carbide slurry", unit="kg",
                       emissions=[("co2", 2.0)]),
    "silver-paste": dict(name="Silver metallization paste", unit="kg",
                         emissions=[("co2", 160.0)]),
    "aluminium-frame": dict(name="Aluminium profile, frame", unit="kg",
                            emissions=[("co2", 8.2)]),
    "solar-glass": dict(name="Solar glass, low-iron", unit="kg",
                        emissions=[("co2", 1.1)]),
    "eva-foil": dict(name="EVA encapsulation foil", unit="kg",
                     emissions=[("co2", 2.5)]),
    "backsheet": dict(name="Polymer backsheet", unit="kg",
                      emissions=[("co2", 3.0)]),
    "transport-sea": dict(name="Freight, transoceanic ship", unit="tkm",
                          emissions=[("co2", 0.0105), ("ch4", 2.0e-7),
                                     ("n2o", 3.0e-7)]),
    "transport-road": dict(name="Freight, lorry 16-32t", unit="tkm",
                           emissions=[("co2", 0.105), ("ch4", 5.0e-6),
                                      ("n2o", 5.0e-6)]),
}

ROOT = "pv-panel"


def mix_intensity(region):
    v = 0.0
    for tech, share in MIXES[region]:
        v += share * TECHS[tech]
    return v  # g CO2 / kWh


def direct_kgco2e(act_id):
    if act_id.startswith("electricity-"):
        return mix_intensity(act_id.split("-", 1)[1]) / 1000.0
    return sum(GWP[s] * kg for s, kg in ACTIVITIES[act_id].get("emissions", []))


def solve(alpha, beta):
    """Dense Leontief solve; returns (total, transport_total, per_stage)."""
    ids = sorted(ACTIVITIES) + ["electricity-CN"]
    idx = {a: i for i, a in enumerate(ids)}
    n = len(ids)
    A = np.zeros((n, n))
    for a, spec in ACTIVITIES.items():
        for dep, amt, _unit, tag in spec.get("inputs", []):
            if tag == "alpha":
                amt *= alpha
            elif tag == "beta":
                amt *= beta
            A[idx[dep], idx[a]] += amt
    f = np.zeros(n)
    f[idx[ROOT]] = 1.0
    x = np.linalg.solve(np.eye(n) - A, f)
    d = np.array([direct_kgco2e(a) for a in ids])
    total = float(x @ d)
    transport = sum(x[idx[a]] * d[idx[a]] for a in ids
                    if ACTIVITIES.get(a, {}).get("unit") == "tkm")
    # stage attribution: leaves fold into the consuming stage
    per_stage = {}
    for a, spec in ACTIVITIES.items():
        if not spec.get("stage"):
            continue
        v = x[idx[a]] * d[idx[a]]
        for dep, amt, _unit, tag in spec.get("inputs", []):
            if ACTIVITIES.get(dep, {}).get("stage"):
                continue
            if tag == "alpha":
                amt *= alpha
            elif tag == "beta":
                amt *= beta
            v += x[idx[a]] * amt * d[idx[dep]]
        per_stage[a] = v
    return total, transport, per_stage


def main():
    t00, tr00, _ = solve(0.0, 0.0)
    t10, _, _ = solve(1.0, 0.0)
    t01, tr01, _ = solve(0.0, 1.0)
    c0 = t00
    e1 = t10 - t00
    t1 = t01 - t00
    assert abs(tr01 - t1) < 1e-12

    transport_target = TARGET_TRANSPORT_SHARE * TARGET_TOTAL
    beta = transport_target / t1
    alpha = (TARGET_TOTAL - c0 - transport_target) / e1

    total, transport, per_stage = solve(alpha, beta)
    print("alpha=%.12f beta=%.12f" % (alpha, beta))
    print("total=%.9f kgCO2e/m2  transport_share=%.6f%%" %
          (total, 100 * transport / total))
    for s, v in sorted(per_stage.items(), key=lambda kv: -kv[1]):
        print("  stage %-10s %8.3f kg (%5.2f%%)" % (s, v, 100 * v / total))
    largest = max(per_stage, key=per_stage.get)
    assert largest == ROOT, "panel stage must dominate, got " + largest
    assert abs(total - TARGET_TOTAL) < 1e-9

    lines = ["# Cradle-to-gate inventory, framed multi-Si PV panel (1 m2).",
             "# Production electricity: CN grid mix; freight to deployment market.",
             "# Regenerate with tools/calibrate_inventory.py.",
             "",
             "[substances]",
             'co2 "Carbon dioxide, fossil"',
             'ch4 "Methane, fossil"',
             'n2o "Dinitrogen monoxide"',
             "",
             "[mixes]"]
    for tech, g in TECHS.items():
        lines.append("tech %s %g" % (tech, g))
    for region, shares in MIXES.items():
        lines.append("mix %s %s" % (region, " ".join(
            "%s=%g" % (t, s) for t, s in shares)))
    lines.append("")
    lines.append("[activities]")
    order = ["mg-si", "so-si", "cz-si", "wafer", "cell", "pv-panel",
             "quartz", "chemicals", "sic-slurry", "silver-paste",
             "aluminium-frame", "solar-glass", "eva-foil", "backsheet",
             "transport-sea", "transport-road"]
    for a in order:
        spec = ACTIVITIES[a]
        attrs = "unit=" + spec["unit"]
        if spec.get("location"):
            attrs += " location=" + spec["location"]
        if spec.get("stage"):
            attrs += " stage"
        if spec.get("root"):
            attrs += " root"
        lines.append('activity %s "%s" %s' % (a, spec["name"], attrs))
        for dep, amt, unit, tag in spec.get("inputs", []):
            if tag == "alpha":
                amt *= alpha
            elif tag == "beta":
                amt *= beta
            lines.append("  input %s %.17g %s" % (dep, amt, unit))
        for sub, kg in spec.get("emissions", []):
            lines.append("  emission %s %.17g" % (sub, kg))
        lines.append("")
    path = __file__.rsplit("/", 2)[0] + "/data/panel_cn_nl.inv"
    with open(path, "w") as f:
        f.write("\n".join(lines).rstrip() + "\n")
    print("wrote", path)
    print("mix CN %.4f g/kWh, mix NL %.4f g/kWh" %
          (mix_intensity("CN"), mix_intensity("NL")))


if __name__ == "__main__":
    main()
