"""A small randomized sweep and the replay of its worst instance from the digest."""

from fewbody.verifier import Family, SweepPlan, replay, run_sweep

plan = SweepPlan(7, (
    Family("thm1", 10, (3, 6), 2, 1.0, state_family="random-product-mixed"),
    Family("lemma5", 5, (4, 6), 2, 1.0, (2, 4)),
))
report = run_sweep(plan)
for fam in report.families:
    print(f"{fam.label:30s} {fam.passed}/{fam.instances}  worst={fam.worst_margin:.2e}")
    cert = replay(fam.worst_digest)
    print(f"   replay {fam.worst_digest}: scaled margin {cert.scaled_margin_min:.2e}")
print("verdict", report.verdict)
