"""
Covers of Spec(Q x Q) and their certificates
============================================

The principal opens of t1, ..., tk cover Spec(A) exactly when the t_i
generate the unit ideal of E(A).  Positive answers carry coefficients s_i
with sum s_i t_i = 1; negative ones carry a proper ideal.
"""

from monoidal_geometry import FinVect, QQ, algebra, product_monoid
from monoidal_geometry.cli import run_command
from monoidal_geometry.report import plain, render, verify_report
from monoidal_geometry.scheme import check_cover
from monoidal_geometry.workspace import build

vect = FinVect(QQ)
q = algebra(vect, [[[1]]], [1], name="Q")
qxq = product_monoid(q, q, name="QxQ")
E = qxq.end

for ts in ([(1, 0)], [(1, 0), (0, 1)], [(2, 0), (0, 3)]):
    cert = check_cover(qxq, ts)
    what = cert.witnesses if cert.positive else cert.proper_ideal
    print(ts, "cover" if cert.positive else "not a cover", plain(what), "recheck:", cert.recheck(E))

# the same question through the command layer, as a self-contained report
ws = build({
    "instance": {"kind": "finvect", "field": "Q"},
    "monoids": {"A": {"table": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]], "unit": [1, 1]}},
})
report = run_command("check-cover", ["A", "[1,0]", "[0,1]"], ws)
print(render(report), end="")
print("verifier:", verify_report(report))

# a report whose coefficients were tampered with no longer verifies
doctored = report.to_machine()
doctored["witnesses"]["coefficients"] = [[1, 0], [1, 0]]
print("doctored:", verify_report(doctored))
