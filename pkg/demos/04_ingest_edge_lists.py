"""Turn raw timestamped edge lists into a canonical log and analyze it.

Writes two tiny edge lists to a temporary directory; swap in real files
with the same ``src,dst,day`` layout to study observed data.
"""
import tempfile
from pathlib import Path

from triadic_net.io import ingest_empirical, parse_log, serialize_log
from triadic_net.measures import triadic_fraction

social = """a,b,1
b,c,2
e,a,2
e,b,3
c,e,4
"""
cross = """a,p1,1
f,p1,1
b,p1,2
f,p2,2
c,p1,3
f,p3,3
"""

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    (tmp / "social.csv").write_text(social)
    (tmp / "cross.csv").write_text(cross)
    log, report, users, items = ingest_empirical(tmp / "social.csv", tmp / "cross.csv")
    print(report)
    print("users:", users, "items:", items)
    for e in log:
        print("  ", e)

    # Round trip through the canonical file
    serialize_log(log, tmp / "events.csv")
    print((tmp / "events.csv").read_text())
    back, _ = parse_log(tmp / "events.csv")
    assert back == log

    print("triadic fraction, social:", triadic_fraction(log, "social"))
    print("triadic fraction, cross: ", triadic_fraction(log, "cross"))
