"""Instance file round-trips and the LP debug dump.

Instance files are plain JSON: global parameters, a link array, and an
optional primary array.  An explicit distance matrix can replace planar
coordinates.  Programs can be dumped in LP text format for external
cross-checking.
"""

import tempfile
from pathlib import Path

from sinrcap import (AffectanceContext, GenConfig, PowerAssignment,
                     build_capacity_lp, dump_lp, generate_instance,
                     read_instance, write_instance)

inst = generate_instance(GenConfig(n=4, R=4.0, delta=2.0, seed=5, primaries=1))
path = Path(tempfile.gettempdir()) / "demo_instance.json"
write_instance(inst, path)
print(f"wrote {path}:")
print(path.read_text()[:400], "...\n")

back = read_instance(path)
assert [lk.id for lk in back.links] == [lk.id for lk in inst.links]
roundtrip = Path(tempfile.gettempdir()) / "demo_instance_2.json"
write_instance(back, roundtrip)
assert path.read_bytes() == roundtrip.read_bytes()
print("read/write round-trip is byte-identical\n")

ctx = AffectanceContext(back, PowerAssignment.uniform())
print(dump_lp(build_capacity_lp(ctx, C=1.0)))
