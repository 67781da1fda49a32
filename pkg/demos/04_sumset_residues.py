"""
Sets whose sumset avoids the squares mod q
==========================================

The maximum size never exceeds 11q/32, and q = 32 attains it.
"""
from rsl.sumsetqr import is_qr_sumset_free, max_qr_sumset_free, verify_los

rows = verify_los(36)
print(" q  max  11q/32  witness")
for r in rows:
    print(f"{r.q:2d}  {r.max_size:3d}  {r.bound:6d}  {r.witness}")

r = max_qr_sumset_free(32)
print("q=32 witness is sumset-free:", is_qr_sumset_free(r.witness, 32), "size", r.max_size)
print("search nodes for q=32:", r.nodes)
