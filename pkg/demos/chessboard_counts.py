"""Critical-cell counts of multiple chessboard complexes.

For each board the closed-form count is printed next to the number of
critical cells the Morse field actually leaves, and the homology when it
is cheap enough.

Run: python3 demos/chessboard_counts.py
"""

from biercx.chessboard import ChessboardSpec, wedge_summary

boards = [
    (5, 3, (1, 1, 1)),  # optimal: n = Σm + r - 1
    (4, 2, (1, 1)),  # long: one spare column
    (7, 3, (2, 1, 1)),
    (6, 2, (2, 1)),
    (8, 2, (2, 3)),
    (7, 4, (1, 1, 1, 1)),
]

print(f"{'n':>2} {'r':>2} {'caps':<14}{'kind':<9}{'dim':>4}{'spheres':>9}  homology")
for n, r, m in boards:
    spec = ChessboardSpec(n, r, m)
    out = wedge_summary(spec)  # raises if field, formula or homology disagree
    kind = "optimal" if spec.is_optimal else "long"
    print(f"{n:>2} {r:>2} {str(list(m)):<14}{kind:<9}{out['dimension']:>4}{out['count']:>9}"
          f"  {'checked' if out['homology_checked'] else 'skipped'}")
