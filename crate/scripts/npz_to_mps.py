"""Write a SciPy linprog benchmark .npz (c, A_ub, b_ub, A_eq, b_eq, bounds) as free MPS.

usage: npz_to_mps.py FILE.npz NAME > NAME.mps
"""
import sys

import numpy as np


def fmt(v):
    v = float(v)
    return str(int(v)) if v.is_integer() and abs(v) < 1e15 else repr(v)


def main(path, name):
    z = np.load(path, allow_pickle=True)
    c, a_ub, b_ub, a_eq, b_eq = (z[k] for k in ("c", "A_ub", "b_ub", "A_eq", "b_eq"))
    bounds = z["bounds"][0]
    n_ub = a_ub.shape[0] if a_ub.size else 0
    n_eq = a_eq.shape[0] if a_eq.size else 0
    rows = [f"L{i + 1}" for i in range(n_ub)] + [f"E{i + 1}" for i in range(n_eq)]
    a = np.vstack([m for m in (a_ub, a_eq) if m.size])
    b = np.concatenate([v for v in (b_ub, b_eq) if v.size])

    out = [f"NAME {name}", "ROWS", " N COST"]
    out += [f" L {r}" for r in rows[:n_ub]] + [f" E {r}" for r in rows[n_ub:]]
    out.append("COLUMNS")
    for j in range(len(c)):
        col = f"X{j + 1}"
        if c[j] != 0:
            out.append(f" {col} COST {fmt(c[j])}")
        for i in np.nonzero(a[:, j])[0]:
            out.append(f" {col} {rows[i]} {fmt(a[i, j])}")
    out.append("RHS")
    out += [f" RHS {rows[i]} {fmt(b[i])}" for i in np.nonzero(b)[0]]
    out.append("BOUNDS")
    for j, (lo, hi) in enumerate(bounds):
        col = f"X{j + 1}"
        if lo is None and hi is None:
            out.append(f" FR BND {col}")
            continue
        if lo is None:
            out.append(f" MI BND {col}")
        elif lo != 0:
            out.append(f" LO BND {col} {fmt(lo)}")
        if hi is not None:
            out.append(f" UP BND {col} {fmt(hi)}")
    out.append("ENDATA")
    print("\n".join(out))


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
