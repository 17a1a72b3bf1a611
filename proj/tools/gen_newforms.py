#!/usr/bin/env python3
# Regenerates the bundled newform fixtures with PARI/GP (cypari2).
# Labels follow the LMFDB ordering: dimension, then trace form.
import json
import sys

import cypari2

pari = cypari2.Pari()
pari.allocatemem(2 * 10**9)

# forms whose presentation is pinned to a Hecke-ring basis
HECKE_BASIS = {
    "725.2.a.l": (
        [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [-4, 0, 1, 0, 0, 0],
         [5, 0, -8, 0, 1, 0], [0, 35, 0, -12, 0, 1], [0, -47, 0, 14, 0, -1]],
        [1, 1, 1, 2, 2, 2],
    ),
}


# fixed a_2 in the power basis, selecting among field automorphisms
PIN_A2 = {"725.2.a.b": "1+y", "725.2.a.l": "y"}


def pin(r, target):
    pari("Q=%s" % pari.Pol(list(reversed(r["poly"])), "y"))
    for s in pari("nfgaloisconj(Q)"):
        w = [pari("lift(Mod(subst(%s,y,%s),Q))" % (v, s)) for v in r["an_pol"]]
        if w[1] == pari(target):
            return w
    sys.exit("no automorphism pins a_2")


def letters(i):
    s = ""
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        s = chr(97 + r) + s
    return s


def coeff_list(pol, deg):
    c = [pari.polcoef(pol, j, "y") for j in range(deg)]
    if any(pari.denominator(x) != 1 for x in c):
        return None
    return [int(x) for x in c]


def integral_basis(Q, deg):
    # numerators and denominators of an integral basis of the field of Q
    basis = pari.nfbasis(Q)
    num, den = [], []
    for b in basis:
        d = int(pari.denominator(pari.content(b))) if b != 0 else 1
        num.append([int(pari.polcoef(b * d, j, "y")) for j in range(deg)])
        den.append(d)
    return num, den


def forms(level, count):
    pari("mf=mfinit([%d,2],0); L=mfeigenbasis(mf); F=mffields(mf)" % level)
    n = int(pari("#L"))
    out = []
    for i in range(1, n + 1):
        P = pari("F[%d]" % i)
        deg = int(pari.poldegree(P))
        if deg == 1:
            coefs = pari("mfcoefs(L[%d],%d)" % (i, count))[1:]
            an = [[int(pari.lift(c))] for c in coefs]
            out.append({"deg": 1, "poly": [0, 1], "an": an, "trace": [a[0] for a in an]})
            continue
        pari("P=F[%d]; C=mfcoefs(L[%d],%d); [Q,R]=polredabs(P,1); R=lift(R)" % (i, i, count))
        pari("V=vector(%d,n,lift(Mod(subst(lift(C[n+1]),y,R),Q)))" % count)
        an = [pari("V[%d]" % (n + 1)) for n in range(count)]
        tr = [int(pari("trace(Mod(V[%d],Q))" % (n + 1))) for n in range(count)]
        Q = pari("Q")
        out.append({"deg": deg, "poly": coeff_list(Q, deg + 1), "an_pol": an, "trace": tr})
    out.sort(key=lambda r: (r["deg"], r["trace"]))
    res = []
    for idx, r in enumerate(out):
        label = "%d.2.a.%s" % (level, letters(idx))
        rec = {"label": label, "level": level, "weight": 2, "field_poly": r["poly"]}
        if label in PIN_A2:
            r["an_pol"] = pin(r, PIN_A2[label])
        if r["deg"] == 1:
            rec["an"] = r["an"]
        else:
            deg = r["deg"]
            rows = [coeff_list(v, deg) if v != 0 else [0] * deg for v in r["an_pol"]]
            basis = HECKE_BASIS.get(label)
            if basis is None and any(row is None for row in rows):
                basis = integral_basis(pari.Pol(list(reversed(r["poly"])), "y"), deg)
            if basis is not None:
                num, den = basis
                B = pari.matrix(deg, deg, [pari(num[j][i]) / den[j] for i in range(deg) for j in range(deg)])
                Binv = B ** -1
                an = []
                for v in r["an_pol"]:
                    col = pari.Col([pari.polcoef(v, j, "y") for j in range(deg)])
                    sol = Binv * col
                    if any(pari.denominator(x) != 1 for x in sol):
                        sys.exit("coefficient outside the Hecke basis in %s" % label)
                    an.append([int(x) for x in sol])
                rec["hecke_ring_numerators"] = num
                rec["hecke_ring_denominators"] = den
                rec["an"] = an
            else:
                rec["an"] = rows
        res.append(rec)
    return res


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else "."
    for level, count in ((121, 60), (234, 120), (725, 200)):
        recs = forms(level, count)
        with open("%s/newforms_%d.json" % (outdir, level), "w") as fh:
            json.dump(recs, fh, separators=(",", ":"))
            fh.write("\n")
        print(level, [(r["label"], len(r["field_poly"]) - 1) for r in recs])


if __name__ == "__main__":
    main()
