"""Straight-line evaluation of the MSc case-study formulas with Fractions.

Used to freeze the expected numbers in the C++ tests; it shares no code
with the engine.
"""
from fractions import Fraction as F
import sys

PROGRAMS = "ABC"


def base_scenario():
    s = {"cpec": F(1000), "cpdg": F(3000), "escf": F(1, 10), "bbpp": F(30000), "k": F(1, 2),
         "sscph": F(80), "jscph": F(40)}
    for x, nec, ndg in zip(PROGRAMS, (1000, 1100, 600), (20, 15, 10)):
        s[f"{x}:nec"] = F(nec)
        s[f"{x}:ndg"] = F(ndg)
        s[f"{x}:lpf"] = F(2)
        s[f"{x}:sset"] = F(20)
        s[f"{x}:sspst"] = F(8)
        s[f"{x}:jspst"] = F(10)
        s[f"{x}:ssot"] = F(100)
        for c in range(1, 5):
            s[f"{x}:c{c}:sslt"] = F(100)
            s[f"{x}:c{c}:jsst"] = F(60)
    return s


def mdiv(a, b):
    return F(0) if b == 0 else a / b


def derived(s):
    d = {}
    d["NEC"] = sum(s[f"{x}:nec"] for x in PROGRAMS)
    d["ECC"] = d["NEC"] * s["cpec"]
    d["NDG"] = sum(s[f"{x}:ndg"] for x in PROGRAMS)
    d["DGC"] = d["NDG"] * s["cpdg"]
    d["ESC"] = s["escf"] * (d["ECC"] + d["DGC"])
    one = 1 - s["escf"]
    d["phi1"] = s["bbpp"] <= F(1, 3) * one * (d["ECC"] + d["DGC"])
    d["phi2"] = s["k"] <= mdiv(d["DGC"] * one, 3 * s["bbpp"])
    d["phi3"] = 1 - s["k"] <= mdiv(d["ECC"] * one, 3 * s["bbpp"])
    for x in PROGRAMS:
        d[f"{x}:DGC"] = mdiv((d["DGC"] * one - 3 * s["k"] * s["bbpp"]) * s[f"{x}:ndg"], d["NDG"])
        d[f"{x}:ECC"] = mdiv((d["ECC"] * one - 3 * (1 - s["k"]) * s["bbpp"]) * s[f"{x}:nec"], d["NEC"])
        d[f"{x}:STAFF"] = s["bbpp"] + d[f"{x}:DGC"] + d[f"{x}:ECC"]
        ssh = sum(s[f"{x}:c{c}:sslt"] * (1 + s[f"{x}:lpf"]) + s[f"{x}:sset"] for c in range(1, 5)) \
            + s[f"{x}:ndg"] * 2 * s[f"{x}:sspst"]
        jsh = sum(s[f"{x}:c{c}:jsst"] for c in range(1, 5)) + s[f"{x}:ndg"] * 2 * s[f"{x}:jspst"]
        d[f"{x}:SES"] = ssh * s["sscph"]
        d[f"{x}:JES"] = jsh * s["jscph"]
        if f"{x}:pmt" in s:
            d[f"{x}:PM"] = (s[f"{x}:ssot"] + s[f"{x}:pmt"]) * s["sscph"]
    return d


def solve_pmt(s):
    d = derived(s)
    for x in PROGRAMS:
        s[f"{x}:pmt"] = (d[f"{x}:STAFF"] - d[f"{x}:SES"] - d[f"{x}:JES"]) / s["sscph"] - s[f"{x}:ssot"]
    return s


def fmt(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


if __name__ == "__main__":
    s = solve_pmt(base_scenario())
    d = derived(s)
    if len(sys.argv) > 1 and sys.argv[1] == "bindings":
        for name, value in s.items():
            print(f"{name} = {fmt(value)}")
    else:
        for name in ("ECC", "DGC", "ESC", "A:STAFF", "B:STAFF", "C:STAFF", "phi1", "phi2", "phi3"):
            print(name, d[name] if isinstance(d[name], bool) else fmt(d[name]))
        print("in", fmt(-(d["DGC"] + d["ECC"])))
        for x in PROGRAMS:
            print(f"{x}:pmt", fmt(s[f"{x}:pmt"]))
        bound = F(1, 3) * (1 - s["escf"]) * (d["ECC"] + d["DGC"])
        print("phi1 bound on bbpp", fmt(bound))
        print("k making the three bounds coincide", fmt(d["DGC"] / (d["DGC"] + d["ECC"])))
