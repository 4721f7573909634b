"""Independent scalar/brute-force oracles for the frozen expected values in the C++ tests.

Run with: python3 tests/oracles/compute_oracles.py
Nothing here imports or calls the C++ library.
"""
import itertools
import math


def lppls(tc, m, om, A, B, C1, C2, t):
    if t == tc:
        return A
    dt = tc - t
    return A + B * dt**m + C1 * dt**m * math.cos(om * math.log(dt)) + C2 * dt**m * math.sin(om * math.log(dt))


BITCOIN_FIT = dict(tc=637.0, m=0.3003, om=6.889, A=11.11, B=-2.937e-4, C1=4.372e-5, C2=-3.362e-5)


def lppls_oracles():
    p = BITCOIN_FIT
    print("lppls(t=0) bitcoin-fit params: %.17g" % lppls(p["tc"], p["m"], p["om"], p["A"], p["B"], p["C1"], p["C2"], 0.0))
    for t in (0, 50, 100, 150, 199):
        print("  tc=200 rescaled t=%d: %.17g" % (t, lppls(200.0, p["m"], p["om"], p["A"], p["B"], p["C1"], p["C2"], float(t))))
    dt = 637.0
    pw = dt ** 0.3003
    print("design row t=0: [1, %.17g, %.17g, %.17g]" % (pw, pw * math.cos(6.889 * math.log(dt)), pw * math.sin(6.889 * math.log(dt))))


def boundary_reduce(points):
    """Textbook Vietoris-Rips persistence by full enumeration, returns (H0 pairs, H1 pairs)."""
    n = len(points)
    dist = lambda i, j: math.dist(points[i], points[j])
    simplices = []
    for k in (1, 2, 3):
        for s in itertools.combinations(range(n), k):
            val = max((dist(a, b) for a, b in itertools.combinations(s, 2)), default=0.0)
            simplices.append((val, k - 1, s))
    simplices.sort()
    index = {s[2]: i for i, s in enumerate(simplices)}
    cols = []
    for val, dim, s in simplices:
        cols.append(set(index[f] for f in itertools.combinations(s, len(s) - 1)) if dim > 0 else set())
    low_of = {}
    pairs = {0: [], 1: []}
    for j in range(len(cols)):
        while cols[j] and max(cols[j]) in low_of:
            cols[j] ^= cols[low_of[max(cols[j])]]
        if cols[j]:
            i = max(cols[j])
            low_of[i] = j
            b, d = simplices[i][0], simplices[j][0]
            if d > b:
                pairs[simplices[i][1]].append((b, d))
    return pairs


def rips_oracles():
    sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
    print("unit square:", boundary_reduce(sq))
    s = 2.0
    eq = [(0, 0), (s, 0), (s / 2, s * math.sqrt(3) / 2)]
    print("equilateral:", boundary_reduce(eq))
    d = sorted(math.dist(a, b) for a, b in itertools.combinations(sq, 2))
    print("unit square distances:", d)


def landscape_oracles():
    print("tent(1,sqrt2,1.2) =", min(1.2 - 1, math.sqrt(2) - 1.2))
    print("L1 (1,sqrt2): %.17g" % ((math.sqrt(2) - 1) ** 2 / 4))
    # pairs (0,4),(1,3): grid max / second max integration
    tent = lambda b, d, x: max(0.0, min(x - b, d - x))
    n = 400000
    h = 4.0 / n
    l1 = l2 = 0.0
    for i in range(n):
        x = (i + 0.5) * h
        v = sorted([tent(0, 4, x), tent(1, 3, x)], reverse=True)
        l1 += v[0] * h
        l2 += v[1] * h
    print("grid L1 of levels (0,4),(1,3): %.9f %.9f sum %.9f" % (l1, l2, l1 + l2))


def segmentation_oracles():
    r = [math.log(1.1), math.log(0.9)]
    print("log returns [100,110,99]: %.17g %.17g" % (math.log(110) - math.log(100), math.log(99) - math.log(110)))
    w0, rr = 6, 0.01
    xs = [rr if i % 2 == 0 else -rr for i in range(w0)]
    mu = sum(xs) / w0
    sd = math.sqrt(sum((x - mu) ** 2 for x in xs) / (w0 - 1))
    print("alternating sd w0=6 r=0.01: %.17g closed %.17g" % (sd, rr * math.sqrt(w0 / (w0 - 1))))
    cum = [0, 0.5, 0.2]
    print("largest deviation up:", max(cum[:3]) - cum[2])


def sawtooth_trace():
    """30-point sawtooth in log-price: rises 0..5 (step 1), falls 5..0, period 10.

    Constant tolerance eps=2.5 (sawtooth amplitude 5 = 2 eps). Hand-traced by brute force
    following the crossing/argmax rules.
    """
    logp = []
    for i in range(30):
        ph = i % 10
        logp.append(float(ph if ph <= 5 else 10 - ph))
    eps = 2.5
    i0, up, events = 0, True, []
    while True:
        cross = None
        for i in range(i0 + 1, len(logp)):
            seg = logp[i0:i + 1]
            delta = (max(seg) - logp[i]) if up else (logp[i] - min(seg))
            if delta - eps > 0:
                cross = i
                break
        if cross is None:
            break
        seg = logp[i0:cross + 1]
        ext = i0 + (seg.index(max(seg)) if up else seg.index(min(seg)))
        events.append(("peak" if up else "trough", ext, cross))
        i0, up = ext, not up
    print("sawtooth log-prices:", logp)
    print("sawtooth events:", events)


def subfit_constant():
    # 4-point least squares of y=c against columns [1, a, b, c']: exact fit with A=c, rest 0
    print("constant y -> A=c, B=C1=C2=0, rss=0 (the constant lies in the column space)")


if __name__ == "__main__":
    lppls_oracles()
    rips_oracles()
    landscape_oracles()
    segmentation_oracles()
    sawtooth_trace()
    subfit_constant()
