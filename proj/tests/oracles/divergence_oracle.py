# Copyright 2026 The pmixed Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""High-precision Renyi divergences for tests/divergence_test.cc.

Also prints the pinned counterexample to the single-order triangle-like
inequality, D_a(P||R) <= (sqrt(D_a(P||Q)) + sqrt(D_a(Q||R)))^2, and the
all-orders bound that does hold for it.
"""

from mpmath import mp, mpf, log, sqrt

mp.dps = 50


def renyi(p, q, alpha):
    p = [mpf(x) for x in p]
    q = [mpf(x) for x in q]
    if alpha == "inf":
        return max(log(a / b) for a, b in zip(p, q) if a > 0)
    a = mpf(alpha)
    return log(sum(x ** a * y ** (1 - a) for x, y in zip(p, q) if x > 0)) / (
        a - 1)


def sup_ratio(p, q):
    # sup over alpha > 1 of D_alpha / alpha, on the grid the C++ test uses.
    grid = [1 + mpf(i) / 100 for i in range(1, 100)] + [
        mpf(2) + mpf(i) / 10 for i in range(0, 981)]
    return max(renyi(p, q, a) / a for a in grid)


def main():
    half = ["0.5", "0.5"]
    quarter = ["0.25", "0.75"]
    rows = [
        ("D2(half||quarter)", renyi(half, quarter, 2)),
        ("D2(quarter||half)", renyi(quarter, half, 2)),
        ("D3(half||quarter)", renyi(half, quarter, 3)),
        ("D1.5(half||quarter)", renyi(half, quarter, "1.5")),
        ("Dinf(half||quarter)", renyi(half, quarter, "inf")),
        ("D2((.2,.3,.5)||(.4,.4,.2))",
         renyi(["0.2", "0.3", "0.5"], ["0.4", "0.4", "0.2"], 2)),
        ("D10((.2,.3,.5)||(.4,.4,.2))",
         renyi(["0.2", "0.3", "0.5"], ["0.4", "0.4", "0.2"], 10)),
        ("D2((1,0)||(.5,.5))", renyi(["1", "0"], ["0.5", "0.5"], 2)),
    ]
    p, q, r = half, ["0.9", "0.1"], ["0.99", "0.01"]
    d_pq, d_qr, d_pr = renyi(p, q, 2), renyi(q, r, 2), renyi(p, r, 2)
    rows += [
        ("counterexample D2(P||Q)", d_pq),
        ("counterexample D2(Q||R)", d_qr),
        ("counterexample D2(P||R)", d_pr),
        ("counterexample single-order bound",
         (sqrt(d_pq) + sqrt(d_qr)) ** 2),
    ]
    e1, e2 = sup_ratio(p, q), sup_ratio(q, r)
    rows += [
        ("counterexample sup D/a (P||Q)", e1),
        ("counterexample sup D/a (Q||R)", e2),
        ("counterexample all-orders bound at a=2",
         (sqrt(e1) + sqrt(e2)) ** 2 * 2),
    ]
    for name, value in rows:
        print(f"{name:42s} {mp.nstr(value, 17)}")


if __name__ == "__main__":
    main()
