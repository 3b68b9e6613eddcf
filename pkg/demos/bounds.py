"""How the size threshold compares to n at desk scale and far beyond it."""
from isadversary import derive_params, simplified_threshold, regime_violations, threshold

for n, delta, s in [(32, 4, 64), (1000, 10, 1000), (10**6, 900, 10**6), (10**12, 500_000, 10**12)]:
    ell, k = derive_params(n, delta, s, strict=False)
    t = threshold(n, delta, k, ell)
    bad = regime_violations(n, delta, s)
    print(f"n={n} delta={delta:g} s={s}: ell={ell} k={k} threshold={t:.3e} "
          f"(n/delta^2={n / delta ** 2:.3e}, threshold/n={t / n:.2e})")
    print(f"  simplified threshold {simplified_threshold(n, delta, s):.3e}; "
          f"regime {'holds' if not bad else 'fails: ' + '; '.join(bad)}")
