"""
Curves, conductors and Frobenius traces
=======================================
"""

# %%
import numpy as np

from symcong.curve import RationalEC, conductor, minimal_model, quadratic_twist, tate_local
from symcong.frobenius import ap, trace_vector

# %% [markdown]
# A curve is given by its five Weierstrass coefficients. Scaling by u = 2
# gives a non-minimal model of the same curve; minimal_model undoes it.

# %%
E = RationalEC(0, -1, 1, -10, -20)  # 11a1
big = RationalEC(0, -4, 8, -160, -1280)
print("j =", E.j, " disc =", E.disc)
print("rescaled model minimises back:", minimal_model(big) == minimal_model(E))
print("conductor:", conductor(E), tate_local(E, 11))

# %% [markdown]
# Traces at good primes, then the Hasse bound as a quick sanity check.

# %%
ps = [l for l in range(2, 200) if all(l % q for q in range(2, int(l**0.5) + 1)) and l != 11]
tv = trace_vector(E, ps)
a = np.array([tv[l] for l in ps])
print(dict(zip(ps[:10], a[:10].tolist())))
print("max |a_l| / 2 sqrt(l):", float(np.max(np.abs(a) / (2 * np.sqrt(ps)))))

# %% [markdown]
# A quadratic twist multiplies a_l by the Legendre symbol (d/l).

# %%
Ed = minimal_model(quadratic_twist(E, -3))
print("twist by -3 has conductor", conductor(Ed))
print([(l, ap(E, l), ap(Ed, l)) for l in (5, 7, 13, 19)])
