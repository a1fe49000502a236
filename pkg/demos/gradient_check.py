"""
Closed-form gradients against central finite differences.

The covariance gradient is checked along random Hermitian directions,
where the directional derivative is Re tr(G^H D). The phase gradient is
a conjugate (Wirtinger) gradient of a real function, so its directional
derivative along a complex d is 2 Re(g^H d).

Run:  python3 demos/gradient_check.py
"""

from pddagp import check_gradients

for dims in (dict(n_b=1, n_i=1, n_e=1, n_s=1, m_i=1, m_e=1),
             dict(n_b=3, n_i=2, n_e=2, n_s=4, m_i=2, m_e=2),
             dict(n_b=4, n_i=3, n_e=2, n_s=16, m_i=3, m_e=4)):
    print(dims)
    print('  ' + check_gradients(dims, cases=30).summary())
